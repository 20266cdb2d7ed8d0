"""X -> E_n(P_n (x) X) on the synthetic finite algebras.

    python3 demos/functor_round_trip.py
"""

from quasifinite import STANDARD_CASES, functor_check, format_rational, standard_algebra


def main():
    for name in sorted(STANDARD_CASES):
        rep = functor_check(standard_algebra(name), modules=10, seed=1)
        gamma = ", ".join(format_rational(g) for g in rep.gamma_0)
        dims = [r.dim_x for _, r in rep.rows]
        print(f"{name:>13}: Gamma_0 = {{{gamma}}}, g = {rep.gap}, dim A_n = {rep.dim_small}, "
              f"module dims {dims}, all round trips ok: {rep.ok}")


if __name__ == "__main__":
    main()
