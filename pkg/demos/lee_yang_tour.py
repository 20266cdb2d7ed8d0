"""Walk through the Lee-Yang fixture: quotient slices, the Hamiltonian
spectrum, the finite algebra A_0, Zhu's Poisson algebra and the Poisson
current bound.

    python3 demos/lee_yang_tour.py
"""

from pathlib import Path

from quasifinite import (VoaQuotientEngine, c2_quotient, dim_bound, extract_finite_algebra, format_rational,
                         load_voa, spectrum)

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "lee_yang_W12.json"


def main():
    voa = load_voa(FIXTURE)
    engine = VoaQuotientEngine(voa)
    p = c2_quotient(voa)
    print(f"{voa.name}: {voa.dim} basis vectors up to weight {voa.max_weight}")
    print(f"Zhu Poisson algebra: basis {p.symbols}, weights {p.weights}, "
          f"terminates in window: {p.c2_finite_in_window}")
    print()
    print(" n   d  dim_upper  converged  poisson bound  saturated")
    for n in range(2):
        for d in range(-1, 3):
            sl = engine.slice(n, d, with_h=False)
            b = dim_bound(p, n, d, saturate=2)
            print(f"{n:>2} {d:>3} {sl.dim_upper:>10} {str(sl.converged):>10} {b.bound:>14} {b.saturated_upper:>10}")
    print()
    for n in range(2):
        s = spectrum(engine, n)
        omega = ", ".join(format_rational(x) for x in s.omega)
        print(f"Omega_{n} = {{{omega}}}  phi_{n} = {s.phi_n}  g = {s.gap}  ell = {s.ell}")
    A0 = extract_finite_algebra(engine, 0)
    print(f"A_0 has dimension {A0.dim}; structural check failures: {len(A0.check())}")


if __name__ == "__main__":
    main()
