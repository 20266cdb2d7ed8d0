"""The free boson is not C_2-cofinite: its quotient upper bounds keep
growing with the window and every slice stays unconverged.

    python3 demos/heisenberg_negative_control.py
"""

from pathlib import Path

from quasifinite import c2_quotient, compute_quotient_slice, load_voa, psi_surjection_check

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main():
    for W in (2, 3, 4):
        voa = load_voa(FIXTURES / f"heisenberg_W{W}.json")
        sl = compute_quotient_slice(voa, 0, 0)
        p = c2_quotient(voa)
        print(f"W = {W}: dim Q_0(0) <= {sl.dim_upper} (converged {sl.converged}); "
              f"C_2 profile {p.profile}")
    rep = psi_surjection_check(load_voa(FIXTURES / "heisenberg_W4.json"), 0, 0)
    print(f"surjection check: {rep.status} ({'; '.join(rep.reasons)})")


if __name__ == "__main__":
    main()
