"""Command-line workbench.

Exit codes: 0 all checks pass, 1 check failures, 2 inconclusive
(unconverged windows), 3 input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .errors import (CapTooSmall, IncompatibleAlgebras, InvariantViolation, NonRationalSpectrum, NotConverged,
                     OutOfWindow, ParseError, StepLimitExceeded, WorkbenchError)
from .linalg import format_rational
from .report import Report, emit

COMMANDS = ("check-axioms", "borcherds", "quotient-dims", "spectrum", "finite-algebra", "zhu-poisson",
            "pca-bounds", "straighten", "surjection-check", "functor-check")


class InputError(WorkbenchError):
    """Bad command-line parameters."""


def _fmt_set(values) -> str:
    return "{" + ", ".join(format_rational(v) for v in values) + "}"


# -- inputs -----------------------------------------------------------------------


def _load_voa(args):
    from .voa import load_voa
    return load_voa(args.input)


def _load_source(args):
    """A VOA quotient engine, or a synthetic algebra named 'synthetic:NAME'."""
    from .quotient import VoaQuotientEngine
    from .synthetic import STANDARD_CASES, standard_algebra
    if args.input.startswith("synthetic:"):
        name = args.input.split(":", 1)[1]
        if name not in STANDARD_CASES:
            raise InputError(f"unknown synthetic algebra {name!r}; choose from {sorted(STANDARD_CASES)}")
        return standard_algebra(name)
    voa = _load_voa(args)
    return VoaQuotientEngine(voa, _window(args, voa))


def _window(args, voa):
    from .quotient import TruncationWindow
    W = voa.max_weight if args.max_weight is None else args.max_weight
    if W > voa.max_weight:
        raise InputError(f"--max-weight {W} exceeds the input's max_weight {voa.max_weight}")
    return TruncationWindow(W, depth=args.depth, rounds=args.rounds)


def _load_poisson(args, require_complete=True):
    from .zhu import load_poisson
    p = load_poisson(args.input)
    if require_complete and not p.complete:
        raise InputError(f"{args.input}: this command needs a complete Poisson algebra")
    return p


def _is_poisson_document(path: str) -> bool:
    from .voa import read_document
    return "complete" in read_document(path)


def _ranges(args):
    if args.n_max < 0 or args.d_min > args.d_max:
        raise InputError("empty parameter range")
    return range(0, args.n_max + 1), range(args.d_min, args.d_max + 1)


# -- commands ---------------------------------------------------------------------


def cmd_check_axioms(args) -> Report:
    from .current import check_hamiltonian_relation, check_lie_properties, check_raw_consistency
    from .voa import check_axioms
    voa = _load_voa(args)
    rep = Report("check-axioms", ["check", "status", "checked", "skipped", "detail"])
    ax = check_axioms(voa)
    rep.add("voa axioms", "PASS" if ax.ok else "FAIL", ax.checks, ax.skipped, "; ".join(ax.failures[:5]))
    lie = check_lie_properties(voa)
    wit = [f"skew {f}" for f in lie.skew_failures[:3]] + [f"jacobi {f}" for f in lie.jacobi_failures[:3]]
    rep.add("lie bracket", "PASS" if lie.ok else "FAIL", lie.checked, lie.window_skips, "; ".join(wit))
    checked, raw = check_raw_consistency(voa)
    rep.add("raw vs J bracket", "PASS" if not raw else "FAIL", checked, 0, "; ".join(str(f) for f in raw[:3]))
    ham = check_hamiltonian_relation(voa)
    rep.add("hamiltonian", "PASS" if not ham else "FAIL", voa.dim * 9 if voa.conformal is not None else 0, 0,
            "; ".join(str(f) for f in ham[:3]))
    if any(r[1] == "FAIL" for r in rep.rows):
        rep.worsen("FAIL")
    return rep


def cmd_borcherds(args) -> Report:
    from .voa import check_borcherds
    voa = _load_voa(args)
    res = check_borcherds(voa, bound=3, max_weight=args.max_weight)
    rep = Report("borcherds", ["k", "m", "n", "u", "v", "w", "residual"])
    S = voa.symbols
    for r in res.residuals:
        rep.add(r.k, r.m, r.n, S[r.u], S[r.v], S[r.w], voa.format_vec(r.residual))
    rep.notes.append(f"checked {res.checked}, skipped {res.skipped}, trivial {res.trivial}")
    if res.residuals:
        rep.worsen("FAIL")
    return rep


def cmd_quotient_dims(args) -> Report:
    src = _load_source(args)
    ns, ds = _ranges(args)
    rep = Report("quotient-dims", ["n", "d", "dim_upper", "generators", "relations", "dropped", "converged"])
    for n in ns:
        for d in ds:
            sl = src.slice(n, d)
            rep.add(n, d, sl.dim_upper, len(sl.generators), len(sl.relations), sl.dropped, bool(sl.converged))
            if not sl.converged:
                rep.worsen("INCONCLUSIVE")
    return rep


def cmd_spectrum(args) -> Report:
    from .finite import spectrum
    src = _load_source(args)
    rep = Report("spectrum", ["n", "phi_n", "Omega_n", "Gamma_0", "g", "ell", "provisional"])
    for n in range(args.n_max + 1):
        try:
            sp = spectrum(src, n)
        except OutOfWindow as exc:
            rep.notes.append(f"n={n}: {exc}")
            rep.worsen("INCONCLUSIVE")
            continue
        rep.add(n, str(sp.phi_n), _fmt_set(sp.omega), _fmt_set(sp.gamma_0), sp.gap, sp.ell, sp.provisional)
        if sp.provisional:
            rep.worsen("INCONCLUSIVE")
        elif sp.violations():
            rep.notes.extend(sp.violations())
            rep.worsen("FAIL")
    return rep


def cmd_finite_algebra(args) -> Report:
    from .finite import extract_finite_algebra
    src = _load_source(args)
    rep = Report("finite-algebra", ["n", "lambda", "mu", "dim"])
    for n in range(args.n_max + 1):
        try:
            A = extract_finite_algebra(src, n)
        except (NotConverged, OutOfWindow) as exc:
            rep.notes.append(f"n={n}: {exc}")
            rep.worsen("INCONCLUSIVE")
            continue
        for (lam, mu), ids in A.blocks().items():
            rep.add(n, lam, mu, len(ids))
        fails = A.check()
        rep.notes.extend(f"n={n}: {f}" for f in fails)
        rep.notes.extend(f"n={n}: uncertified {u}" for u in A.uncertified)
        if fails:
            rep.worsen("FAIL")
        elif A.uncertified:
            rep.worsen("INCONCLUSIVE")
    return rep


def cmd_zhu_poisson(args) -> Report:
    from .zhu import c2_quotient, poisson_check
    rep = Report("zhu-poisson", ["law", "witness"])
    if _is_poisson_document(args.input):
        p = _load_poisson(args, require_complete=False)
    else:
        voa = _load_voa(args)
        p = c2_quotient(voa, args.max_weight)
        prof = ", ".join(f"{r}:{k}" for r, k in sorted(p.profile.items()))
        rep.notes.append(f"weight profile {prof}")
        if not p.c2_finite_in_window:
            rep.notes.append("C_2 quotient does not terminate inside the window")
            rep.worsen("INCONCLUSIVE")
    rep.notes.append(f"dim p = {p.dim}: {', '.join(p.symbols)}")
    chk = poisson_check(p)
    for law, witness in chk.failures:
        rep.add(law, witness)
    rep.notes.append(f"checked {chk.checked}, skipped {chk.skipped}")
    if chk.failures:
        rep.worsen("FAIL")
    return rep


def cmd_pca_bounds(args) -> Report:
    from .pca import dim_bound
    p = _load_poisson(args)
    ns, ds = _ranges(args)
    rep = Report("pca-bounds", ["n", "d", "r", "bound", "saturated_upper"])
    for n in ns:
        for d in ds:
            b = dim_bound(p, n, d, saturate=args.rounds if args.saturate else None)
            rep.add(n, d, b.r, b.bound, b.saturated_upper)
    return rep


def parse_monomial(p, text: str):
    """'x:2 y:-1' -> [(2, x), (-1, y)]: symbol and degree of each Psi factor."""
    index = {s: i for i, s in enumerate(p.symbols)}
    parts = []
    for tok in text.replace(",", " ").split():
        sym, sep, deg = tok.rpartition(":")
        if not sep or sym not in index:
            raise InputError(f"bad monomial factor {tok!r}; expected SYMBOL:DEGREE with a basis symbol")
        try:
            parts.append((int(deg), index[sym]))
        except ValueError:
            raise InputError(f"bad degree in {tok!r}") from None
    return parts


def format_monomial(p, mono) -> str:
    if not mono:
        return "1"
    return " ".join(f"{p.symbols[x]}:{d}" for d, x in mono)


def cmd_straighten(args) -> Report:
    from .pca import normalize, replay_certificate, straighten
    p = _load_poisson(args)
    if not args.monomial:
        raise InputError("straighten needs --monomial 'SYMBOL:DEGREE ...'")
    parts = parse_monomial(p, args.monomial)
    n = args.n_max
    res = straighten(p, parts, n)
    rep = Report("straighten", ["coefficient", "monomial"])
    for mono, c in sorted(res.poly.items(), key=lambda t: [(-d, x) for d, x in t[0]]):
        rep.add(c, format_monomial(p, mono))
    start = normalize(p, parts)
    fails = replay_certificate(p, {start: 1} if start is not None else {}, res, n)
    rep.notes.append(f"n = {n}, {len(res.steps)} logged steps, certificate {'replays' if not fails else 'FAILS'}")
    if fails:
        rep.notes.extend(fails)
        rep.worsen("FAIL")
    return rep


def cmd_surjection_check(args) -> Report:
    from .pca import psi_surjection_check
    voa = _load_voa(args)
    window = _window(args, voa)
    ns, ds = _ranges(args)
    rep = Report("surjection-check", ["n", "d", "status", "quotient_dim", "converged", "bound", "identity_checks"])
    for n in ns:
        for d in ds:
            r = psi_surjection_check(voa, n, d, window)
            rep.add(n, d, r.status, r.quotient_dim, r.quotient_converged, r.bound, r.generator_checks)
            rep.notes.extend(f"n={n} d={d}: {why}" for why in r.reasons)
            rep.worsen(r.status)
    return rep


def cmd_functor_check(args) -> Report:
    from .modules import functor_check
    src = _load_source(args)
    r = functor_check(src, n=args.n, modules=args.modules, seed=args.seed, cap=args.cap)
    rep = Report("functor-check", ["module", "dim_X", "dim_E", "rank", "intertwines", "ok"])
    for name, rt in r.rows:
        rep.add(name, rt.dim_x, rt.dim_e, rt.rank, rt.intertwines, rt.ok)
        if rt.witness:
            rep.notes.append(f"{name}: {rt.witness}")
    rep.notes.append(f"n = {r.n}, g = {r.gap}, Gamma_0 = {_fmt_set(r.gamma_0)}, dim A_n = {r.dim_small}")
    rep.notes.append(f"restricted dual involutive: {'yes' if r.dual_involutive else 'no'}")
    rep.notes.extend(r.pairing_failures)
    if not r.ok:
        rep.worsen("FAIL")
    return rep


HANDLERS = {
    "check-axioms": cmd_check_axioms, "borcherds": cmd_borcherds, "quotient-dims": cmd_quotient_dims,
    "spectrum": cmd_spectrum, "finite-algebra": cmd_finite_algebra, "zhu-poisson": cmd_zhu_poisson,
    "pca-bounds": cmd_pca_bounds, "straighten": cmd_straighten, "surjection-check": cmd_surjection_check,
    "functor-check": cmd_functor_check,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quasifinite", description="Quasi-finite current algebra workbench.")
    ap.add_argument("command_pos", nargs="?", choices=COMMANDS, metavar="COMMAND",
                    help="one of: " + ", ".join(COMMANDS))
    ap.add_argument("--command", choices=COMMANDS, help="alternative to the positional command")
    ap.add_argument("--input", required=True, help="JSON input path, or synthetic:NAME")
    ap.add_argument("--n-max", type=int, default=2)
    ap.add_argument("--d-min", type=int, default=-2)
    ap.add_argument("--d-max", type=int, default=2)
    ap.add_argument("--max-weight", type=int, default=None)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--rounds", type=int, default=1)
    ap.add_argument("--saturate", action="store_true", help="pca-bounds: eliminate D-relations for --rounds rounds")
    ap.add_argument("--cap", type=int, default=None, help="functor-check: cap level N of the ambient algebra (default n + g + 1)")
    ap.add_argument("--n", type=int, default=None, help="functor-check level (default: the gap g)")
    ap.add_argument("--modules", type=int, default=10, help="functor-check: number of random modules")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--monomial", default=None, help="straighten: 'SYMBOL:DEGREE ...'")
    ap.add_argument("--format", choices=("table", "json"), default="table")
    ap.add_argument("--out", default=None, help="write the report here instead of stdout")
    return ap


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 3
    command = args.command or args.command_pos
    if command is None or (args.command and args.command_pos and args.command != args.command_pos):
        print("error: give exactly one command", file=stderr)
        return 3
    if args.depth < 1 or args.rounds < 1 or (args.max_weight is not None and args.max_weight < 0):
        print("error: need depth >= 1, rounds >= 1 and max-weight >= 0", file=stderr)
        return 3
    try:
        rep = HANDLERS[command](args)
    except (ParseError, InvariantViolation, InputError, CapTooSmall, IncompatibleAlgebras) as exc:
        print(f"error: {args.input}: {exc}", file=stderr)
        return 3
    except (NotConverged, OutOfWindow) as exc:
        print(f"inconclusive: {args.input}: {exc}", file=stderr)
        return 2
    except (NonRationalSpectrum, StepLimitExceeded) as exc:
        print(f"failure: {args.input}: {exc}", file=stderr)
        return 1
    text = emit(rep, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    if args.format == "table":
        for note in rep.notes:
            print(f"note: {note}", file=stderr)
        print(f"status: {rep.status}", file=stderr)
    return rep.exit_code


def main() -> None:
    sys.exit(run())
