"""The Poisson current algebra of a finite-dimensional graded Poisson algebra p.

Loop symbols Psi_n(x) = x (x) t^{n + wt x - 1} have degree -n.  Monomials
are commutative products, stored as tuples of (degree, element) sorted by
decreasing degree; elements are non-unit basis indices, since
Psi_n(1) = delta_{n,0}.  A monomial whose parts have degrees (d_1, ..., d_k)
is the vector with index (d_1, ..., d_k) in the quotient Q_n, where every
part of degree <= -n-1 kills it.

Straightening rewrites an equal adjacent pair of degree d by

    [d](x) [d](y) = [2d](x.y) - sum_{j != 0} [d+j](x) [d-j](y),

keeping only the finitely many terms with both degrees >= -n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import StepLimitExceeded
from .linalg import ONE, RowReducer, Vec, axpy, clean
from .zhu import PoissonAlgebraData

Monomial = Tuple[Tuple[int, int], ...]  # ((degree, element), ...)
StraightPoly = Dict[Monomial, Fraction]


@dataclass(frozen=True, order=True)
class LoopSymbol:
    index: int
    element: int

    @property
    def degree(self) -> int:
        return -self.index


def loop_bracket(p: PoissonAlgebraData, a: LoopSymbol, b: LoopSymbol) -> Dict[LoopSymbol, Fraction]:
    """[Psi_m(x), Psi_n(y)] = Psi_{m+n}({x, y})."""
    out: Dict[LoopSymbol, Fraction] = {}
    idx = a.index + b.index
    for e, c in p.poisson_bracket({a.element: ONE}, {b.element: ONE}).items():
        if e == p.unit and idx != 0:
            continue
        sym = LoopSymbol(idx, e)
        out[sym] = out.get(sym, 0) + c
    return {s: c for s, c in out.items() if c}


# -- monomials ---------------------------------------------------------------------


def normalize(p: PoissonAlgebraData, parts: Sequence[Tuple[int, int]]) -> Optional[Monomial]:
    """Sort the parts; drop Psi_0(1); return None when a Psi_n(1), n != 0, appears."""
    out = []
    for deg, x in parts:
        if x == p.unit:
            if deg != 0:
                return None
            continue
        out.append((deg, x))
    out.sort(key=lambda t: (-t[0], t[1]))
    return tuple(out)


def measure(mono: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Well-order key; every straightening step strictly decreases it."""
    return (len(mono), tuple(-d for d, _ in mono))


def is_strict(mono: Monomial) -> bool:
    return all(mono[i][0] > mono[i + 1][0] for i in range(len(mono) - 1))


def is_killed(mono: Monomial, n: int) -> bool:
    return any(d <= -n - 1 for d, _ in mono)


def rewrite_pair(p: PoissonAlgebraData, mono: Monomial, i: int, n: int) -> StraightPoly:
    """One application of the pair rule at positions i, i+1 (degrees equal)."""
    d, x = mono[i]
    d2, y = mono[i + 1]
    if d != d2:
        raise ValueError("rewrite_pair needs equal adjacent degrees")
    rest = mono[:i] + mono[i + 2:]
    out: StraightPoly = {}
    for e, c in p.multiply({x: ONE}, {y: ONE}).items():
        m = normalize(p, rest + ((2 * d, e),))
        if m is not None:
            out[m] = out.get(m, 0) + c
    for j in range(-(d + n), d + n + 1):
        if j == 0:
            continue
        m = normalize(p, rest + ((d + j, x), (d - j, y)))
        if m is not None:
            out[m] = out.get(m, 0) - 1
    return {m: c for m, c in out.items() if c}


@dataclass
class Step:
    monomial: Monomial
    coefficient: Fraction
    rule: str  # "pair" | "kill"
    position: int
    outputs: StraightPoly


@dataclass
class StraightenResult:
    poly: StraightPoly
    steps: List[Step] = field(default_factory=list)


def straighten(p: PoissonAlgebraData, monomial: Sequence[Tuple[int, int]], n: int,
               limit: int = 100000, coefficient=ONE) -> StraightenResult:
    """Normal form of a monomial (or a scaled one) in Q_n, with a step log."""
    start = normalize(p, monomial)
    if start is None:
        return StraightenResult({})
    return straighten_poly(p, {start: Fraction(coefficient)}, n, limit)


def straighten_poly(p: PoissonAlgebraData, poly: Mapping[Monomial, Fraction], n: int,
                    limit: int = 100000) -> StraightenResult:
    pending: Dict[Monomial, Fraction] = {}
    for m, c in poly.items():
        if c:
            pending[m] = pending.get(m, 0) + c
    result: StraightPoly = {}
    steps: List[Step] = []
    count = 0
    while pending:
        mono = max(pending, key=measure)
        c = pending.pop(mono)
        if not c:
            continue
        if is_killed(mono, n):
            steps.append(Step(mono, c, "kill", -1, {}))
            continue
        if is_strict(mono):
            result[mono] = result.get(mono, 0) + c
            continue
        count += 1
        if count > limit:
            raise StepLimitExceeded(f"straightening did not finish within {limit} steps")
        i = next(k for k in range(len(mono) - 1) if mono[k][0] == mono[k + 1][0])
        outs = rewrite_pair(p, mono, i, n)
        top = measure(mono)
        for m in outs:
            if not measure(m) < top:
                raise AssertionError(f"measure did not decrease: {mono} -> {m}")
        steps.append(Step(mono, c, "pair", i, outs))
        for m, k in outs.items():
            pending[m] = pending.get(m, 0) + c * k
    return StraightenResult({m: c for m, c in result.items() if c}, steps)


def replay_certificate(p: PoissonAlgebraData, start: StraightPoly, res: StraightenResult, n: int) -> List[str]:
    """Re-derive every logged step and check that the log accounts for the result."""
    fails = []
    total: Dict[Monomial, Fraction] = dict(start)
    for k, st in enumerate(res.steps):
        if st.rule == "kill":
            if not is_killed(st.monomial, n):
                fails.append(f"step {k}: kill rule applied to a surviving monomial")
        else:
            again = rewrite_pair(p, st.monomial, st.position, n)
            if again != st.outputs:
                fails.append(f"step {k}: logged outputs differ from the pair rule")
            if any(not measure(m) < measure(st.monomial) for m in st.outputs):
                fails.append(f"step {k}: measure did not decrease")
            for m, c in st.outputs.items():
                total[m] = total.get(m, 0) + st.coefficient * c
        total[st.monomial] = total.get(st.monomial, 0) - st.coefficient
    total = {m: c for m, c in total.items() if c}
    if total != res.poly:
        fails.append("replayed steps do not reproduce the normal form")
    return fails


# -- index enumeration ------------------------------------------------------------


def enumerate_indices(k: int, d: int, n: int, strict: bool = True) -> List[Tuple[int, ...]]:
    """Sequences d_1 >= ... >= d_k >= -n (strict: >) with sum d, sorted."""

    def rec(k, total, upper):
        if k == 0:
            return [()] if total == 0 else []
        out = []
        low = -n
        # the remaining k-1 parts are each >= -n, so d_1 <= total + (k-1) n
        hi = min(upper, total + (k - 1) * n)
        for first in range(hi, low - 1, -1):
            if first * k < total and not strict:
                break
            for tail in rec(k - 1, total - first, first - 1 if strict else first):
                out.append((first,) + tail)
        return out

    if k < 0:
        return []
    return sorted(rec(k, d, d + max(k - 1, 0) * n))


def enumerate_indices_bounded(k: int, d: int, n: int, strict: bool = True) -> List[Tuple[int, ...]]:
    """Same set, generated from all k-subsets of the part range [-n, d + (k-1) n]."""
    if k == 0:
        return [()] if d == 0 else []
    parts = range(d + (k - 1) * n, -n - 1, -1)
    gen = itertools.combinations(parts, k) if strict else itertools.combinations_with_replacement(parts, k)
    return sorted(seq for seq in gen if sum(seq) == d)


def max_strict_length(d: int, n: int) -> int:
    """Largest k for which k distinct parts >= -n can sum to d."""
    k = 0
    while -(k + 1) * n + (k + 1) * k // 2 <= d:
        k += 1
    return k


@dataclass
class PcaDimReport:
    n: int
    d: int
    r: int
    bound: int
    counts: Dict[int, int]
    saturated_upper: Optional[int] = None
    rounds_used: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "r": self.r, "bound": self.bound,
            "counts": [[k, c] for k, c in sorted(self.counts.items())],
            "saturated_upper": self.saturated_upper, "rounds_used": self.rounds_used,
        }


def spanning_monomials(p: PoissonAlgebraData, n: int, d: int) -> List[Monomial]:
    if d <= -n - 1:
        return []
    xs = p.non_unit()
    out = []
    for k in range(max_strict_length(d, n) + 1):
        for seq in enumerate_indices(k, d, n, strict=True):
            for els in itertools.product(xs, repeat=k):
                out.append(tuple(zip(seq, els)))
    return out


def dim_bound(p: PoissonAlgebraData, n: int, d: int, saturate: Optional[int] = None) -> PcaDimReport:
    """sum_k r^k |strict index sequences of length k|, and optionally a
    saturated bound after eliminating D-relations and ideal kills."""
    r = p.r
    counts: Dict[int, int] = {}
    if d > -n - 1:
        for k in range(max_strict_length(d, n) + 1):
            c = len(enumerate_indices(k, d, n, strict=True))
            if c:
                counts[k] = c
    bound = sum(r ** k * c for k, c in counts.items()) if r else counts.get(0, 0)
    rep = PcaDimReport(n, d, r, bound, counts)
    if saturate:
        rep.saturated_upper, rep.rounds_used = _saturate(p, n, d, saturate)
    return rep


def d_relation(p: PoissonAlgebraData, e: int, x: int, y: int, n: int) -> StraightPoly:
    """D(x, y) of degree e in Q_n: [e](x.y) - sum_{a+b=e} [a](x) [b](y), parts >= -n."""
    out: StraightPoly = {}
    for z, c in p.multiply({x: ONE}, {y: ONE}).items():
        m = normalize(p, ((e, z),))
        if m is not None:
            out[m] = out.get(m, 0) + c
    for a in range(-n, e + n + 1):
        m = normalize(p, ((a, x), (e - a, y)))
        if m is not None:
            out[m] = out.get(m, 0) - 1
    return {m: c for m, c in out.items() if c}


def _saturate(p: PoissonAlgebraData, n: int, d: int, rounds: int) -> Tuple[int, int]:
    span = spanning_monomials(p, n, d)
    if not span:
        return 0, 0
    red = RowReducer(priority=lambda m: measure(m))
    xs = p.non_unit()
    # monomials with a sub-product of degree <= -n-1 lie in the ideal
    for m in span:
        neg = sum(dd for dd, _ in m if dd < 0)
        if neg <= -n - 1:
            red.add({m: ONE})
    used = 0
    for rnd in range(1, rounds + 1):
        before = red.rank
        used = rnd
        for length in range(0, rnd):
            for cof_deg in range(-n * length, d + n * (length + 2) + 1):
                e = d - cof_deg
                cofactors = [()] if length == 0 else [
                    tuple(zip(seq, els))
                    for seq in enumerate_indices(length, cof_deg, n, strict=False)
                    for els in itertools.product(xs, repeat=length)
                ]
                if length == 0 and cof_deg != 0:
                    continue
                for x in xs:
                    for y in xs:
                        if y < x:
                            continue
                        rel = d_relation(p, e, x, y, n)
                        if not rel:
                            continue
                        for cof in cofactors:
                            prod = {}
                            for m, c in rel.items():
                                mm = normalize(p, m + cof)
                                if mm is not None:
                                    prod[mm] = prod.get(mm, 0) + c
                            nf = straighten_poly(p, prod, n).poly
                            if nf:
                                red.add(nf)
        if red.rank == before:
            break
    return len(span) - red.rank, used


# -- Poisson ideal identity -----------------------------------------------------------


Formal = Dict[tuple, Fraction]


def _single(p, S: int, vec: Mapping) -> Formal:
    out: Formal = {}
    for e, c in vec.items():
        key = ("scalar",) if e == p.unit else ("single", S, e)
        if e == p.unit and S != 0:
            continue
        out[key] = out.get(key, 0) + c
    return out


def _family(p, S: int, X: Mapping, Y: Mapping) -> Formal:
    """sum over all a of Psi_a(X) Psi_{S-a}(Y), coefficientwise in the basis."""
    out: Formal = {}
    for i, a in X.items():
        for j, b in Y.items():
            c = a * b
            if i == p.unit and j == p.unit:
                # Psi_a(1) Psi_{S-a}(1) survives only for a = S - a = 0
                if S != 0:
                    continue
                key = ("scalar",)
            elif i == p.unit:
                key = ("single", S, j)
            elif j == p.unit:
                key = ("single", S, i)
            else:
                key = ("family", S, min(i, j), max(i, j))
            out[key] = out.get(key, 0) + c
    return out


def _add(acc: Formal, c, f: Formal) -> Formal:
    for k, v in f.items():
        acc[k] = acc.get(k, 0) + c * v
    return acc


def formal_D(p, m: int, X: Mapping, Y: Mapping) -> Formal:
    """D_m(X, Y) = Psi_m(X.Y) - sum_j Psi_{m-j}(X) Psi_j(Y), as a formal family."""
    out = _single(p, m, p.multiply(X, Y))
    return _add(out, -1, _family(p, m, X, Y))


def formal_bracket(p, f: Formal, n: int, z: Mapping) -> Formal:
    """{f, Psi_n(z)} by the Leibniz rule, termwise over the family index."""
    out: Formal = {}
    for key, c in f.items():
        if key[0] == "scalar":
            continue
        if key[0] == "single":
            _, S, e = key
            _add(out, c, _single(p, S + n, p.poisson_bracket({e: ONE}, z)))
        else:
            _, S, i, j = key
            _add(out, c, _family(p, S + n, {i: ONE}, p.poisson_bracket({j: ONE}, z)))
            _add(out, c, _family(p, S + n, p.poisson_bracket({i: ONE}, z), {j: ONE}))
    return {k: v for k, v in out.items() if v}


@dataclass
class IdentityReport:
    failures: List[tuple]
    checked: int

    @property
    def ok(self) -> bool:
        return not self.failures


def poisson_ideal_identity_check(p: PoissonAlgebraData, sample: Optional[Sequence[tuple]] = None,
                                 bound: int = 3) -> IdentityReport:
    """{D_m(x,y), Psi_n(z)} = D_{m+n}(x,{y,z}) + D_{m+n}(y,{x,z}) coefficientwise."""
    if sample is None:
        rng = range(-bound, bound + 1)
        sample = [(x, y, z, m, n) for x in range(p.dim) for y in range(p.dim) for z in range(p.dim)
                  for m in rng for n in rng]
    fails = []
    for x, y, z, m, n in sample:
        X, Y, Z = {x: ONE}, {y: ONE}, {z: ONE}
        lhs = formal_bracket(p, formal_D(p, m, X, Y), n, Z)
        rhs = _add(formal_D(p, m + n, X, p.poisson_bracket(Y, Z)), 1, formal_D(p, m + n, Y, p.poisson_bracket(X, Z)))
        diff = _add(dict(lhs), -1, rhs)
        bad = sorted((k for k, v in diff.items() if v), key=repr)
        if bad:
            fails.append((x, y, z, m, n, bad[0]))
    return IdentityReport(fails, len(sample))


def bracket_degree_check(p: PoissonAlgebraData, degrees: Sequence[int]) -> List[str]:
    """{S(d), S(e-i) S(i)} lands in S(d+e-i) S(i) + S(e-i) S(d+i) on loop monomials."""
    fails = []
    xs = range(p.dim)
    for d in degrees:
        for a in degrees:
            for b in degrees:
                for z in xs:
                    for x in xs:
                        for y in xs:
                            # {Psi_{-d}(z), Psi_{-a}(x) Psi_{-b}(y)} by Leibniz
                            t1 = loop_bracket(p, LoopSymbol(-d, z), LoopSymbol(-a, x))
                            t2 = loop_bracket(p, LoopSymbol(-d, z), LoopSymbol(-b, y))
                            if any(s.degree != d + a for s in t1) or any(s.degree != d + b for s in t2):
                                fails.append(f"degree bookkeeping fails at ({d}, {a}, {b})")
    return fails


# -- comparison with the current algebra ----------------------------------------------


@dataclass
class PsiReport:
    status: str  # PASS | FAIL | INCONCLUSIVE
    n: int
    d: int
    quotient_dim: Optional[int]
    quotient_converged: bool
    p_dim: Optional[int]
    c2_finite: Optional[bool]
    bound: Optional[int]
    generator_checks: int = 0
    generator_skipped: int = 0
    reasons: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "status": self.status, "n": self.n, "d": self.d,
            "quotient_dim": self.quotient_dim, "quotient_converged": self.quotient_converged,
            "p_dim": self.p_dim, "c2_finite": self.c2_finite, "bound": self.bound,
            "generator_checks": self.generator_checks, "generator_skipped": self.generator_skipped,
            "reasons": list(self.reasons),
        }


def psi_surjection_check(voa, n: int, d: int, window=None, p: Optional[PoissonAlgebraData] = None) -> PsiReport:
    """Compare dim Q_n(d) of the current algebra with the Poisson current bound.

    For a VOA: p = V / C_2 V is computed in the window.  The surjection from
    the Poisson current algebra forces dim Q_n(d) <= dim_bound.  The map on
    generators is well defined when every C_2 representative u_(N) v
    (N <= -2) satisfies the normal-ordered identity in Q_n, which expresses
    J(u_(N) v) at a lower filtration level.  Any other quotient source may
    be passed together with an explicit p; then only the bound is compared.
    """
    from .errors import OutOfWindow
    from .filtration import normal_ordered_residual
    from .quotient import QuotientSource, VoaQuotientEngine
    from .zhu import c2_quotient

    if isinstance(voa, QuotientSource):
        if p is None:
            raise ValueError("a synthetic source needs an explicit Poisson algebra")
        sl = voa.slice(n, d)
        bound = dim_bound(p, n, d).bound
        rep = PsiReport("PASS", n, d, sl.dim_upper, sl.converged, p.dim, None, bound)
        if not sl.converged:
            rep.status = "INCONCLUSIVE"
            rep.reasons.append("quotient slice not converged")
        elif sl.dim_upper > bound:
            rep.status = "FAIL"
            rep.reasons.append(f"dim {sl.dim_upper} exceeds bound {bound}")
        return rep

    engine = VoaQuotientEngine(voa, window)
    if p is None:
        p = c2_quotient(voa, engine.window.max_weight)
    sl = engine.slice(n, d, with_h=False)
    rep = PsiReport("PASS", n, d, sl.dim_upper, sl.converged, p.dim, p.c2_finite_in_window, None)
    if not p.c2_finite_in_window:
        rep.reasons.append("C_2 quotient does not terminate inside the window")
    if not sl.converged:
        rep.reasons.append("quotient slice not converged")
    if rep.reasons:
        rep.status = "INCONCLUSIVE"
        return rep
    rep.bound = dim_bound(p, n, d).bound
    if sl.dim_upper > rep.bound:
        rep.status = "FAIL"
        rep.reasons.append(f"dim {sl.dim_upper} exceeds bound {rep.bound}")
    W = engine.window.max_weight
    for u in range(voa.dim):
        for v in range(voa.dim):
            if u == voa.vacuum or v == voa.vacuum:
                continue
            for N in range(-2, -W - 2, -1):
                if voa.product_weight(N, u, v) > W:
                    break
                try:
                    res = normal_ordered_residual(engine, n, -d, N, u, v)
                except OutOfWindow:
                    rep.generator_skipped += 1
                    continue
                rep.generator_checks += 1
                if res:
                    rep.status = "FAIL"
                    rep.reasons.append(f"identity fails for {voa.symbols[u]}_({N}){voa.symbols[v]}")
    return rep
