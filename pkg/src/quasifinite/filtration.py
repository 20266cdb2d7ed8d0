"""The weight filtration on the current algebra and its associated graded.

A product of currents J(u_1)...J(u_k) has filtration level sum wt(u_i).
On Q_n the normal-ordered product identity

    J_p(u_(N) v) 1_n = sum_i (-1)^i C(N, i) [ J_{k+N-i}(u) J_{m+i}(v)
                                             - (-1)^N J_{m+N-i}(v) J_{k+i}(u) ] 1_n

with k = 1 - wt u and m = p - k - N has only finitely many nonzero terms,
since J_t(x) 1_n = 0 for t >= n+1.  Its right side has level wt u + wt v,
which is below wt(u_(N) v) = wt u + wt v - N - 1 as soon as N <= -2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .current import CurrentAlgebra
from .errors import OutOfWindow
from .linalg import ONE, Vec, axpy, binomial, clean
from .quotient import TruncationWindow, VoaQuotientEngine
from .voa import VoaData


def normal_ordered_residual(engine: VoaQuotientEngine, n: int, p: int, N: int, u: int, v: int) -> Vec:
    """Left side minus right side of the identity above, in Q_n(-p) coordinates.

    Raises OutOfWindow when u_(N) v or one of the expansions leaves the window.
    """
    voa = engine.voa
    d = -p
    if d <= -n - 1:
        return {}
    if not voa.in_window(N, u, v):
        raise OutOfWindow(f"{voa.symbols[u]}_({N}){voa.symbols[v]} is not stored",
                          location=(N, voa.symbols[u], voa.symbols[v]))
    if voa.product_weight(N, u, v) > engine.window.max_weight:
        raise OutOfWindow(f"{voa.symbols[u]}_({N}){voa.symbols[v]} lies above the window",
                          location=(N, voa.symbols[u], voa.symbols[v]))
    k = 1 - voa.weights[u]
    m = p - k - N
    diff: Vec = dict(engine._kill_vacuum(voa.basis_product(N, u, v), d))
    for i in range(0, max(n - m, -1) + 1):
        c = (-1) ** i * binomial(N, i)
        if c:
            axpy(diff, -c, engine.expand(n, k + N - i, u, m + i, v))
    sign = (-1) ** (N % 2)
    for i in range(0, max(n - k, -1) + 1):
        c = (-1) ** i * binomial(N, i)
        if c:
            axpy(diff, c * sign, engine.expand(n, m + N - i, v, k + i, u))
    sl = engine.slice(n, d, with_h=False)
    return sl.coords(clean(diff))


def level_of(voa: VoaData, terms) -> int:
    """Filtration level of a sum of single currents: the largest weight present."""
    return max((voa.weights[u] for (_, u) in terms), default=0)


@dataclass
class GrFiltrationReport:
    checked: Dict[str, int] = field(default_factory=dict)
    skipped: Dict[str, int] = field(default_factory=dict)
    failures: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def _count(self, table, name):
        table[name] = table.get(name, 0) + 1

    def to_dict(self) -> dict:
        return {
            "checked": [[k, v] for k, v in sorted(self.checked.items())],
            "skipped": [[k, v] for k, v in sorted(self.skipped.items())],
            "failures": [list(f) for f in self.failures],
            "ok": self.ok,
        }


def gr_filtration_check(voa: VoaData, samples: Optional[Sequence[Tuple[int, int, int, int]]] = None,
                        window: Optional[TruncationWindow] = None, mode_bound: int = 2,
                        levels: Sequence[int] = (0, 1)) -> GrFiltrationReport:
    """Check the filtration laws on sampled modes.

    samples are (p, u, v, N): the current J_p(u_(N) v).  Checks:
    (i) normal forms never raise the level; (ii) [J(u), J(v)] has level at
    most wt u + wt v - 1; (iii) the N = -1 identity holds in each Q_n, so
    J_p(u_(-1) v) agrees with a sum of level wt u + wt v products;
    (iv) for N <= -2 the same identity exhibits J_p(u_(N) v) at the lower
    level wt u + wt v.
    """
    rep = GrFiltrationReport()
    alg = CurrentAlgebra(voa)
    engine = VoaQuotientEngine(voa, window)
    W = engine.window.max_weight
    basis = [u for u in range(voa.dim) if voa.weights[u] <= W]
    rng = range(-mode_bound, mode_bound + 1)

    for u in basis:
        for m in rng:
            nf = alg.normal_form({(m, u): ONE})
            rep._count(rep.checked, "normal form level")
            if level_of(voa, nf.terms) > voa.weights[u]:
                rep.failures.append(("normal form level", f"J_{m}({voa.symbols[u]})"))
    for u in basis:
        for v in basis:
            for a in rng:
                for b in rng:
                    try:
                        br = alg.bracket_modes(a, u, b, v)
                    except OutOfWindow:
                        rep._count(rep.skipped, "commutator level")
                        continue
                    rep._count(rep.checked, "commutator level")
                    if br and level_of(voa, br) > voa.weights[u] + voa.weights[v] - 1:
                        rep.failures.append(("commutator level",
                                             f"[J_{a}({voa.symbols[u]}), J_{b}({voa.symbols[v]})]"))
    if samples is None:
        samples = [(p, u, v, N) for u in basis for v in basis if u != voa.vacuum and v != voa.vacuum
                   for N in (-1, -2, -3) for p in rng]
    for p, u, v, N in samples:
        name = "product identity" if N == -1 else "level drop"
        for n in levels:
            try:
                res = normal_ordered_residual(engine, n, p, N, u, v)
            except OutOfWindow:
                rep._count(rep.skipped, name)
                continue
            rep._count(rep.checked, name)
            if res:
                rep.failures.append((name, f"n={n} J_{p}({voa.symbols[u]}_({N}){voa.symbols[v]})"))
    return rep
