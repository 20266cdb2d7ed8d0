"""Finite shadows of the module category: A_n-modules, P_n (x) -, E_n, K_n
and restricted duals.

A ``GradedModuleShadow`` stores finitely many levels (generalized
h-eigenvalues) and named operators between them.  The progenerator P_n is
realized inside a cap algebra A_N as the sum of blocks A[lam, mu] with
lam in Gamma_N and mu in Gamma_n, which is A_N 1_{A_n}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import CapTooSmall, IncompatibleAlgebras
from .finite import FiniteAlgebra, gamma_set, in_gamma
from .linalg import ONE, RowReducer, SparseMatrix, Vec, axpy, clean, rank_kernel, solve_in_span, span_rank


# -- A_n-modules -------------------------------------------------------------------


@dataclass
class FinModule:
    """A left module over a FiniteAlgebra given by one matrix per basis element."""

    algebra: FiniteAlgebra
    action: Tuple[SparseMatrix, ...]

    @property
    def dim(self) -> int:
        return self.action[0].rows if self.action else 0

    def act(self, a: Mapping, x: Mapping) -> Vec:
        out: Vec = {}
        for i, c in a.items():
            axpy(out, c, self.action[i].apply(x))
        return clean(out)

    def matrix_of(self, a: Mapping) -> SparseMatrix:
        out = SparseMatrix.zero(self.dim, self.dim)
        for i, c in a.items():
            out = out + self.action[i].scale(c)
        return out

    def check(self) -> List[str]:
        A = self.algebra
        fails = []
        if self.matrix_of(A.unit) != SparseMatrix.identity(self.dim):
            fails.append("unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.matrix_of(A.mult.get((i, j), {}))
                if lhs != rhs:
                    fails.append(f"action of b{i}*b{j} differs from the composite")
        return fails

    def level(self, lam: Fraction) -> List[Vec]:
        """A basis of 1[lam, lam] X."""
        idem = self.matrix_of(self.algebra.idempotent(lam))
        return _column_basis(idem)

    def grading(self) -> Dict[Fraction, int]:
        return {lam: len(self.level(lam)) for lam in self.algebra.gamma if self.level(lam)}

    def submodule(self, vectors: Sequence[Mapping]) -> List[Vec]:
        """A basis of the submodule generated by ``vectors``."""
        red = RowReducer()
        basis: List[Vec] = []
        queue = [clean(v) for v in vectors]
        while queue:
            v = queue.pop()
            if v and red.add(v):
                basis.append(v)
                for m in self.action:
                    queue.append(m.apply(v))
        return basis

    def quotient(self, sub: Sequence[Mapping]) -> "FinModule":
        """X / sub, for an A-stable subspace ``sub``."""
        red = RowReducer(priority=lambda i: i)
        for v in sub:
            red.add(v)
        keep = [i for i in range(self.dim) if i not in red.pivots]
        pos = {i: k for k, i in enumerate(keep)}

        def proj(v: Mapping) -> Vec:
            return {pos[i]: c for i, c in red.reduce(v).items()}

        mats = []
        for m in self.action:
            cols = [proj(m.apply({i: ONE})) for i in keep]
            mats.append(SparseMatrix.from_columns(cols, len(keep)))
        return FinModule(self.algebra, tuple(mats))

    def direct_sum(self, other: "FinModule") -> "FinModule":
        if other.algebra is not self.algebra:
            raise IncompatibleAlgebras("direct sum of modules over different algebras")
        k = self.dim
        mats = []
        for a, b in zip(self.action, other.action):
            ent = dict(a.entries())
            for (i, j), x in b.entries().items():
                ent[(i + k, j + k)] = x
            mats.append(SparseMatrix(k + other.dim, k + other.dim, ent))
        return FinModule(self.algebra, tuple(mats))


def _column_basis(m: SparseMatrix) -> List[Vec]:
    red = RowReducer()
    out = []
    for j in range(m.cols):
        col = m.column(j)
        if col and red.add(col):
            out.append(col)
    return out


def regular_module(A: FiniteAlgebra) -> FinModule:
    return FinModule(A, tuple(A.left_matrix({i: ONE}) for i in range(A.dim)))


def random_module(A: FiniteAlgebra, rng: random.Random, max_dim: int = 4) -> FinModule:
    """A random quotient of a sum of projectives A 1[lam, lam], of dim 1..max_dim."""
    reg = regular_module(A)
    for _ in range(200):
        pieces: Optional[FinModule] = None
        for _ in range(rng.randint(1, 2)):
            lam = rng.choice(list(A.gamma))
            e = A.idempotent(lam)
            if not e:
                continue
            proj_basis = reg.submodule([A.multiply({i: ONE}, e) for i in range(A.dim)] + [e])
            piece = _restrict(reg, proj_basis)
            gens = []
            for _ in range(rng.randint(0, 2)):
                gens.append({k: Fraction(rng.randint(-2, 2)) for k in range(piece.dim)})
            piece = piece.quotient(piece.submodule(gens))
            if piece.dim == 0:
                continue
            pieces = piece if pieces is None else pieces.direct_sum(piece)
        if pieces is not None and 1 <= pieces.dim <= max_dim:
            return pieces
    raise RuntimeError("could not draw a small random module")


def _restrict(mod: FinModule, basis: Sequence[Vec]) -> FinModule:
    """The action on an invariant subspace, in the given basis."""
    mats = []
    for m in mod.action:
        cols = []
        for v in basis:
            coeffs = solve_in_span(basis, m.apply(v))
            if coeffs is None:
                raise ValueError("subspace is not invariant")
            cols.append({i: c for i, c in enumerate(coeffs) if c})
        mats.append(SparseMatrix.from_columns(cols, len(basis)))
    return FinModule(mod.algebra, tuple(mats))


def hom_space(X: FinModule, Y: FinModule) -> List[SparseMatrix]:
    """A basis of Hom_A(X, Y) as dim Y x dim X matrices."""
    nx, ny = X.dim, Y.dim
    var = lambda i, j: i * nx + j  # noqa: E731  entry (i, j) of the map
    eqs: List[Vec] = []
    for a in range(X.algebra.dim):
        ax, ay = X.action[a], Y.action[a]
        # (f ax - ay f)[i, j] = sum_k f[i,k] ax[k,j] - sum_k ay[i,k] f[k,j]
        for i in range(ny):
            for j in range(nx):
                eq: Vec = {}
                for k in range(nx):
                    c = ax[k, j]
                    if c:
                        axpy(eq, c, {var(i, k): ONE})
                for k in range(ny):
                    c = ay[i, k]
                    if c:
                        axpy(eq, -c, {var(k, j): ONE})
                if eq:
                    eqs.append(eq)
    m = SparseMatrix(len(eqs), nx * ny, {(r, c): x for r, eq in enumerate(eqs) for c, x in eq.items()})
    _, ker = rank_kernel(m)
    out = []
    for v in ker:
        out.append(SparseMatrix(ny, nx, {(k // nx, k % nx): x for k, x in v.items()}))
    return out


# -- graded shadows -----------------------------------------------------------------


@dataclass
class ShadowOperator:
    name: str
    degree: Fraction
    maps: Dict[Fraction, Tuple[Fraction, SparseMatrix]]  # source level -> (target level, matrix)


@dataclass
class GradedModuleShadow:
    levels: Dict[Fraction, int]
    operators: List[ShadowOperator]
    gamma_0: Tuple[Fraction, ...]
    cap: int
    side: str = "left"

    def total_dim(self) -> int:
        return sum(self.levels.values())

    def check(self) -> List[str]:
        fails = []
        for lam in self.levels:
            if not in_gamma(lam, self.gamma_0, self.cap):
                fails.append(f"level {lam} is outside Gamma_{self.cap}")
        for op in self.operators:
            for src, (tgt, m) in op.maps.items():
                shift = tgt - src if self.side == "left" else src - tgt
                if shift != op.degree:
                    fails.append(f"{op.name} does not shift level {src} by its degree")
                if m.cols != self.levels.get(src, 0) or m.rows != self.levels.get(tgt, 0):
                    fails.append(f"{op.name} has the wrong shape at level {src}")
        return fails

    def e_levels(self, n: int) -> List[Fraction]:
        return [lam for lam in sorted(self.levels) if in_gamma(lam, self.gamma_0, n) and self.levels[lam]]

    def k_levels(self, n: int) -> Dict[Fraction, List[Vec]]:
        """K_n: per level, vectors killed by every stored operator of degree <= -n-1."""
        out = {}
        for lam in sorted(self.levels):
            dim = self.levels[lam]
            if not dim:
                continue
            stacked: Dict[Tuple[int, int], Fraction] = {}
            row = 0
            for op in self.operators:
                if op.degree > -n - 1 or lam not in op.maps:
                    continue
                _, m = op.maps[lam]
                for (i, j), x in m.entries().items():
                    stacked[(row + i, j)] = x
                row += m.rows
            _, ker = rank_kernel(SparseMatrix(row, dim, stacked))
            if ker:
                out[lam] = ker
        return out

    def generated_by(self, lams: Sequence[Fraction]) -> int:
        """Dimension of the submodule generated by the given levels."""
        spans: Dict[Fraction, RowReducer] = {lam: RowReducer() for lam in self.levels}
        queue: List[Tuple[Fraction, Vec]] = []
        for lam in lams:
            for i in range(self.levels.get(lam, 0)):
                queue.append((lam, {i: ONE}))
        while queue:
            lam, v = queue.pop()
            if not v or not spans[lam].add(v):
                continue
            for op in self.operators:
                if lam in op.maps:
                    tgt, m = op.maps[lam]
                    queue.append((tgt, clean(m.apply(v))))
        return sum(r.rank for r in spans.values())


def restricted_dual(M: GradedModuleShadow) -> GradedModuleShadow:
    """Level-wise duals with transposed operators; the side flips."""
    ops = []
    for op in M.operators:
        maps = {tgt: (src, m.transpose()) for src, (tgt, m) in op.maps.items()}
        ops.append(ShadowOperator(op.name, op.degree, maps))
    side = "right" if M.side == "left" else "left"
    return GradedModuleShadow(dict(M.levels), ops, M.gamma_0, M.cap, side)


def pairing_check(M: GradedModuleShadow, D: GradedModuleShadow) -> List[str]:
    """Evaluation pairing between D = dual(M) and M: nondegenerate on each level
    and <f . a, v> = <f, a . v> for every operator."""
    fails = []
    for lam, dim in M.levels.items():
        if D.levels.get(lam) != dim:
            fails.append(f"level {lam} has dual dimension {D.levels.get(lam)} != {dim}")
        elif span_rank({i: ONE} for i in range(dim)) != dim:
            fails.append(f"pairing degenerate at level {lam}")
    for op, dop in zip(M.operators, D.operators):
        for src, (tgt, m) in op.maps.items():
            _, dm = dop.maps[tgt]
            for f in range(M.levels[tgt]):
                for v in range(M.levels[src]):
                    lhs = dm.apply({f: ONE}).get(v, 0)
                    rhs = m.apply({v: ONE}).get(f, 0)
                    if lhs != rhs:
                        fails.append(f"{op.name}: pairing not invariant at level {src}")
    return fails


def shadows_equal(M: GradedModuleShadow, N: GradedModuleShadow) -> bool:
    if M.levels != N.levels or M.side != N.side or len(M.operators) != len(N.operators):
        return False
    for a, b in zip(M.operators, N.operators):
        if a.degree != b.degree or set(a.maps) != set(b.maps):
            return False
        for k in a.maps:
            if a.maps[k][0] != b.maps[k][0] or a.maps[k][1] != b.maps[k][1]:
                return False
    return True


# -- P_n and the tensor functor --------------------------------------------------------


@dataclass
class Progenerator:
    """P_n inside a cap algebra A_N, with A_n as a corner subalgebra."""

    big: FiniteAlgebra
    small: FiniteAlgebra
    embed: List[int]
    n: int
    cap: int
    gamma_0: Tuple[Fraction, ...]

    @property
    def basis(self) -> List[int]:
        gn = set(gamma_set(self.gamma_0, self.n))
        return [i for i, (_, mu) in enumerate(self.big.block_of) if mu in gn]

    def shadow(self) -> GradedModuleShadow:
        """P_n as a left A_N shadow (levels = left eigenvalues)."""
        return module_shadow_from_space(self.big, self.basis, self.gamma_0, self.cap)


def make_progenerator(big: FiniteAlgebra, n: int, cap: int, gamma_0: Sequence[Fraction], gap: int) -> Progenerator:
    if n < gap:
        raise ValueError(f"n = {n} is below the gap g = {gap}")
    if cap < n + gap:
        raise CapTooSmall(f"cap {cap} < n + g = {n + gap}")
    small, embed = big.subalgebra(gamma_set(gamma_0, n))
    return Progenerator(big, small, embed, n, cap, tuple(gamma_0))


def module_shadow_from_space(A: FiniteAlgebra, basis: Sequence[int], gamma_0, cap) -> GradedModuleShadow:
    """The left A-stable span of some basis elements of A, graded by left eigenvalue."""
    by_level: Dict[Fraction, List[int]] = {}
    for i in basis:
        by_level.setdefault(A.block_of[i][0], []).append(i)
    levels = {lam: len(v) for lam, v in sorted(by_level.items())}
    pos = {i: (lam, k) for lam, v in by_level.items() for k, i in enumerate(v)}
    ops = []
    for a in range(A.dim):
        lam_a, mu_a = A.block_of[a]
        if mu_a not in by_level:
            continue
        cols = []
        for i in by_level[mu_a]:
            prod = A.mult.get((a, i), {})
            col = {}
            for k, c in prod.items():
                tl, idx = pos[k]
                col[idx] = c
            cols.append(col)
        if lam_a in by_level:
            m = SparseMatrix.from_columns(cols, levels[lam_a])
            ops.append(ShadowOperator(f"b{a}", lam_a - mu_a, {mu_a: (lam_a, m)}))
    return GradedModuleShadow(levels, ops, tuple(gamma_0), cap)


@dataclass
class TensorShadow:
    shadow: GradedModuleShadow
    # per level: reducer over pairs (p, x) and the surviving pairs
    reducers: Dict[Fraction, RowReducer]
    survivors: Dict[Fraction, List[Tuple[int, int]]]

    def coords(self, lam: Fraction, vec: Mapping) -> Vec:
        red = self.reducers[lam]
        pos = {pair: k for k, pair in enumerate(self.survivors[lam])}
        return {pos[p]: c for p, c in red.reduce(vec).items()}


def tensor_over_An(P: Progenerator, X: FinModule, cap: Optional[int] = None) -> TensorShadow:
    """P_n (x)_{A_n} X, level by level, with the left A_N action."""
    if X.algebra is not P.small:
        raise IncompatibleAlgebras("X is not a module over this progenerator's A_n")
    if cap is not None and cap != P.cap:
        raise CapTooSmall(f"progenerator was built for cap {P.cap}, not {cap}")
    big, small = P.big, P.small
    pbasis = P.basis
    by_level: Dict[Fraction, List[int]] = {}
    for i in pbasis:
        by_level.setdefault(big.block_of[i][0], []).append(i)
    reducers: Dict[Fraction, RowReducer] = {}
    survivors: Dict[Fraction, List[Tuple[int, int]]] = {}
    for lam, ps in sorted(by_level.items()):
        red = RowReducer(priority=lambda pair: (-pair[0], -pair[1]))
        for p in ps:
            for a_small in range(small.dim):
                a = P.embed[a_small]
                pa = big.mult.get((p, a), {})
                for x in range(X.dim):
                    rel: Vec = {}
                    for k, c in pa.items():
                        rel[(k, x)] = rel.get((k, x), 0) + c
                    for y, c in X.action[a_small].apply({x: ONE}).items():
                        rel[(p, y)] = rel.get((p, y), 0) - c
                    rel = clean(rel)
                    if rel:
                        red.add(rel)
        pairs = [(p, x) for p in ps for x in range(X.dim)]
        reducers[lam] = red
        survivors[lam] = [pr for pr in pairs if pr not in red.pivots]
    levels = {lam: len(s) for lam, s in survivors.items()}
    ts = TensorShadow(None, reducers, survivors)
    ops = []
    for a in range(big.dim):
        lam_a, mu_a = big.block_of[a]
        if mu_a not in survivors or lam_a not in survivors:
            continue
        cols = []
        for (p, x) in survivors[mu_a]:
            img: Vec = {}
            for k, c in big.mult.get((a, p), {}).items():
                img[(k, x)] = img.get((k, x), 0) + c
            cols.append(ts.coords(lam_a, clean(img)))
        m = SparseMatrix.from_columns(cols, levels[lam_a])
        ops.append(ShadowOperator(f"b{a}", lam_a - mu_a, {mu_a: (lam_a, m)}))
    ts.shadow = GradedModuleShadow(levels, ops, P.gamma_0, P.cap)
    return ts


def E_n(ts: TensorShadow, P: Progenerator, n: int) -> Tuple[FinModule, List[Tuple[Fraction, int]]]:
    """E_n of a tensor shadow as an A_n-module; also returns the (level, index)
    coordinates of its basis inside the shadow."""
    sh = ts.shadow
    coords = [(lam, i) for lam in sh.e_levels(n) for i in range(sh.levels[lam])]
    pos = {c: k for k, c in enumerate(coords)}
    ambient_ops = {int(op.name[1:]): op for op in sh.operators}
    mats = []
    for a_small in range(P.small.dim):
        op = ambient_ops.get(P.embed[a_small])
        ent = {}
        if op is not None:
            for src, (tgt, m) in op.maps.items():
                for (i, j), x in m.entries().items():
                    if (src, j) in pos and (tgt, i) in pos:
                        ent[(pos[(tgt, i)], pos[(src, j)])] = x
        mats.append(SparseMatrix(len(coords), len(coords), ent))
    return FinModule(P.small, tuple(mats)), coords


@dataclass
class RoundTripReport:
    dim_x: int
    dim_e: int
    rank: int
    intertwines: bool
    lemma134_injective: bool
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.dim_x == self.dim_e == self.rank and self.intertwines and self.lemma134_injective


def round_trip_check(X: FinModule, P: Progenerator) -> RoundTripReport:
    """Build x -> [1_{A_n} (x) x] into E_n(P_n (x) X) and test that it is an
    isomorphism of A_n-modules."""
    ts = tensor_over_An(P, X)
    E, coords = E_n(ts, P, P.n)
    pos = {c: k for k, c in enumerate(coords)}
    unit = {P.embed[i]: c for i, c in P.small.unit.items()}

    def phi(x: Mapping) -> Vec:
        out: Vec = {}
        by_level: Dict[Fraction, Vec] = {}
        for p, c in unit.items():
            lam = P.big.block_of[p][0]
            acc = by_level.setdefault(lam, {})
            for xi, cx in x.items():
                acc[(p, xi)] = acc.get((p, xi), 0) + c * cx
        for lam, vec in by_level.items():
            for i, c in ts.coords(lam, clean(vec)).items():
                if (lam, i) not in pos:
                    raise AssertionError("canonical image leaves E_n")
                axpy(out, c, {pos[(lam, i)]: ONE})
        return clean(out)

    images = [phi({j: ONE}) for j in range(X.dim)]
    rank = span_rank(images)
    witness = None
    intertwines = True
    for a in range(P.small.dim):
        for j in range(X.dim):
            lhs = phi(X.action[a].apply({j: ONE}))
            rhs = E.action[a].apply(images[j])
            if clean(lhs) != clean(rhs):
                intertwines = False
                witness = f"phi(b{a} x{j}) != b{a} phi(x{j})"
                break
        if not intertwines:
            break
    if witness is None and rank != X.dim:
        witness = f"canonical map has rank {rank} < dim X = {X.dim}"
    elif witness is None and E.dim != X.dim:
        witness = f"E_n has dimension {E.dim} != dim X = {X.dim}"
    return RoundTripReport(X.dim, E.dim, rank, intertwines, rank == X.dim, witness)


def induced_map(P: Progenerator, ts_x: TensorShadow, ts_y: TensorShadow, f: SparseMatrix) -> Dict[Fraction, SparseMatrix]:
    """id_P (x) f between two tensor shadows, level by level."""
    out = {}
    for lam, pairs in ts_x.survivors.items():
        cols = []
        for (p, x) in pairs:
            img = {(p, y): c for y, c in f.apply({x: ONE}).items()}
            cols.append(ts_y.coords(lam, clean(img)) if lam in ts_y.survivors else {})
        out[lam] = SparseMatrix.from_columns(cols, ts_y.shadow.levels.get(lam, 0))
    return out


def prop050_check(M: GradedModuleShadow, n: int, gap: int) -> List[str]:
    """E_n subset K_n subset E_{n+g} at the level of annihilator labels."""
    fails = []
    K = M.k_levels(n)
    for lam in M.e_levels(n):
        if len(K.get(lam, [])) != M.levels[lam]:
            fails.append(f"level {lam} lies in E_{n} but is not killed by F_-{n + 1}")
    for lam, vecs in K.items():
        if vecs and not in_gamma(lam, M.gamma_0, n + gap):
            fails.append(f"K_{n} has vectors at level {lam} outside Gamma_{n + gap}")
    return fails


# -- shadows built from quotient sources and VOAs ------------------------------------------


def quotient_shadow(source, n: int, degrees: Sequence[int], gen_degrees: Sequence[int],
                    gamma_0: Sequence[Fraction], cap: int) -> GradedModuleShadow:
    """Q_n as a left module over the stored generators, graded by left eigenvalue.

    Levels are the left generalized eigenspaces of h on the slices Q_n(d),
    d in ``degrees``; operators are the generators of A(e), e in ``gen_degrees``.
    """
    from .finite import _split_slice

    splits = {d: _split_slice(source, n, d) for d in degrees}
    levels: Dict[Fraction, int] = {}
    where: Dict[Tuple[int, Fraction, int], Tuple[Fraction, int]] = {}
    for d in degrees:
        sp = splits[d]
        for lam, blk in zip(sp.split.eigenvalues, sp.split.blocks):
            for k in range(len(blk)):
                where[(d, lam, k)] = (lam, levels.get(lam, 0))
                levels[lam] = levels.get(lam, 0) + 1
    ops = []
    for e in gen_degrees:
        for g in source.generators_of_degree(e):
            maps_cols: Dict[Fraction, Dict[int, Vec]] = {}
            for d in degrees:
                if d + e not in splits and d + e > -n - 1:
                    continue
                sp = splits[d]
                for lam, blk in zip(sp.split.eigenvalues, sp.split.blocks):
                    for k, v in enumerate(blk):
                        _, col_idx = where[(d, lam, k)]
                        img = source.act_generator(n, e, g, d, v)
                        col: Vec = {}
                        if img and d + e in splits:
                            tp = splits[d + e]
                            for p, c in tp.inv.apply(img).items():
                                tl, tk = tp.owner[p]
                                col[where[(d + e, tl, tk)][1]] = c
                                if tl != lam + e:
                                    raise AssertionError("generator does not shift eigenvalues by its degree")
                        maps_cols.setdefault(lam, {})[col_idx] = col
            maps = {}
            for lam, cols in maps_cols.items():
                tgt = lam + e
                m = SparseMatrix(levels.get(tgt, 0), levels[lam],
                                 {(i, j): x for j, col in cols.items() for i, x in col.items()})
                maps[lam] = (tgt, m)
            ops.append(ShadowOperator(f"g{g}@{e}", Fraction(e), maps))
    return GradedModuleShadow(dict(sorted(levels.items())), ops, tuple(gamma_0), cap)


def voa_module_shadow(voa, mode_bound: int = 2, generator_weight: int = 2) -> GradedModuleShadow:
    """V as a module over its low-weight currents J_m(u), |m| <= mode_bound.

    Level r is V[r]; J_m(u) = u_(m + wt u - 1) lowers the weight by m.  Maps
    whose target weight exceeds the window are omitted.
    """
    from .linalg import SparseMatrix as SM

    levels = {Fraction(r): d for r, d in voa.weight_dims().items() if d}
    index = {r: voa.basis_of_weight(r) for r in range(voa.max_weight + 1)}
    ops = []
    for u in range(voa.dim):
        du = voa.weights[u]
        if not 0 < du <= generator_weight:
            continue
        for m in range(-mode_bound, mode_bound + 1):
            maps = {}
            for r in range(voa.max_weight + 1):
                t = r - m
                if not index[r] or t < 0 or t > voa.max_weight or not index.get(t):
                    continue
                pos = {b: i for i, b in enumerate(index[t])}
                cols = []
                for b in index[r]:
                    img = voa.basis_product(m + du - 1, u, b)
                    cols.append({pos[k]: c for k, c in img.items()})
                maps[Fraction(r)] = (Fraction(t), SM.from_columns(cols, len(index[t])))
            ops.append(ShadowOperator(f"J_{m}({voa.symbols[u]})", Fraction(-m), maps))
    return GradedModuleShadow(levels, ops, (Fraction(0),), voa.max_weight)


@dataclass
class FunctorReport:
    name: str
    n: int
    gap: int
    gamma_0: Tuple[Fraction, ...]
    dim_small: int
    rows: List[Tuple[str, RoundTripReport]]
    dual_involutive: bool
    pairing_failures: List[str]

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.rows) and self.dual_involutive and not self.pairing_failures


def functor_check(source, n: Optional[int] = None, modules: int = 10, seed: int = 0,
                  max_dim: int = 4, window=None, name: str = "", cap: Optional[int] = None) -> FunctorReport:
    """X -> E_n(P_n (x) X) on the regular module and random A_n-modules,
    plus restricted-dual involutivity on the progenerator shadow."""
    from .finite import as_source, extract_finite_algebra, spectrum

    src = as_source(source, window)
    sp = spectrum(src, 0)
    g = sp.gap
    n = g if n is None else n
    cap = n + g + 1 if cap is None else cap
    if cap < n + g:
        raise CapTooSmall(f"cap {cap} < n + g = {n + g}")
    big = extract_finite_algebra(src, cap, gamma_0=sp.gamma_0)
    P = make_progenerator(big, n, cap, sp.gamma_0, g)
    rng = random.Random(seed)
    rows = [("regular", round_trip_check(regular_module(P.small), P))]
    for t in range(modules):
        rows.append((f"random{t}", round_trip_check(random_module(P.small, rng, max_dim), P)))
    sh = P.shadow()
    D = restricted_dual(sh)
    return FunctorReport(name, n, g, tuple(sp.gamma_0), P.small.dim, rows,
                         shadows_equal(restricted_dual(D), sh) and D.levels == sh.levels,
                         pairing_check(sh, D))
