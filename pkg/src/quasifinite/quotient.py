"""Truncated canonical quotient modules Q_n(d) of a VOA's current algebra.

Q_n(d) is presented by single-current generators ``g_u = [J_{-d}(u) 1_n]``
for basis u of weight <= W, subject to relations that are exact
consequences of the defining identities:

* vacuum:       g_vac = 0 when d != 0;
* translation:  g_{Tu} + (wt u - d) g_u = 0;
* annihilation: for t in [n+1, n+depth] and j in [0, rounds-1], with
  k = n+1+j and N = -d-k-t, the Borcherds generator B_{k,t,N}(u, v) acts
  on 1_n through its single-current part only, giving
  ``sum_i C(n + wt u + j, i) g_{u_(N+i) v} = 0``.

A relation is admitted only when every term is certified in the window;
otherwise it is dropped and counted, so ``dim_upper`` is always an upper
bound for the window-restricted quotient.

Products of currents on 1_n reduce to single currents by

    J_s(u) J_t(v) 1_n = sum_{i>=0} C(n + wt u, i) J_{s+t}(u_(s-n-1+i) v) 1_n
                        - sum_{i>=1} (-1)^i C(s-n-1, i) J_{s-i}(u) J_{t+i}(v) 1_n

(the Borcherds generator with k = n+1 and index s-n-1), which terminates
because J_t(v) 1_n = 0 for t >= n+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import NotConverged, OutOfWindow
from .linalg import ONE, RowReducer, SparseMatrix, Vec, axpy, binomial, clean, solve_in_span
from .voa import VoaData


@dataclass(frozen=True)
class TruncationWindow:
    max_weight: int
    depth: int = 2
    rounds: int = 1

    def __post_init__(self):
        if self.max_weight < 0 or self.depth < 1 or self.rounds < 1:
            raise ValueError("window needs max_weight >= 0, depth >= 1, rounds >= 1")

    def shrink(self) -> "TruncationWindow":
        return TruncationWindow(self.max_weight - 1, self.depth, self.rounds)


@dataclass(frozen=True)
class Relation:
    vec: Vec
    tag: tuple  # ("vacuum",) | ("translation", u) | ("annihilation" | "borcherds", u, v, t, j)


@dataclass
class QuotientSlice:
    """A computed truncation of Q_n(d).

    Generators are labels (basis indices for a VOA, algebra basis indices
    for synthetic sources).  ``basis`` lists the surviving generators, which
    serve as coset representatives; coordinates of a class are indexed by
    positions in ``basis``.
    """

    n: int
    d: int
    generators: Tuple[int, ...]
    relations: List[Relation]
    basis: Tuple[int, ...]
    dropped: int = 0
    converged: Optional[bool] = None
    left_h: Optional[SparseMatrix] = None
    h_error: Optional[str] = None
    _reducer: Optional[RowReducer] = field(default=None, repr=False)

    @property
    def dim_upper(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        return len(self.generators) - len(self.basis)

    def coords(self, gen_vec: Mapping) -> Vec:
        """Coordinates of the class of a generator vector."""
        r = self._reducer.reduce(gen_vec) if self._reducer is not None else dict(gen_vec)
        pos = {g: i for i, g in enumerate(self.basis)}
        out: Vec = {}
        for g, c in r.items():
            if g not in pos:
                raise KeyError(f"generator {g} is not part of this slice")
            out[pos[g]] = c
        return out

    def lift(self, coords: Mapping) -> Vec:
        return {self.basis[i]: c for i, c in coords.items()}

    def right_h(self) -> Optional[SparseMatrix]:
        if self.left_h is None:
            return None
        return self.left_h.shift(-self.d)


def zero_slice(n: int, d: int) -> QuotientSlice:
    return QuotientSlice(n=n, d=d, generators=(), relations=[], basis=(), converged=True,
                         left_h=SparseMatrix.zero(0, 0), _reducer=RowReducer())


class QuotientSource:
    """Interface shared by every algebra whose quotient slices we compute."""

    def slice(self, n: int, d: int) -> QuotientSlice:
        raise NotImplementedError

    def act(self, n: int, da: int, a: Mapping, db: int, b: Mapping) -> Vec:
        """Class of (lift of a in A(da)) . b in Q_n(da+db); a, b in slice coordinates."""
        raise NotImplementedError

    def act_generator(self, n: int, e: int, g, d: int, b: Mapping) -> Vec:
        """Action of a generator of A(e) (not necessarily nonzero in Q_n) on Q_n(d)."""
        raise NotImplementedError

    def generators_of_degree(self, e: int) -> List:
        raise NotImplementedError

    def unit(self, n: int) -> Vec:
        raise NotImplementedError

    def hamiltonian(self, n: int) -> Vec:
        raise NotImplementedError

    def describe(self, n: int, d: int, pos: int) -> str:
        return str(self.slice(n, d).basis[pos])


class VoaQuotientEngine(QuotientSource):
    """Quotient slices of the current algebra of a VoaData."""

    def __init__(self, voa: VoaData, window: Optional[TruncationWindow] = None):
        self.voa = voa
        self.window = window or TruncationWindow(voa.max_weight)
        if self.window.max_weight > voa.max_weight:
            raise ValueError("window exceeds the data's max_weight")
        self._slices: Dict[Tuple[int, int, int], QuotientSlice] = {}
        self._exp_cache: Dict[tuple, Vec] = {}

    # -- products within a weight cap ---------------------------------------

    def _prod(self, k: int, u: int, v: int, cap: int) -> Vec:
        voa = self.voa
        r = voa.product_weight(k, u, v)
        if r < -voa.lower_bound:
            return {}
        if r > cap:
            raise OutOfWindow(f"{voa.symbols[u]}_({k}){voa.symbols[v]} has weight {r} > {cap}",
                              location=(k, voa.symbols[u], voa.symbols[v]))
        return voa.basis_product(k, u, v)

    def _single_sum(self, coeff_top: int, N: int, u: int, v: int, cap: int) -> Vec:
        """sum_i C(coeff_top, i) u_(N+i) v."""
        voa = self.voa
        out: Vec = {}
        top = voa.weights[u] + voa.weights[v] - N - 1 + voa.lower_bound
        for i in range(0, max(top, -1) + 1):
            c = binomial(coeff_top, i)
            if c:
                axpy(out, c, self._prod(N + i, u, v, cap))
        return out

    def expand(self, n: int, s: int, u: int, t: int, v: int, cap: Optional[int] = None) -> Vec:
        """J_s(u) J_t(v) 1_n as a generator vector of Q_n(-(s+t))."""
        cap = self.window.max_weight if cap is None else cap
        key = (n, s, u, t, v, cap)
        hit = self._exp_cache.get(key)
        if hit is not None:
            return hit
        voa = self.voa
        if t >= n + 1:
            out: Vec = {}
        elif v == voa.vacuum:
            out = {u: ONE} if t == 0 else {}
            if t == 0 and u == voa.vacuum and s != 0:
                out = {}
        elif u == voa.vacuum:
            out = {v: ONE} if s == 0 else {}
        else:
            out = self._single_sum(n + voa.weights[u], s - n - 1, u, v, cap)
            for i in range(1, n - t + 1):
                c = (-1) ** i * binomial(s - n - 1, i)
                if c:
                    axpy(out, -c, self.expand(n, s - i, u, t + i, v, cap))
        out = self._kill_vacuum(out, -(s + t))
        self._exp_cache[key] = out
        return out

    def _kill_vacuum(self, vec: Vec, d: int) -> Vec:
        if d != 0 and self.voa.vacuum in vec:
            vec = dict(vec)
            del vec[self.voa.vacuum]
        return vec

    # -- relations --------------------------------------------------------------

    def relations(self, n: int, d: int, cap: int) -> Tuple[List[Relation], int]:
        voa = self.voa
        W = self.window
        gens = [u for u in range(voa.dim) if voa.weights[u] <= cap]
        rels: List[Relation] = []
        dropped = 0
        if d != 0:
            rels.append(Relation({voa.vacuum: ONE}, ("vacuum",)))
        for u in gens:
            if voa.weights[u] + 1 > cap:
                dropped += 1
                continue
            try:
                tu = voa.T({u: ONE})
            except OutOfWindow:
                dropped += 1
                continue
            vec = dict(tu)
            axpy(vec, Fraction(voa.weights[u] - d), {u: ONE})
            rels.append(Relation(self._kill_vacuum(vec, d), ("translation", u)))
        for j in range(W.rounds):
            for t in range(n + 1, n + W.depth + 1):
                k = n + 1 + j
                N = -d - k - t
                for u in gens:
                    for v in gens:
                        try:
                            vec = self._single_sum(n + voa.weights[u] + j, N, u, v, cap)
                        except OutOfWindow:
                            dropped += 1
                            continue
                        vec = self._kill_vacuum(vec, d)
                        if vec:
                            rels.append(Relation(vec, ("annihilation" if j == 0 else "borcherds", u, v, t, j)))
        return rels, dropped

    def replay(self, n: int, d: int, rel: Relation, cap: Optional[int] = None) -> Vec:
        """Recompute a relation from its provenance through the Borcherds
        generator B_{k,t,N}(u, v) acting on 1_n; returns the residual."""
        voa = self.voa
        cap = self.window.max_weight if cap is None else cap
        tag = rel.tag
        if tag[0] == "vacuum":
            expected = {voa.vacuum: ONE}
        elif tag[0] == "translation":
            u = tag[1]
            expected = dict(voa.T({u: ONE}))
            axpy(expected, Fraction(voa.weights[u] - d), {u: ONE})
        else:
            _, u, v, t, j = tag
            k = n + 1 + j
            N = -d - k - t
            expected = {}
            # first sum of B_{k,t,N}: sum_i C(k + wt u - 1, i) J_{-d}(u_(N+i) v)
            for i in range(0, voa.weights[u] + voa.weights[v] - N + voa.lower_bound):
                c = binomial(k + voa.weights[u] - 1, i)
                if c:
                    axpy(expected, c, self._prod(N + i, u, v, cap))
            # the two-current sums of B_{k,t,N} end in J_{t+i}(v) 1_n or
            # J_{k+i}(u) 1_n with t, k >= n+1, so they vanish
        if tag[0] != "vacuum":
            expected = self._kill_vacuum(expected, d)
        res = dict(rel.vec)
        axpy(res, -ONE, expected)
        return res

    # -- slices ---------------------------------------------------------------

    def _build(self, n: int, d: int, cap: int) -> QuotientSlice:
        voa = self.voa
        if d <= -n - 1:
            return zero_slice(n, d)
        gens = tuple(u for u in range(voa.dim) if voa.weights[u] <= cap)
        rels, dropped = self.relations(n, d, cap)
        red = RowReducer(priority=lambda u: (voa.weights[u], u))
        for rel in rels:
            red.add(rel.vec)
        basis = tuple(u for u in gens if u not in red.pivots)
        return QuotientSlice(n=n, d=d, generators=gens, relations=rels, basis=basis,
                             dropped=dropped, _reducer=red)

    def slice(self, n: int, d: int, with_h: bool = True) -> QuotientSlice:
        key = (n, d, self.window.max_weight)
        if key in self._slices:
            sl = self._slices[key]
            if with_h and sl.left_h is None and sl.h_error is None:
                self._attach_h(sl)
            return sl
        W = self.window.max_weight
        sl = self._build(n, d, W)
        if sl.converged is None:
            if W == 0:
                sl.converged = False
            else:
                smaller = self._build(n, d, W - 1)
                sl.converged = smaller.dim_upper == sl.dim_upper
        self._slices[key] = sl
        if with_h and sl.left_h is None:
            self._attach_h(sl)
        return sl

    def _attach_h(self, sl: QuotientSlice) -> None:
        try:
            sl.left_h = self._left_h(sl)
        except OutOfWindow as exc:
            sl.h_error = str(exc)

    def _left_h(self, sl: QuotientSlice) -> SparseMatrix:
        """Left action of J_0(omega), via J_0(omega) J_{-d}(u) 1_n."""
        voa = self.voa
        k = sl.dim_upper
        if voa.conformal is None:
            return SparseMatrix.zero(k, k)
        cols = []
        for u in sl.basis:
            img = self.expand(sl.n, 0, voa.conformal, -sl.d, u)
            cols.append(sl.coords(img))
        return SparseMatrix.from_columns(cols, k)

    def left_h_via_commutator(self, sl: QuotientSlice) -> SparseMatrix:
        """The same matrix through J_{-d}(u) J_0(omega) 1_n + d g_u."""
        voa = self.voa
        k = sl.dim_upper
        if voa.conformal is None:
            return SparseMatrix.zero(k, k)
        cols = []
        for u in sl.basis:
            img = dict(self.expand(sl.n, -sl.d, u, 0, voa.conformal))
            axpy(img, Fraction(sl.d), {u: ONE})
            cols.append(sl.coords(self._kill_vacuum(img, sl.d)))
        return SparseMatrix.from_columns(cols, k)

    # -- QuotientSource ---------------------------------------------------------

    def act(self, n: int, da: int, a: Mapping, db: int, b: Mapping) -> Vec:
        """Lift a as a single current when that stays in the window, otherwise
        as a word in low-weight currents applied one at a time."""
        if da + db <= -n - 1:
            return {}
        try:
            return self._act_direct(n, da, a, db, b)
        except OutOfWindow:
            pass
        words = self.word_lift(n, da, a)
        out: Vec = {}
        for word, c in words:
            vec = dict(b)
            deg = db
            for e, g in reversed(word):
                vec = self.act_generator(n, e, g, deg, vec)
                deg += e
                if not vec:
                    break
            if vec:
                axpy(out, c, vec)
        return out

    def _act_direct(self, n: int, da: int, a: Mapping, db: int, b: Mapping) -> Vec:
        sa, sb = self.slice(n, da), self.slice(n, db)
        target = self.slice(n, da + db)
        out: Vec = {}
        for i, ca in a.items():
            u = sa.basis[i]
            for j, cb in b.items():
                v = sb.basis[j]
                axpy(out, ca * cb, self.expand(n, -da, u, -db, v))
        return target.coords(self._kill_vacuum(out, da + db))

    def word_generators(self) -> List[int]:
        """Currents used for word lifts: basis elements of weight 1 and 2."""
        voa = self.voa
        return [u for u in range(voa.dim) if 0 < voa.weights[u] <= 2]

    def _word_spans(self, n: int, target: int) -> Tuple[List[tuple], List[Vec]]:
        """Words (tuples of (degree, generator), leftmost applied last) whose
        classes span Q_n(target), found breadth-first from 1_n."""
        key = ("words", n, target)
        if key in self._exp_cache:
            return self._exp_cache[key]
        gens = self.word_generators()
        reach = max(abs(target), n) + 2
        # only window-stable slices are traversed
        degrees = [d for d in range(-n, reach + 1) if self.slice(n, d, with_h=False).converged]
        if target not in degrees:
            raise NotConverged(f"slice Q_{n}({target}) is not stable across windows")
        layers: Dict[int, List[Tuple[tuple, Vec]]] = {d: [] for d in degrees}
        reducers = {d: RowReducer() for d in degrees}
        dims = {d: self.slice(n, d, with_h=False).dim_upper for d in degrees}
        unit = self.unit(n)
        frontier = []
        if unit:
            reducers[0].add({("c", k): c for k, c in unit.items()})
            layers[0].append(((), unit))
            frontier.append(((), 0, unit))
        while frontier and reducers[target].rank < dims[target]:
            nxt = []
            for word, d, vec in frontier:
                for e in range(-n - d, reach - d + 1):
                    if d + e not in reducers:
                        continue
                    for g in gens:
                        try:
                            img = self.act_generator(n, e, g, d, vec)
                        except OutOfWindow:
                            continue
                        img = clean(img)
                        if img and reducers[d + e].add({("c", k): c for k, c in img.items()}):
                            w = ((e, g),) + word
                            layers[d + e].append((w, img))
                            nxt.append((w, d + e, img))
            frontier = nxt
        result = ([w for w, _ in layers[target]], [v for _, v in layers[target]])
        self._exp_cache[key] = result
        return result

    def word_lift(self, n: int, d: int, a: Mapping) -> List[Tuple[tuple, Fraction]]:
        words, vecs = self._word_spans(n, d)
        coeffs = solve_in_span(vecs, clean(a))
        if coeffs is None:
            raise OutOfWindow(f"no in-window word lift reaches this class of Q_{n}({d})")
        return [(w, c) for w, c in zip(words, coeffs) if c]

    def generators_of_degree(self, e: int) -> List[int]:
        voa = self.voa
        return [u for u in range(voa.dim) if u != voa.vacuum or e == 0]

    def act_generator(self, n: int, e: int, g: int, d: int, b: Mapping) -> Vec:
        """Class of J_{-e}(g) . b for b in Q_n(d)."""
        if d + e <= -n - 1:
            return {}
        sb = self.slice(n, d, with_h=False)
        target = self.slice(n, d + e, with_h=False)
        out: Vec = {}
        for j, cb in b.items():
            axpy(out, cb, self.expand(n, -e, g, -d, sb.basis[j]))
        return target.coords(self._kill_vacuum(out, d + e))

    def unit(self, n: int) -> Vec:
        return self.slice(n, 0).coords({self.voa.vacuum: ONE})

    def hamiltonian(self, n: int) -> Vec:
        if self.voa.conformal is None:
            return {}
        return self.slice(n, 0).coords({self.voa.conformal: ONE})

    def describe(self, n: int, d: int, pos: int) -> str:
        return "g_" + self.voa.symbols[self.slice(n, d).basis[pos]]


def compute_quotient_slice(voa: VoaData, n: int, d: int, window: Optional[TruncationWindow] = None) -> QuotientSlice:
    return VoaQuotientEngine(voa, window).slice(n, d)


def h_action(source: QuotientSource, n: int, d: int) -> Tuple[SparseMatrix, SparseMatrix]:
    """(left, right) Hamiltonian actions on Q_n(d); right = left - d I."""
    sl = source.slice(n, d)
    if sl.left_h is None:
        raise OutOfWindow(sl.h_error or f"Hamiltonian action on Q_{n}({d}) leaves the window")
    return sl.left_h, sl.left_h.shift(-d)
