"""Finite graded algebras with a Hamiltonian, used as synthetic quotient sources.

A ``GradedAlgebra`` is a finite-dimensional associative algebra with a
Z-grading and an element h satisfying [h, a] = deg(a) a.  Its quotients
Q_n(d) = A(d) / (A F_{-n-1}A)(d) are computed directly, which gives exact
slices with known spectra for exercising the spectrum, finite-algebra and
module-category code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .linalg import ONE, RowReducer, SparseMatrix, Vec, axpy, clean
from .quotient import QuotientSlice, QuotientSource, Relation, zero_slice

BASE_RINGS = ("k", "eps", "T2")


@dataclass
class GradedAlgebra(QuotientSource):
    labels: Tuple[str, ...]
    degrees: Tuple[int, ...]
    mult: Dict[Tuple[int, int], Vec]
    unit_vec: Vec
    h_vec: Vec
    name: str = "synthetic"

    def __post_init__(self):
        self._slices: Dict[Tuple[int, int], QuotientSlice] = {}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def multiply(self, x: Mapping, y: Mapping) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.mult.get((i, j))
                if prod:
                    axpy(out, a * b, prod)
        return out

    def of_degree(self, d: int) -> List[int]:
        return [i for i, e in enumerate(self.degrees) if e == d]

    def check(self) -> List[str]:
        """Associativity, unit, homogeneity and [h, a] = deg(a) a."""
        fails = []
        e = [{i: ONE} for i in range(self.dim)]
        for (i, j), v in self.mult.items():
            for k in v:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    fails.append(f"product {self.labels[i]}*{self.labels[j]} is not homogeneous")
        for i in range(self.dim):
            if clean(self.multiply(self.unit_vec, e[i])) != e[i] or clean(self.multiply(e[i], self.unit_vec)) != e[i]:
                fails.append(f"unit fails on {self.labels[i]}")
            comm = self.multiply(self.h_vec, e[i])
            axpy(comm, -ONE, self.multiply(e[i], self.h_vec))
            axpy(comm, -Fraction(self.degrees[i]), e[i])
            if clean(comm):
                fails.append(f"[h, {self.labels[i]}] is not deg * {self.labels[i]}")
            for j in range(self.dim):
                ij = self.mult.get((i, j), {})
                for k in range(self.dim):
                    lhs = self.multiply(ij, e[k])
                    axpy(lhs, -ONE, self.multiply(e[i], self.mult.get((j, k), {})))
                    if clean(lhs):
                        fails.append(f"associativity fails on {self.labels[i]}, {self.labels[j]}, {self.labels[k]}")
        return fails

    # -- QuotientSource ----------------------------------------------------------

    def slice(self, n: int, d: int) -> QuotientSlice:
        key = (n, d)
        if key in self._slices:
            return self._slices[key]
        if d <= -n - 1:
            sl = zero_slice(n, d)
        else:
            gens = tuple(self.of_degree(d))
            red = RowReducer(priority=lambda i: i)
            rels = []
            for b in range(self.dim):
                if self.degrees[b] > -n - 1:
                    continue
                for a in self.of_degree(d - self.degrees[b]):
                    vec = clean(self.mult.get((a, b), {}))
                    if vec:
                        rels.append(Relation(vec, ("ideal", a, b)))
                        red.add(vec)
            basis = tuple(i for i in gens if i not in red.pivots)
            sl = QuotientSlice(n=n, d=d, generators=gens, relations=rels, basis=basis,
                               converged=True, _reducer=red)
            cols = [sl.coords(self.multiply(self.h_vec, {u: ONE})) for u in basis]
            sl.left_h = SparseMatrix.from_columns(cols, len(basis))
        self._slices[key] = sl
        return sl

    def act(self, n: int, da: int, a: Mapping, db: int, b: Mapping) -> Vec:
        if da + db <= -n - 1:
            return {}
        prod = self.multiply(self.slice(n, da).lift(a), self.slice(n, db).lift(b))
        return self.slice(n, da + db).coords(prod)

    def generators_of_degree(self, e: int) -> List[int]:
        return self.of_degree(e)

    def act_generator(self, n: int, e: int, g: int, d: int, b: Mapping) -> Vec:
        if d + e <= -n - 1:
            return {}
        prod = self.multiply({g: ONE}, self.slice(n, d).lift(b))
        return self.slice(n, d + e).coords(prod)

    def unit(self, n: int) -> Vec:
        return self.slice(n, 0).coords(self.unit_vec)

    def hamiltonian(self, n: int) -> Vec:
        return self.slice(n, 0).coords(self.h_vec)

    def describe(self, n: int, d: int, pos: int) -> str:
        return self.labels[self.slice(n, d).basis[pos]]


def _base(kind: str):
    """(labels, mult table, unit, nilpotent part used in h) of the base ring."""
    if kind == "k":
        return ["1"], {(0, 0): {0: ONE}}, {0: ONE}, {}
    if kind == "eps":
        return ["1", "e"], {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}}, {0: ONE}, {1: ONE}
    if kind == "T2":
        # upper triangular 2x2 matrices: e11, e12, e22
        mult = {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 2): {1: ONE}, (2, 2): {2: ONE}}
        return ["e11", "e12", "e22"], mult, {0: ONE, 2: ONE}, {}
    raise ValueError(f"unknown base ring {kind!r}; expected one of {BASE_RINGS}")


def block_matrix_algebra(components: Sequence[Tuple], name: str = "synthetic") -> GradedAlgebra:
    """A = direct sum over components (gamma, size, base) of M_size(base).

    E_ij in a component has degree i - j and sits in the block
    (gamma + i, gamma + j); h = sum_i (gamma + i) E_ii, plus the nilpotent
    E_ii (x) e when the base is k[e]/e^2, which makes h non-semisimple.
    """
    labels: List[str] = []
    degrees: List[int] = []
    index: Dict[Tuple[int, int, int, int], int] = {}
    for c, (gamma, size, kind) in enumerate(components):
        blabels = _base(kind)[0]
        for i in range(size):
            for j in range(size):
                for b, bl in enumerate(blabels):
                    index[(c, i, j, b)] = len(labels)
                    labels.append(f"c{c}.E{i}{j}.{bl}")
                    degrees.append(i - j)
    mult: Dict[Tuple[int, int], Vec] = {}
    unit: Vec = {}
    h: Vec = {}
    for c, (gamma, size, kind) in enumerate(components):
        gamma = Fraction(gamma)
        blabels, bmult, bunit, bnil = _base(kind)
        for i in range(size):
            for b, cb in bunit.items():
                axpy(unit, cb, {index[(c, i, i, b)]: ONE})
                axpy(h, (gamma + i) * cb, {index[(c, i, i, b)]: ONE})
            for b, cb in bnil.items():
                axpy(h, cb, {index[(c, i, i, b)]: ONE})
            for j in range(size):
                for k in range(size):
                    for (b1, b2), prod in bmult.items():
                        out = {index[(c, i, k, b)]: x for b, x in prod.items()}
                        mult[(index[(c, i, j, b1)], index[(c, j, k, b2)])] = out
    return GradedAlgebra(tuple(labels), tuple(degrees), mult, clean(unit), clean(h), name)


# Omega_0 cases used throughout the tests and demos
STANDARD_CASES = {
    "omega_0": [(0, 3, "k")],
    "omega_0_1": [(0, 3, "k"), (1, 2, "k")],
    "omega_0_half": [(0, 2, "k"), (Fraction(1, 2), 2, "k")],
    "omega_0_2": [(0, 3, "k"), (2, 2, "k")],
    "jordan": [(0, 2, "eps")],
    "triangular": [(0, 2, "T2"), (Fraction(1, 3), 1, "k")],
}


def standard_algebra(name: str) -> GradedAlgebra:
    return block_matrix_algebra(STANDARD_CASES[name], name=name)
