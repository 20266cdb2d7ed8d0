"""Exact rational linear algebra.

Sparse vectors are plain dicts mapping a key to a nonzero ``Fraction``.
Keys are usually integers (matrix columns, basis positions) but any
hashable, mutually comparable value works.

Everything here is exact; nothing is ever rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import NonRationalSpectrum, ParseError

Vec = Dict[Hashable, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


# -- scalars --------------------------------------------------------------

def parse_rational(text, strict: bool = False) -> Fraction:
    """Parse ``"p/q"`` into a Fraction.

    With ``strict`` the text must be exactly ``p/q`` with q > 0 and the
    fraction already in lowest terms (the file-format rule); otherwise bare
    integers and unreduced fractions are accepted.
    """
    if isinstance(text, int) and not isinstance(text, bool) and not strict:
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string 'p/q', got {text!r}")
    s = text.strip()
    try:
        if "/" in s:
            p, q = s.split("/")
            p, q = int(p), int(q)
        elif strict:
            raise ParseError(f"rational {text!r} must be written 'p/q'")
        else:
            p, q = int(s), 1
    except ValueError as exc:
        raise ParseError(f"bad rational {text!r}") from exc
    if q <= 0:
        raise ParseError(f"denominator must be positive in {text!r}")
    x = Fraction(p, q)
    if strict and (x.numerator, x.denominator) != (p, q):
        raise ParseError(f"rational {text!r} is not in lowest terms")
    return x


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def binomial(top: int, i: int) -> int:
    """Generalized binomial C(top, i) for integer ``top`` and ``i >= 0``."""
    if i < 0:
        return 0
    if top >= 0:
        return comb(top, i) if i <= top else 0
    # C(-a, i) = (-1)^i C(a+i-1, i)
    return (-1) ** i * comb(-top + i - 1, i)


# -- sparse vectors -------------------------------------------------------

def axpy(acc: Vec, coeff, vec: Mapping) -> Vec:
    """acc += coeff * vec, in place; zero entries are dropped."""
    if not coeff:
        return acc
    for k, x in vec.items():
        y = acc.get(k, ZERO) + coeff * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def scaled(vec: Mapping, coeff) -> Vec:
    if not coeff:
        return {}
    return {k: coeff * x for k, x in vec.items()}


def vec_sum(terms: Iterable[Tuple[Fraction, Mapping]]) -> Vec:
    acc: Vec = {}
    for c, v in terms:
        axpy(acc, c, v)
    return acc


def clean(vec: Mapping) -> Vec:
    return {k: Fraction(x) for k, x in vec.items() if x}


def dense(vec: Mapping, n: int) -> List[Fraction]:
    out = [ZERO] * n
    for k, x in vec.items():
        out[k] = x
    return out


# -- matrices -------------------------------------------------------------

class SparseMatrix:
    """Immutable rows x cols matrix over Q with zero entries absent."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping] = None):
        self.rows = rows
        self.cols = cols
        data: Dict[int, Vec] = {}
        for (i, j), x in (entries or {}).items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
            x = Fraction(x)
            if x:
                data.setdefault(i, {})[j] = x
        self._rows = data

    @classmethod
    def _from_rows(cls, rows, cols, row_dicts):
        m = cls.__new__(cls)
        m.rows, m.cols = rows, cols
        m._rows = {i: r for i, r in row_dicts.items() if r}
        return m

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): x for i, r in enumerate(data) for j, x in enumerate(r) if x})

    @classmethod
    def from_columns(cls, columns: Sequence[Mapping], rows: int) -> "SparseMatrix":
        entries = {}
        for j, col in enumerate(columns):
            for i, x in col.items():
                entries[(i, j)] = x
        return cls(rows, len(columns), entries)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._rows.get(i, {}).get(j, ZERO)

    def entries(self) -> Dict[Tuple[int, int], Fraction]:
        return {(i, j): x for i, r in self._rows.items() for j, x in r.items()}

    def row(self, i: int) -> Vec:
        return dict(self._rows.get(i, {}))

    def column(self, j: int) -> Vec:
        return {i: r[j] for i, r in self._rows.items() if j in r}

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def to_dense(self) -> List[List[Fraction]]:
        return [dense(self._rows.get(i, {}), self.cols) for i in range(self.rows)]

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(j, i): x for (i, j), x in self.entries().items()})

    def apply(self, vec: Mapping) -> Vec:
        """Matrix times sparse column vector."""
        out: Vec = {}
        for i, r in self._rows.items():
            s = ZERO
            for j, x in vec.items():
                y = r.get(j)
                if y is not None:
                    s += x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out: Dict[int, Vec] = {}
            for i, r in self._rows.items():
                acc: Vec = {}
                for k, x in r.items():
                    orow = other._rows.get(k)
                    if orow:
                        axpy(acc, x, orow)
                if acc:
                    out[i] = acc
            return SparseMatrix._from_rows(self.rows, other.cols, out)
        return self.apply(other)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_same(other)
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            axpy(out.setdefault(i, {}), ONE, r)
        return SparseMatrix._from_rows(self.rows, self.cols, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, c) -> "SparseMatrix":
        c = Fraction(c)
        return SparseMatrix._from_rows(self.rows, self.cols, {i: scaled(r, c) for i, r in self._rows.items()})

    def shift(self, c) -> "SparseMatrix":
        """self + c * I (square only)."""
        if self.rows != self.cols:
            raise ValueError("shift needs a square matrix")
        return self + SparseMatrix.identity(self.rows).scale(c)

    def power(self, k: int) -> "SparseMatrix":
        result = SparseMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not self._rows

    def _check_same(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries().items()))))

    def __repr__(self):
        return f"SparseMatrix({self.rows}, {self.cols}, nnz={self.nnz()})"


# -- elimination ----------------------------------------------------------

class RowReducer:
    """Incremental reduced row echelon form over Q.

    Rows are sparse vectors.  The pivot of a new row is the key with the
    greatest ``priority(key)``, so callers decide which coordinates get
    eliminated (pivots) and which survive as quotient coordinates.
    Rows are kept fully reduced: no row contains another row's pivot.
    """

    def __init__(self, priority: Optional[Callable] = None):
        self.priority = priority or (lambda k: k)
        self._rows: Dict[Hashable, Vec] = {}
        # column key -> set of pivots whose rows touch that column
        self._occ: Dict[Hashable, set] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self):
        return set(self._rows)

    def rows(self) -> Dict[Hashable, Vec]:
        return {p: dict(r) for p, r in self._rows.items()}

    def reduce(self, vec: Mapping) -> Vec:
        """Normal form of ``vec`` modulo the span of the stored rows."""
        out = dict(vec)
        hits = [k for k in out if k in self._rows]
        for p in hits:
            c = out.get(p)
            if c:
                axpy(out, -c, self._rows[p])
        return out

    def add(self, vec: Mapping) -> bool:
        """Add a row; returns False when it was already in the span."""
        r = self.reduce(vec)
        if not r:
            return False
        p = max(r, key=self.priority)
        inv = ONE / r[p]
        r = {k: x * inv for k, x in r.items()}
        for q in list(self._occ.get(p, ())):
            row = self._rows[q]
            c = row.get(p)
            if c:
                self._untrack(q, row)
                axpy(row, -c, r)
                self._track(q, row)
        self._rows[p] = r
        self._track(p, r)
        return True

    def _track(self, p, row):
        for k in row:
            self._occ.setdefault(k, set()).add(p)

    def _untrack(self, p, row):
        for k in row:
            s = self._occ.get(k)
            if s is not None:
                s.discard(p)

    def copy(self) -> "RowReducer":
        other = RowReducer(self.priority)
        other._rows = {p: dict(r) for p, r in self._rows.items()}
        other._occ = {k: set(s) for k, s in self._occ.items()}
        return other


def rank_kernel(m: SparseMatrix) -> Tuple[int, List[Vec]]:
    """Rank and a kernel basis of ``m``.

    Columns with the largest support are pivoted last, which keeps fill-in
    down on the sparse relation matrices this is used for.
    """
    support = [0] * m.cols
    for (_, j) in m.entries():
        support[j] += 1
    # higher priority -> pivot first; sparse columns first
    order = {j: (-support[j], -j) for j in range(m.cols)}
    red = RowReducer(priority=lambda j: order[j])
    for i in range(m.rows):
        red.add(m.row(i))
    rows = red.rows()
    kernel = []
    for f in range(m.cols):
        if f in rows:
            continue
        v: Vec = {f: ONE}
        for p, r in rows.items():
            c = r.get(f)
            if c:
                v[p] = -c
        kernel.append(v)
    return red.rank, kernel


def span_rank(vectors: Iterable[Mapping]) -> int:
    red = RowReducer()
    for v in vectors:
        red.add(v)
    return red.rank


def solve_in_span(vectors: Sequence[Mapping], target: Mapping) -> Optional[List[Fraction]]:
    """Coefficients c with sum c_i v_i == target, or None."""
    tagged = []
    for i, v in enumerate(vectors):
        row = {("v", k): x for k, x in v.items()}
        row[("c", i)] = ONE
        tagged.append(row)
    # pivots prefer vector coordinates; coefficient tags stay free
    red = RowReducer(priority=lambda k: (1, repr(k[1])) if k[0] == "v" else (0, -k[1]))
    for row in tagged:
        red.add(row)
    rest = red.reduce({("v", k): x for k, x in target.items()})
    if any(k[0] == "v" for k in rest):
        return None
    # target - sum(...) reduces to the tag combination t with target == -t . v
    coeffs = [ZERO] * len(vectors)
    for (kind, i), x in rest.items():
        coeffs[i] = -x
    return coeffs


# -- polynomials ----------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over Q, coefficients lowest degree first."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(x) for x in self.coeffs]
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x_minus(cls, root) -> "Polynomial":
        return cls((-Fraction(root), ONE))

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((ONE,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def monic(self) -> "Polynomial":
        lead = self.coeffs[-1]
        return Polynomial(tuple(c / lead for c in self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return Polynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Polynomial(())
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.one()
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - other.degree, 1)
        lead = other.coeffs[-1]
        while len(rem) - 1 >= other.degree and rem:
            shift = len(rem) - 1 - other.degree
            c = rem[-1] / lead
            q[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[i + shift] -= c * b
            while rem and not rem[-1]:
                rem.pop()
        return Polynomial(tuple(q)), Polynomial(tuple(rem))

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __call__(self, x):
        if isinstance(x, SparseMatrix):
            n = x.rows
            acc = SparseMatrix.zero(n, n)
            for c in reversed(self.coeffs):
                acc = (acc @ x).shift(c)
            return acc
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            else:
                term = f"{c}{'*' + mono if mono else ''}"
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_zero() or b.is_zero():
        return Polynomial(())
    return ((a * b) // poly_gcd(a, b)).monic()


def rational_factorization(p: Polynomial) -> Tuple[List[Tuple[Fraction, int]], List[Tuple[Polynomial, int]]]:
    """Split ``p`` into rational roots with multiplicity and the remaining
    irreducible factors of degree > 1."""
    import sympy

    x = sympy.Symbol("x")
    expr = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], x, domain="QQ")
    _, factors = expr.factor_list()
    roots, others = [], []
    for f, mult in factors:
        cs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in reversed(f.all_coeffs())]
        poly = Polynomial(tuple(cs)).monic()
        if poly.degree == 1:
            roots.append((-poly.coeffs[0], mult))
        else:
            others.append((poly, mult))
    roots.sort()
    return roots, others


# -- minimal polynomial and generalized eigenspaces ----------------------

def _local_min_poly(m: SparseMatrix, v: Vec, basis: RowReducer) -> Polynomial:
    """Minimal polynomial of ``v`` under ``m``; extends ``basis`` with the
    Krylov vectors it visits."""
    stack: List[Tuple[Hashable, Vec, Polynomial]] = []
    w = dict(v)
    j = 0
    while True:
        basis.add(w)
        vec, poly = dict(w), Polynomial((ZERO,) * j + (ONE,))
        for p, rv, rp in stack:
            c = vec.get(p)
            if c:
                axpy(vec, -c, rv)
                poly = poly - rp * c
        if not vec:
            return poly.monic()
        p = max(vec)
        inv = ONE / vec[p]
        stack.append((p, scaled(vec, inv), poly * inv))
        w = m.apply(w)
        j += 1


def min_poly(m: SparseMatrix) -> Polynomial:
    """Monic minimal polynomial, as the LCM of Krylov relation polynomials."""
    if m.rows != m.cols:
        raise ValueError("min_poly needs a square matrix")
    result = Polynomial.one()
    seen = RowReducer()
    for i in range(m.rows):
        e = {i: ONE}
        if not seen.reduce(e):
            continue
        result = poly_lcm(result, _local_min_poly(m, e, seen))
    return result


@dataclass(frozen=True)
class EigenSplit:
    eigenvalues: Tuple[Fraction, ...]
    blocks: Tuple[Tuple[Vec, ...], ...]
    multiplicities: Tuple[int, ...]

    def block_of(self, lam) -> Tuple[Vec, ...]:
        return self.blocks[self.eigenvalues.index(Fraction(lam))]

    def change_of_basis(self, n: int) -> SparseMatrix:
        cols = [v for blk in self.blocks for v in blk]
        return SparseMatrix.from_columns(cols, n)

    def dims(self) -> Dict[Fraction, int]:
        return {lam: len(b) for lam, b in zip(self.eigenvalues, self.blocks)}


def gen_eigen_split(m: SparseMatrix) -> EigenSplit:
    """Generalized eigenspace decomposition over Q.

    Raises NonRationalSpectrum when the minimal polynomial does not split.
    """
    phi = min_poly(m)
    roots, others = rational_factorization(phi)
    if others:
        raise NonRationalSpectrum(others[0][0])
    blocks = []
    for lam, mult in roots:
        shifted = m.shift(-lam).power(mult)
        _, ker = rank_kernel(shifted)
        blocks.append(tuple(ker))
    return EigenSplit(
        eigenvalues=tuple(lam for lam, _ in roots),
        blocks=tuple(blocks),
        multiplicities=tuple(mult for _, mult in roots),
    )


def matrix_from_images(images: Sequence[Mapping], rows: int) -> SparseMatrix:
    """Matrix whose j-th column is ``images[j]``."""
    return SparseMatrix.from_columns(images, rows)


def inverse(m: SparseMatrix) -> SparseMatrix:
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse needs a square matrix")
    red = RowReducer(priority=lambda k: (k[0] == "a", -k[1]))
    for i in range(n):
        row = {("a", j): x for j, x in m.row(i).items()}
        row[("b", i)] = ONE
        red.add(row)
    rows = red.rows()
    if len([p for p in rows if p[0] == "a"]) != n:
        raise ZeroDivisionError("matrix is singular")
    entries = {}
    for (kind, j), r in rows.items():
        for (k2, i), x in r.items():
            if k2 == "b":
                entries[(j, i)] = x
    return SparseMatrix(n, n, entries)
