"""Hamiltonian spectra, Gamma sets and the finite algebras A_n.

Everything here works over any QuotientSource, so VOA quotients and the
synthetic graded algebras share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import NonRationalSpectrum, NotConverged
from .linalg import (ONE, EigenSplit, Polynomial, SparseMatrix, Vec, axpy, clean, format_rational,
                     gen_eigen_split, inverse, min_poly, rational_factorization, span_rank)
from .quotient import QuotientSource, TruncationWindow, VoaQuotientEngine, h_action
from .voa import VoaData


def as_source(obj, window: Optional[TruncationWindow] = None) -> QuotientSource:
    if isinstance(obj, QuotientSource):
        return obj
    if isinstance(obj, VoaData):
        return VoaQuotientEngine(obj, window)
    raise TypeError(f"cannot build quotient slices from {type(obj).__name__}")


# -- Gamma bookkeeping -----------------------------------------------------------


def is_natural(x: Fraction) -> bool:
    return x.denominator == 1 and x >= 0


def minimal_elements(omega: Sequence[Fraction]) -> List[Fraction]:
    """Elements with no other element below them by a positive integer."""
    out = []
    for lam in omega:
        if not any(mu != lam and is_natural(lam - mu) for mu in omega):
            out.append(lam)
    return sorted(out)


def gap_of(omega: Sequence[Fraction]) -> int:
    """max{lam - mu in N : lam, mu in omega}."""
    diffs = [lam - mu for lam in omega for mu in omega if is_natural(lam - mu)]
    return int(max(diffs)) if diffs else 0


def gamma_set(gamma0: Sequence[Fraction], m: int) -> List[Fraction]:
    return sorted({g + k for g in gamma0 for k in range(m + 1)})


def in_gamma(lam: Fraction, gamma0: Sequence[Fraction], m: Optional[int] = None) -> bool:
    """Membership in Gamma_m, or in Gamma_infinity when m is None."""
    for g in gamma0:
        k = lam - g
        if is_natural(k) and (m is None or k <= m):
            return True
    return False


# -- spectra -----------------------------------------------------------------------


def level_spectrum(source: QuotientSource, n: int) -> Tuple[Polynomial, List[Tuple[Fraction, int]], bool]:
    """(phi_n, roots with multiplicity, converged) for h on Q_n(0)."""
    left, _ = h_action(source, n, 0)
    phi = min_poly(left)
    roots, others = rational_factorization(phi)
    if others:
        raise NonRationalSpectrum(others[0][0])
    return phi, roots, bool(source.slice(n, 0).converged)


@dataclass
class SpectrumReport:
    n: int
    phi_n: Polynomial
    omega_n: List[Tuple[Fraction, int]]
    gamma_0: List[Fraction]
    gap: int
    ell: int
    provisional: bool
    contained: bool
    multiplicities_ok: bool

    @property
    def omega(self) -> List[Fraction]:
        return [lam for lam, _ in self.omega_n]

    def gamma(self, m: int) -> List[Fraction]:
        return gamma_set(self.gamma_0, m)

    def violations(self) -> List[str]:
        out = []
        if not self.contained:
            out.append(f"Omega_{self.n} is not inside Gamma_{self.n + self.gap}")
        if not self.multiplicities_ok:
            out.append(f"a root of phi_{self.n} has multiplicity above ell = {self.ell}")
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "phi_n": str(self.phi_n),
            "Omega_n": [[format_rational(lam), mult] for lam, mult in self.omega_n],
            "Gamma_0": [format_rational(g) for g in self.gamma_0],
            "gap": self.gap,
            "ell": self.ell,
            "provisional": self.provisional,
            "contained": self.contained,
            "multiplicities_ok": self.multiplicities_ok,
        }


def spectrum(source, n: int, window: Optional[TruncationWindow] = None) -> SpectrumReport:
    """Spectrum of h on Q_n(0) together with Gamma_0, g and ell."""
    source = as_source(source, window)
    _, roots0, conv0 = level_spectrum(source, 0)
    omega0 = [lam for lam, _ in roots0]
    gamma0 = minimal_elements(omega0)
    g = gap_of(omega0)
    _, roots_g, conv_g = level_spectrum(source, g)
    ell = max((m for _, m in roots_g), default=1)
    phi, roots, conv = level_spectrum(source, n)
    contained = all(in_gamma(lam, gamma0, n + g) for lam, _ in roots)
    return SpectrumReport(
        n=n, phi_n=phi, omega_n=list(roots), gamma_0=gamma0, gap=g, ell=ell,
        provisional=not (conv and conv0 and conv_g),
        contained=contained, multiplicities_ok=all(m <= ell for _, m in roots),
    )


# -- density ------------------------------------------------------------------------


@dataclass
class DensityReport:
    n: int
    d: int
    dim: int
    span_rank: int
    eigen_dims: Dict[Fraction, int]
    converged: bool

    @property
    def surjective(self) -> bool:
        return self.span_rank == self.dim


def bimodule_density_check(source, n: int, d: int, window: Optional[TruncationWindow] = None) -> DensityReport:
    """Do the simultaneous generalized eigenvectors of (left h, right h) span Q_n(d)?"""
    source = as_source(source, window)
    left, right = h_action(source, n, d)
    sl = source.slice(n, d)
    split = gen_eigen_split(left)
    vectors = []
    dims: Dict[Fraction, int] = {}
    for lam, blk in zip(split.eigenvalues, split.blocks):
        # the right action is left - d, so its generalized eigenspaces coincide;
        # still confirm each block is right-stable with eigenvalue lam - d
        shifted = right.shift(-(lam - d))
        for v in blk:
            w = dict(v)
            for _ in range(len(blk)):
                w = shifted.apply(w)
            if clean(w):
                raise AssertionError(f"block {lam} is not a right generalized eigenspace")
        vectors.extend(blk)
        dims[lam] = len(blk)
    return DensityReport(n=n, d=d, dim=sl.dim_upper, span_rank=span_rank(vectors),
                         eigen_dims=dims, converged=bool(sl.converged))


# -- finite algebras ------------------------------------------------------------------


@dataclass
class FiniteAlgebra:
    """A finite-dimensional algebra with a block decomposition by (lam, mu).

    Basis element i lies in block ``block_of[i]`` = (lam, mu) and has degree
    lam - mu.  ``mult[(i, j)]`` is the product of basis elements i and j.
    """

    gamma: Tuple[Fraction, ...]
    block_of: Tuple[Tuple[Fraction, Fraction], ...]
    mult: Dict[Tuple[int, int], Vec]
    unit: Vec
    hamiltonian: Vec
    labels: Tuple[str, ...] = ()
    closure_failures: List[str] = field(default_factory=list)
    uncertified: List[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.block_of)

    def degree(self, i: int) -> Fraction:
        lam, mu = self.block_of[i]
        return lam - mu

    def blocks(self) -> Dict[Tuple[Fraction, Fraction], List[int]]:
        out: Dict[Tuple[Fraction, Fraction], List[int]] = {}
        for i, key in enumerate(self.block_of):
            out.setdefault(key, []).append(i)
        return dict(sorted(out.items()))

    def multiply(self, x: Mapping, y: Mapping) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                prod = self.mult.get((i, j))
                if prod:
                    axpy(out, a * b, prod)
        return out

    def left_matrix(self, x: Mapping) -> SparseMatrix:
        cols = [self.multiply(x, {j: ONE}) for j in range(self.dim)]
        return SparseMatrix.from_columns(cols, self.dim)

    def idempotent(self, lam: Fraction) -> Vec:
        """The component 1[lam, lam] of the unit."""
        return {i: c for i, c in self.unit.items() if self.block_of[i] == (lam, lam)}

    def check(self) -> List[str]:
        """Exact structural checks; returns a list of failure descriptions."""
        fails = list(self.closure_failures)
        e = [{i: ONE} for i in range(self.dim)]
        for i in range(self.dim):
            if clean(self.multiply(self.unit, e[i])) != e[i]:
                fails.append(f"unit fails on the left of basis {i}")
            if clean(self.multiply(e[i], self.unit)) != e[i]:
                fails.append(f"unit fails on the right of basis {i}")
            comm = self.multiply(self.hamiltonian, e[i])
            axpy(comm, -ONE, self.multiply(e[i], self.hamiltonian))
            axpy(comm, -self.degree(i), e[i])
            if clean(comm):
                fails.append(f"[h, b{i}] is not {format_rational(self.degree(i))} b{i}")
        for i in range(self.dim):
            for j in range(self.dim):
                if self.block_of[i][1] != self.block_of[j][0] and clean(self.mult.get((i, j), {})):
                    fails.append(f"blocks of b{i}, b{j} have different middle eigenvalues but multiply to nonzero")
        for i in range(self.dim):
            for j in range(self.dim):
                ij = self.mult.get((i, j), {})
                for k in range(self.dim):
                    lhs = self.multiply(ij, e[k])
                    rhs = self.multiply(e[i], self.mult.get((j, k), {}))
                    axpy(lhs, -ONE, rhs)
                    if clean(lhs):
                        fails.append(f"associativity fails on (b{i}, b{j}, b{k})")
        return fails

    def subalgebra(self, gamma: Sequence[Fraction]) -> Tuple["FiniteAlgebra", List[int]]:
        """The corner sum of blocks with both indices in ``gamma``; returns the
        algebra and the embedding (list of ambient indices)."""
        keep = set(gamma)
        idx = [i for i, (lam, mu) in enumerate(self.block_of) if lam in keep and mu in keep]
        pos = {g: k for k, g in enumerate(idx)}

        def restrict(vec: Mapping) -> Vec:
            out = {}
            for i, c in vec.items():
                if i in pos:
                    out[pos[i]] = c
                elif c:
                    raise ValueError("product leaves the corner")
            return out

        mult = {}
        for a in idx:
            for b in idx:
                prod = self.mult.get((a, b))
                if prod:
                    mult[(pos[a], pos[b])] = restrict(prod)
        unit = {pos[i]: c for i, c in self.unit.items() if i in pos and self.block_of[i][0] in keep}
        ham = {pos[i]: c for i, c in self.hamiltonian.items() if i in pos}
        sub = FiniteAlgebra(
            gamma=tuple(sorted(keep)), block_of=tuple(self.block_of[i] for i in idx), mult=mult,
            unit=unit, hamiltonian=ham,
            labels=tuple(self.labels[i] for i in idx) if self.labels else (),
        )
        return sub, idx

    def to_dict(self) -> dict:
        def vec(v):
            return [[i, format_rational(c)] for i, c in sorted(v.items())]

        return {
            "dim": self.dim,
            "gamma": [format_rational(g) for g in self.gamma],
            "blocks": [
                {"lambda": format_rational(lam), "mu": format_rational(mu), "basis": ids}
                for (lam, mu), ids in self.blocks().items()
            ],
            "labels": list(self.labels),
            "mult": [{"left": i, "right": j, "value": vec(v)} for (i, j), v in sorted(self.mult.items()) if v],
            "unit": vec(self.unit),
            "hamiltonian": vec(self.hamiltonian),
        }


@dataclass
class _SplitSlice:
    d: int
    split: EigenSplit
    inv: SparseMatrix
    owner: List[Tuple[Fraction, int]]  # eigen-basis position -> (eigenvalue, index in block)


def _split_slice(source: QuotientSource, m: int, d: int) -> _SplitSlice:
    left, _ = h_action(source, m, d)
    split = gen_eigen_split(left)
    dim = left.rows
    inv = inverse(split.change_of_basis(dim)) if dim else SparseMatrix.zero(0, 0)
    owner = [(lam, k) for lam, blk in zip(split.eigenvalues, split.blocks) for k in range(len(blk))]
    return _SplitSlice(d, split, inv, owner)


def extract_finite_algebra(source, n: int, m: Optional[int] = None, window: Optional[TruncationWindow] = None,
                           require_converged: bool = True,
                           gamma_0: Optional[Sequence[Fraction]] = None) -> FiniteAlgebra:
    """A_n realized inside the quotient slices Q_m(d), m >= n."""
    source = as_source(source, window)
    m = n if m is None else m
    if m < n:
        raise ValueError("need m >= n")
    if gamma_0 is None:
        _, roots0, _ = level_spectrum(source, 0)
        gamma_0 = minimal_elements([lam for lam, _ in roots0])
    gamma = gamma_set(gamma_0, n)
    gset = set(gamma)
    ds = sorted({int(lam - mu) for lam in gamma for mu in gamma if (lam - mu).denominator == 1})
    splits: Dict[int, _SplitSlice] = {}
    index: Dict[Tuple[int, Fraction, int], int] = {}
    entries: List[Tuple[int, Fraction, Vec]] = []
    block_of = []
    labels = []
    for d in ds:
        sl = source.slice(m, d)
        if require_converged and not sl.converged:
            raise NotConverged(f"slice Q_{m}({d}) is not stable across windows")
        sp = _split_slice(source, m, d)
        splits[d] = sp
        for lam, blk in zip(sp.split.eigenvalues, sp.split.blocks):
            if lam in gset and (lam - d) in gset:
                for k, v in enumerate(blk):
                    index[(d, lam, k)] = len(entries)
                    entries.append((d, lam, v))
                    block_of.append((lam, lam - d))
                    labels.append(f"[{format_rational(lam)},{format_rational(lam - d)}]#{k}")
    failures: List[str] = []
    uncertified: List[str] = []

    def to_algebra(d: int, vec: Vec, where: str, strict: bool = True) -> Vec:
        if d not in splits:
            if clean(vec):
                # nonzero only matters when the target slice is window-stable
                if source.slice(m, d).converged:
                    failures.append(f"{where}: lands in degree {d} outside the algebra")
                else:
                    uncertified.append(f"{where}: Q_{m}({d}) is not window-stable")
            return {}
        sp = splits[d]
        coeffs = sp.inv.apply(vec)
        out: Vec = {}
        for p, c in coeffs.items():
            lam, k = sp.owner[p]
            key = (d, lam, k)
            if key in index:
                out[index[key]] = c
            elif strict:
                failures.append(f"{where}: component at eigenvalue {format_rational(lam)} leaves A_{n}")
        return out

    mult: Dict[Tuple[int, int], Vec] = {}
    for i, (da, _, va) in enumerate(entries):
        for j, (db, _, vb) in enumerate(entries):
            if da + db <= -m - 1:
                continue
            prod = source.act(m, da, va, db, vb)
            res = to_algebra(da + db, clean(prod), f"b{i}*b{j}")
            if res:
                mult[(i, j)] = res
    # 1_{A_n} and h_{A_n} keep only the components 1_m[lam, lam], lam in Gamma_n
    unit = to_algebra(0, source.unit(m), "unit", strict=False) if 0 in splits else {}
    ham = to_algebra(0, source.hamiltonian(m), "hamiltonian", strict=False) if 0 in splits else {}
    return FiniteAlgebra(gamma=tuple(gamma), block_of=tuple(block_of), mult=mult, unit=unit,
                         hamiltonian=ham, labels=tuple(labels), closure_failures=sorted(set(failures)),
                         uncertified=sorted(set(uncertified)))
