"""The current Lie algebra g = V[t, 1/t] / dV[t, 1/t].

Elements are finite sums of modes ``J_m(u) = u (x) t^(m + wt(u) - 1)`` over
basis indices u, kept in a normal form modulo the image of
``d(u (x) t^k) = Tu (x) t^k + k u (x) t^(k-1)``:

* ``J_m(vac) = 0`` for ``m != 0``;
* in each weight r a complement C_r of T(V[r-1]) is fixed, and every basis
  element outside C_r is rewritten through ``J_m(Ty) = -(m + wt y) J_m(y)``.

``J_m(u)`` has degree ``-m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import OutOfWindow
from .linalg import ONE, ZERO, RowReducer, Vec, axpy, binomial, format_rational, scaled
from .voa import VoaData

Mode = Tuple[int, int]  # (m, basis index)


@dataclass(frozen=True)
class CurrentElement:
    """sum c * J_m(u), stored as {(m, u): c} with zero terms absent."""

    terms: Mapping[Mode, Fraction] = field(default_factory=dict)

    @classmethod
    def J(cls, m: int, u: int, c=ONE) -> "CurrentElement":
        return cls({(m, u): Fraction(c)})

    def __add__(self, other):
        out = dict(self.terms)
        axpy(out, ONE, other.terms)
        return CurrentElement(out)

    def __sub__(self, other):
        out = dict(self.terms)
        axpy(out, -ONE, other.terms)
        return CurrentElement(out)

    def scale(self, c):
        return CurrentElement(scaled(self.terms, Fraction(c)))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return {-m for (m, _) in self.terms}

    def degree(self) -> Optional[int]:
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def __eq__(self, other):
        return isinstance(other, CurrentElement) and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def format(self, voa: VoaData) -> str:
        if not self.terms:
            return "0"
        parts = [f"({format_rational(c)})J_{m}({voa.symbols[u]})" for (m, u), c in sorted(self.terms.items())]
        return " + ".join(parts)


@dataclass
class LieCheckReport:
    skew_failures: List[tuple] = field(default_factory=list)
    jacobi_failures: List[tuple] = field(default_factory=list)
    window_skips: int = 0
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.skew_failures and not self.jacobi_failures


class CurrentAlgebra:
    """Normal forms and brackets in the current Lie algebra of a VoaData."""

    def __init__(self, voa: VoaData):
        self.voa = voa
        # rewrite[b] = (y, tail): b = T(y) - tail, y in V[r-1], tail in C_r
        self._rewrite: Dict[int, Tuple[Vec, Vec]] = {}
        self._nf_cache: Dict[Mode, Dict[Mode, Fraction]] = {}
        self._build_complements()

    def _build_complements(self):
        voa = self.voa
        for r in sorted(set(voa.weights)):
            below = voa.basis_of_weight(r - 1)
            if not below:
                continue
            # pivot on the highest basis index: later symbols are the derived ones
            red = RowReducer(priority=lambda k: (k[0] == "v", k[1] if k[0] == "v" else -k[1]))
            for y in below:
                ty = voa.T({y: ONE})
                row = {("v", k): c for k, c in ty.items()}
                row[("y", y)] = ONE
                red.add(row)
            for piv, row in red.rows().items():
                if piv[0] != "v":
                    continue  # T kills this combination
                b = piv[1]
                # row: b + sum_j c_j e_j + sum_y a_y [y] where T(sum a_y y) = b + sum c_j e_j
                y = {k[1]: c for k, c in row.items() if k[0] == "y"}
                tail = {k[1]: c for k, c in row.items() if k[0] == "v" and k[1] != b}
                self._rewrite[b] = (y, tail)

    def complement(self, r: int) -> List[int]:
        return [i for i in self.voa.basis_of_weight(r) if i not in self._rewrite]

    # -- normal form ----------------------------------------------------------

    def _nf_mode(self, m: int, u: int) -> Dict[Mode, Fraction]:
        key = (m, u)
        hit = self._nf_cache.get(key)
        if hit is not None:
            return hit
        voa = self.voa
        if u == voa.vacuum:
            out = {key: ONE} if m == 0 else {}
        elif u in self._rewrite:
            y, tail = self._rewrite[u]
            out = {}
            r = voa.weights[u]
            # J_m(Ty) = -(m + r - 1) J_m(y)
            for j, a in y.items():
                axpy(out, -(m + r - 1) * a, self._nf_mode(m, j))
            for j, c in tail.items():
                axpy(out, -c, self._nf_mode(m, j))
        else:
            out = {key: ONE}
        self._nf_cache[key] = out
        return out

    def normal_form(self, x) -> CurrentElement:
        """Normal form of a CurrentElement or a {(m, u): c} mapping in J-indexing."""
        terms = x.terms if isinstance(x, CurrentElement) else x
        out: Dict[Mode, Fraction] = {}
        for (m, u), c in terms.items():
            axpy(out, c, self._nf_mode(m, u))
        return CurrentElement(out)

    def J_vec(self, m: int, vec: Mapping) -> CurrentElement:
        """Normal form of J_m applied to a (homogeneous or not) vector."""
        out: Dict[Mode, Fraction] = {}
        for u, c in vec.items():
            axpy(out, c, self._nf_mode(m, u))
        return CurrentElement(out)

    def raw_to_J(self, raw: Mapping[Tuple[int, int], Fraction]) -> Dict[Mode, Fraction]:
        """{(k, u): c} meaning sum c u (x) t^k, rewritten in J-indexing."""
        out: Dict[Mode, Fraction] = {}
        for (k, u), c in raw.items():
            axpy(out, c, {(k - self.voa.weights[u] + 1, u): ONE})
        return out

    def J_to_raw(self, x: CurrentElement) -> Dict[Tuple[int, int], Fraction]:
        out: Dict[Tuple[int, int], Fraction] = {}
        for (m, u), c in x.terms.items():
            axpy(out, c, {(m + self.voa.weights[u] - 1, u): ONE})
        return out

    def normal_form_mod_partial(self, raw: Mapping[Tuple[int, int], Fraction]) -> CurrentElement:
        """Normal form of a raw sum of u (x) t^k."""
        return self.normal_form(self.raw_to_J(raw))

    def partial(self, k: int, u: int) -> Dict[Tuple[int, int], Fraction]:
        """d(u (x) t^k) as a raw sum; raises OutOfWindow when Tu is not certified."""
        out: Dict[Tuple[int, int], Fraction] = {}
        for j, c in self.voa.T({u: ONE}).items():
            axpy(out, c, {(k, j): ONE})
        if k:
            axpy(out, Fraction(k), {(k - 1, u): ONE})
        return out

    # -- brackets -----------------------------------------------------------------

    def _mode_product_class(self, m: int, i: int, u: int, v: int) -> Dict[Mode, Fraction]:
        """Normal form of J_m(u_(i)v).

        When u is the conformal vector and omega_(0)v leaves the window, the
        translation axiom L_{-1} = T is used: J_m(Tv) = -(m + wt v) J_m(v).
        """
        voa = self.voa
        try:
            x = voa.basis_product(i, u, v)
        except OutOfWindow:
            if u == voa.conformal and i == 0:
                return scaled(self._nf_mode(m, v), -(m + voa.weights[v]))
            raise
        out: Dict[Mode, Fraction] = {}
        for w, c in x.items():
            axpy(out, c, self._nf_mode(m, w))
        return out

    def bracket_modes(self, m: int, u: int, n: int, v: int) -> Dict[Mode, Fraction]:
        """[J_m(u), J_n(v)] = sum_i C(m + wt u - 1, i) J_{m+n}(u_(i) v)."""
        voa = self.voa
        out: Dict[Mode, Fraction] = {}
        if u == voa.vacuum or v == voa.vacuum:
            return out  # J_0(vac) is central, other vacuum modes vanish
        top = voa.weights[u] + voa.weights[v] - 1 + voa.lower_bound
        a = m + voa.weights[u] - 1
        for i in range(0, top + 1):
            c = binomial(a, i)
            if c:
                axpy(out, c, self._mode_product_class(m + n, i, u, v))
        return out

    def bracket(self, x: CurrentElement, y: CurrentElement) -> CurrentElement:
        out: Dict[Mode, Fraction] = {}
        for (m, u), a in x.terms.items():
            for (n, v), b in y.terms.items():
                axpy(out, a * b, self.bracket_modes(m, u, n, v))
        return CurrentElement(out)

    def raw_bracket(self, k: int, u: int, l: int, v: int) -> Dict[Tuple[int, int], Fraction]:
        """[u t^k, v t^l] = sum_i C(k, i) (u_(i) v) t^(k + l - i), as a raw sum."""
        voa = self.voa
        out: Dict[Tuple[int, int], Fraction] = {}
        top = voa.weights[u] + voa.weights[v] - 1 + voa.lower_bound
        for i in range(0, top + 1):
            c = binomial(k, i)
            if not c:
                continue
            for w, a in voa.basis_product(i, u, v).items():
                axpy(out, c * a, {(k + l - i, w): ONE})
        return out


# -- module-level API -------------------------------------------------------------

def normal_form_mod_partial(voa: VoaData, raw, algebra: Optional[CurrentAlgebra] = None) -> CurrentElement:
    return (algebra or CurrentAlgebra(voa)).normal_form_mod_partial(raw)


def bracket(voa: VoaData, x: CurrentElement, y: CurrentElement, algebra: Optional[CurrentAlgebra] = None) -> CurrentElement:
    return (algebra or CurrentAlgebra(voa)).bracket(x, y)


def default_sample(voa: VoaData, mode_bound: int = 2, max_weight: Optional[int] = None) -> List[Mode]:
    """All normal-form generators J_m(u) with |m| <= mode_bound."""
    ca = CurrentAlgebra(voa)
    cap = voa.max_weight if max_weight is None else max_weight
    gens = []
    for r in sorted(set(voa.weights)):
        if r > cap:
            continue
        for u in ca.complement(r):
            if u == voa.vacuum:
                continue
            for m in range(-mode_bound, mode_bound + 1):
                gens.append((m, u))
    return gens


def check_lie_properties(voa: VoaData, sample: Optional[Sequence[Mode]] = None, mode_bound: int = 2) -> LieCheckReport:
    """Skew-symmetry on all pairs and Jacobi on all unordered triples of the sample."""
    ca = CurrentAlgebra(voa)
    gens = list(sample) if sample is not None else default_sample(voa, mode_bound)
    rep = LieCheckReport()
    cache: Dict[Tuple[Mode, Mode], Optional[CurrentElement]] = {}

    def br(a: Mode, b: Mode) -> Optional[CurrentElement]:
        key = (a, b)
        if key not in cache:
            try:
                cache[key] = CurrentElement(ca.bracket_modes(a[0], a[1], b[0], b[1]))
            except OutOfWindow:
                cache[key] = None
        return cache[key]

    def br_elem(a: Mode, y: CurrentElement) -> Optional[CurrentElement]:
        out: Dict[Mode, Fraction] = {}
        for b, c in y.terms.items():
            z = br(a, b)
            if z is None:
                return None
            axpy(out, c, z.terms)
        return CurrentElement(out)

    for a, b in combinations_with_replacement(gens, 2):
        xy, yx = br(a, b), br(b, a)
        if xy is None or yx is None:
            rep.window_skips += 1
            continue
        rep.checked += 1
        if not (xy + yx).is_zero():
            rep.skew_failures.append((a, b, (xy + yx).format(voa)))
    for a, b, c in combinations_with_replacement(gens, 3):
        parts = []
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            inner = br(y, z)
            outer = None if inner is None else br_elem(x, inner)
            if outer is None:
                break
            parts.append(outer)
        if len(parts) < 3:
            rep.window_skips += 1
            continue
        rep.checked += 1
        total = parts[0] + parts[1] + parts[2]
        if not total.is_zero():
            rep.jacobi_failures.append((a, b, c, total.format(voa)))
    return rep


def check_hamiltonian_relation(voa: VoaData, mode_bound: int = 4) -> List[tuple]:
    """Failures of [J_0(omega), J_n(u)] = -n J_n(u) for basis u and |n| <= bound."""
    ca = CurrentAlgebra(voa)
    failures = []
    if voa.conformal is None:
        return failures
    for u in range(voa.dim):
        for n in range(-mode_bound, mode_bound + 1):
            lhs = CurrentElement(ca.bracket_modes(0, voa.conformal, n, u))
            rhs = ca.normal_form({(n, u): Fraction(-n)})
            if lhs != rhs:
                failures.append((u, n, lhs.format(voa), rhs.format(voa)))
    return failures


def check_raw_consistency(voa: VoaData, mode_bound: int = 2) -> Tuple[int, List[tuple]]:
    """Compare the raw t-power bracket with the J-indexed bracket after
    normal form, on all in-window basis pairs.  Returns (checked, failures)."""
    ca = CurrentAlgebra(voa)
    checked, failures = 0, []
    for u in range(voa.dim):
        for v in range(voa.dim):
            for m in range(-mode_bound, mode_bound + 1):
                for n in range(-mode_bound, mode_bound + 1):
                    k = m + voa.weights[u] - 1
                    l = n + voa.weights[v] - 1
                    try:
                        raw = ca.normal_form_mod_partial(ca.raw_bracket(k, u, l, v))
                        jb = CurrentElement(ca.bracket_modes(m, u, n, v))
                    except OutOfWindow:
                        continue
                    checked += 1
                    if raw != jb:
                        failures.append((m, u, n, v, raw.format(voa), jb.format(voa)))
    return checked, failures


def check_partial_is_ideal(voa: VoaData, mode_bound: int = 2) -> Tuple[int, List[tuple]]:
    """[d(u t^k), v t^l] must vanish in g: brackets against the image of d."""
    ca = CurrentAlgebra(voa)
    checked, failures = 0, []
    for u in range(voa.dim):
        for v in range(voa.dim):
            for k in range(-mode_bound, mode_bound + 1):
                for l in range(-mode_bound, mode_bound + 1):
                    try:
                        dx = ca.partial(k, u)
                        total: Dict[Tuple[int, int], Fraction] = {}
                        for (kk, w), c in dx.items():
                            axpy(total, c, ca.raw_bracket(kk, w, l, v))
                        nf = ca.normal_form_mod_partial(total)
                    except OutOfWindow:
                        continue
                    checked += 1
                    if not nf.is_zero():
                        failures.append((k, u, l, v, nf.format(voa)))
    return checked, failures
