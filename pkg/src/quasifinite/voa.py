"""Truncated vertex operator algebras given by structure constants.

A ``VoaData`` stores a finite graded basis and the n-th products
``u_(n)v`` of basis elements.  The truncation is explicit: a product is
either stored, certified zero (inside the window but absent), or
out-of-window, in which case asking for it raises ``OutOfWindow``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import InvariantViolation, OutOfWindow, ParseError
from .linalg import ONE, ZERO, Vec, axpy, binomial, format_rational, parse_rational, scaled


@dataclass(frozen=True)
class VoaData:
    name: str
    symbols: Tuple[str, ...]
    weights: Tuple[int, ...]
    vacuum: int
    conformal: Optional[int]
    central_charge: Fraction
    lower_bound: int
    max_weight: int
    n_min: int
    n_max: int
    products: Mapping[Tuple[int, int, int], Vec] = field(repr=False)

    # -- basic access -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise KeyError(f"unknown basis symbol {symbol!r}") from None

    def weight(self, i: int) -> int:
        return self.weights[i]

    def basis_of_weight(self, r: int) -> List[int]:
        return [i for i, w in enumerate(self.weights) if w == r]

    def weight_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))

    def omega(self) -> Vec:
        """The conformal vector (zero only for the trivial algebra)."""
        return {} if self.conformal is None else {self.conformal: ONE}

    def vac(self) -> Vec:
        return {self.vacuum: ONE}

    # -- products -----------------------------------------------------------

    def product_weight(self, n: int, i: int, j: int) -> int:
        return self.weights[i] + self.weights[j] - n - 1

    def in_window(self, n: int, i: int, j: int) -> bool:
        r = self.product_weight(n, i, j)
        if r < -self.lower_bound:
            return True
        return self.n_min <= n <= self.n_max and r <= self.max_weight

    def basis_product(self, n: int, i: int, j: int) -> Vec:
        """u_(n)v for basis indices; raises OutOfWindow when uncertified."""
        r = self.product_weight(n, i, j)
        if r < -self.lower_bound:
            return {}
        if not (self.n_min <= n <= self.n_max) or r > self.max_weight:
            raise OutOfWindow(
                f"{self.symbols[i]}_({n}){self.symbols[j]} lies outside the window",
                location=(n, self.symbols[i], self.symbols[j]),
            )
        return self.products.get((n, i, j), {})

    def product(self, n: int, u: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for i, a in u.items():
            for j, b in v.items():
                axpy(out, a * b, self.basis_product(n, i, j))
        return out

    def T(self, u: Mapping) -> Vec:
        """Translation Tu = u_(-2) vac."""
        return self.product(-2, u, self.vac())

    def L(self, n: int, u: Mapping) -> Vec:
        """Virasoro mode L_n u = omega_(n+1) u."""
        return self.product(n + 1, self.omega(), u)

    def weight_of(self, u: Mapping) -> Optional[int]:
        """Common weight of a homogeneous vector (None if zero or mixed)."""
        ws = {self.weights[i] for i in u}
        return ws.pop() if len(ws) == 1 else None

    def format_vec(self, u: Mapping) -> str:
        if not u:
            return "0"
        return " + ".join(f"({format_rational(c)}){self.symbols[i]}" for i, c in sorted(u.items()))


def apply_product(voa: VoaData, n: int, u: Mapping, v: Mapping) -> Vec:
    """Bilinear extension of the stored n-th product."""
    return voa.product(n, u, v)


# -- loading ------------------------------------------------------------------

def _require(doc, key, kind):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    val = doc[key]
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParseError(f"field {key!r} must be an integer")
    elif not isinstance(val, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return val


def parse_sparse(value, index: Mapping[str, int], where: str) -> Vec:
    if not isinstance(value, list):
        raise ParseError(f"{where}: value must be an array of [symbol, 'p/q'] pairs")
    out: Vec = {}
    for entry in value:
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], str)):
            raise ParseError(f"{where}: bad term {entry!r}")
        sym, coeff = entry
        if sym not in index:
            raise ParseError(f"{where}: unknown symbol {sym!r}")
        c = parse_rational(coeff, strict=True)
        if index[sym] in out:
            raise ParseError(f"{where}: repeated symbol {sym!r}")
        if c:
            out[index[sym]] = c
    return out


def read_document(source) -> dict:
    """Accept a path, JSON text, or an already-parsed dict."""
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc}") from exc
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    return doc


def load_voa(source) -> VoaData:
    """Parse and validate a structure-constant document."""
    doc = read_document(source)
    name = _require(doc, "name", str)
    lower = _require(doc, "lower_bound_m", int)
    c = parse_rational(_require(doc, "central_charge", str), strict=True)
    basis = _require(doc, "basis", list)
    symbols, weights = [], []
    for k, b in enumerate(basis):
        if not isinstance(b, dict) or not isinstance(b.get("symbol"), str):
            raise ParseError(f"basis[{k}] must be an object with a string 'symbol'")
        w = b.get("weight")
        if not isinstance(w, int) or isinstance(w, bool):
            raise ParseError(f"basis[{k}] ({b['symbol']}) needs an integer weight")
        symbols.append(b["symbol"])
        weights.append(w)
    if len(set(symbols)) != len(symbols):
        raise ParseError("basis symbols must be distinct")
    index = {s: i for i, s in enumerate(symbols)}
    vac_sym = _require(doc, "vacuum", str)
    if vac_sym not in index:
        raise ParseError(f"vacuum {vac_sym!r} is not a basis symbol")
    if "conformal" not in doc:
        raise ParseError("missing field 'conformal'")
    conf_sym = doc["conformal"]
    if conf_sym is not None and (not isinstance(conf_sym, str) or conf_sym not in index):
        raise ParseError(f"conformal {conf_sym!r} is not a basis symbol")
    window = _require(doc, "window", dict)
    W = _require(window, "max_weight", int)
    n_min = _require(window, "n_min", int)
    n_max = _require(window, "n_max", int)
    if n_min > n_max or W < 0:
        raise ParseError("window must have n_min <= n_max and max_weight >= 0")

    products: Dict[Tuple[int, int, int], Vec] = {}
    for k, p in enumerate(_require(doc, "products", list)):
        if not isinstance(p, dict):
            raise ParseError(f"products[{k}] must be an object")
        n = _require(p, "n", int)
        left, right = _require(p, "left", str), _require(p, "right", str)
        where = f"products[{k}] {left}_({n}){right}"
        if left not in index or right not in index:
            raise ParseError(f"{where}: unknown symbol")
        key = (n, index[left], index[right])
        if key in products:
            raise ParseError(f"{where}: duplicate entry")
        val = parse_sparse(_require(p, "value", list), index, where)
        if val:
            products[key] = val

    voa = VoaData(
        name=name,
        symbols=tuple(symbols),
        weights=tuple(weights),
        vacuum=index[vac_sym],
        conformal=None if conf_sym is None else index[conf_sym],
        central_charge=c,
        lower_bound=lower,
        max_weight=W,
        n_min=n_min,
        n_max=n_max,
        products=products,
    )
    violations = validate(voa)
    if violations:
        raise InvariantViolation(violations)
    return voa


def validate(voa: VoaData) -> List[str]:
    """Every structural invariant violation, each naming its location."""
    out: List[str] = []
    S = voa.symbols
    for i, w in enumerate(voa.weights):
        if w < -voa.lower_bound:
            out.append(f"basis {S[i]}: weight {w} below lower bound -{voa.lower_bound}")
        if w > voa.max_weight:
            out.append(f"basis {S[i]}: weight {w} exceeds max_weight {voa.max_weight}")
    if voa.weights[voa.vacuum] != 0:
        out.append(f"vacuum {S[voa.vacuum]}: weight must be 0")
    if voa.conformal is None:
        if voa.dim != 1:
            out.append("conformal vector may be null only in the one-dimensional algebra")
    elif voa.weights[voa.conformal] != 2:
        out.append(f"conformal {S[voa.conformal]}: weight must be 2")
    for (n, i, j), val in sorted(voa.products.items()):
        where = f"product {S[i]}_({n}){S[j]}"
        r = voa.product_weight(n, i, j)
        bad = sorted({S[k] for k in val if voa.weights[k] != r})
        if bad:
            out.append(f"{where}: not homogeneous of weight {r} (terms {', '.join(bad)})")
        if r < -voa.lower_bound or not (voa.n_min <= n <= voa.n_max) or r > voa.max_weight:
            out.append(f"{where}: stored outside the window")
    vac = voa.vacuum
    for i in range(voa.dim):
        if voa.in_window(-1, i, vac):
            got = voa.products.get((-1, i, vac), {})
            if got != {i: ONE}:
                out.append(f"product {S[i]}_(-1){S[vac]}: vacuum axiom requires {S[i]}")
        for n in range(max(0, voa.n_min), voa.n_max + 1):
            if voa.products.get((n, i, vac)):
                out.append(f"product {S[i]}_({n}){S[vac]}: vacuum axiom requires 0")
    return out


def to_document(voa: VoaData) -> dict:
    S = voa.symbols
    products = []
    for (n, i, j), val in voa.products.items():
        products.append({
            "n": n, "left": S[i], "right": S[j],
            "value": sorted([S[k], format_rational(c)] for k, c in val.items()),
        })
    products.sort(key=lambda p: (p["left"], p["right"], p["n"]))
    return {
        "name": voa.name,
        "lower_bound_m": voa.lower_bound,
        "central_charge": format_rational(voa.central_charge),
        "basis": [{"symbol": s, "weight": w} for s, w in zip(S, voa.weights)],
        "vacuum": S[voa.vacuum],
        "conformal": None if voa.conformal is None else S[voa.conformal],
        "window": {"max_weight": voa.max_weight, "n_min": voa.n_min, "n_max": voa.n_max},
        "products": products,
    }


def truncate(voa: VoaData, max_weight: int) -> VoaData:
    """The same algebra seen through a smaller weight window."""
    if max_weight > voa.max_weight:
        raise ValueError("can only shrink the window")
    keep = [i for i, w in enumerate(voa.weights) if w <= max_weight]
    remap = {old: new for new, old in enumerate(keep)}
    prods = {}
    for (n, i, j), val in voa.products.items():
        if i in remap and j in remap and voa.product_weight(n, i, j) <= max_weight:
            prods[(n, remap[i], remap[j])] = {remap[k]: c for k, c in val.items()}
    return VoaData(
        name=voa.name,
        symbols=tuple(voa.symbols[i] for i in keep),
        weights=tuple(voa.weights[i] for i in keep),
        vacuum=remap[voa.vacuum],
        conformal=None if voa.conformal is None else remap[voa.conformal],
        central_charge=voa.central_charge,
        lower_bound=voa.lower_bound,
        max_weight=max_weight,
        n_min=voa.n_min,
        n_max=voa.n_max,
        products=prods,
    )


# -- Borcherds identity --------------------------------------------------------

@dataclass(frozen=True)
class BorcherdsResidual:
    k: int
    m: int
    n: int
    u: int
    v: int
    w: int
    residual: Vec


@dataclass
class BorcherdsReport:
    residuals: List[BorcherdsResidual]
    checked: int = 0
    skipped: int = 0
    trivial: int = 0


class _Missing(Exception):
    pass


class _ProductCache:
    """Fast left multiplication by basis elements with out-of-window flags."""

    def __init__(self, voa: VoaData):
        self.voa = voa

    def basis(self, n, i, j):
        voa = self.voa
        r = voa.weights[i] + voa.weights[j] - n - 1
        if r < -voa.lower_bound:
            return None
        if not (voa.n_min <= n <= voa.n_max) or r > voa.max_weight:
            raise _Missing
        return voa.products.get((n, i, j))

    def left(self, n, i, vec):
        out: Vec = {}
        for j, b in vec.items():
            p = self.basis(n, i, j)
            if p:
                axpy(out, b, p)
        return out

    def right(self, n, vec, j):
        out: Vec = {}
        for i, a in vec.items():
            p = self.basis(n, i, j)
            if p:
                axpy(out, a, p)
        return out


def borcherds_instance(voa: VoaData, k: int, m: int, n: int, u: int, v: int, w: int, cache=None) -> Optional[Vec]:
    """Left side minus right side of the Borcherds identity

        sum_i C(m,i) (u_(n+i)v)_(m+k-i) w
          = sum_i (-1)^i C(n,i) [u_(m+n-i)(v_(k+i)w) - (-1)^n v_(n+k-i)(u_(m+i)w)]

    or None when some needed product is out of window.
    """
    pc = cache or _ProductCache(voa)
    Wt = voa.weights
    lb = voa.lower_bound
    one_w = {w: ONE}
    try:
        res: Vec = {}
        top = Wt[u] + Wt[v] - n - 1 + lb
        for i in range(0, max(top, -1) + 1):
            c = binomial(m, i)
            if not c:
                continue
            x = pc.basis(n + i, u, v)
            if x:
                axpy(res, c, pc.right(m + k - i, x, w))
        sgn_n = -1 if n % 2 else 1
        top = Wt[v] + Wt[w] - k - 1 + lb
        for i in range(0, max(top, -1) + 1):
            c = (-1) ** i * binomial(n, i)
            if not c:
                continue
            y = pc.basis(k + i, v, w)
            if y:
                axpy(res, -c, pc.left(m + n - i, u, y))
        top = Wt[u] + Wt[w] - m - 1 + lb
        for i in range(0, max(top, -1) + 1):
            c = (-1) ** i * binomial(n, i)
            if not c:
                continue
            y = pc.basis(m + i, u, w)
            if y:
                axpy(res, c * sgn_n, pc.left(n + k - i, v, y))
    except _Missing:
        return None
    return res


def check_borcherds(
    voa: VoaData,
    bound: int = 3,
    k_range: Optional[Sequence[int]] = None,
    m_range: Optional[Sequence[int]] = None,
    n_range: Optional[Sequence[int]] = None,
    max_weight: Optional[int] = None,
    limit: Optional[int] = None,
) -> BorcherdsReport:
    """Check every identity instance in the box; out-of-window ones are skipped.

    ``max_weight`` limits the weights of u, v, w (default: all basis elements).
    Results are ordered lexicographically by (k, m, n, u, v, w).  With
    ``limit`` the scan stops once that many residuals have been found.
    """
    ks = list(k_range if k_range is not None else range(-bound, bound + 1))
    ms = list(m_range if m_range is not None else range(-bound, bound + 1))
    ns = list(n_range if n_range is not None else range(-bound, bound + 1))
    cap = voa.max_weight if max_weight is None else max_weight
    idx = [i for i in range(voa.dim) if voa.weights[i] <= cap]
    cache = _ProductCache(voa)
    report = BorcherdsReport(residuals=[])
    for k, m, n in cartesian(ks, ms, ns):
        for u, v, w in cartesian(idx, idx, idx):
            total = voa.weights[u] + voa.weights[v] + voa.weights[w] - m - n - k - 2
            if total < -voa.lower_bound:
                report.trivial += 1
                continue
            if total > voa.max_weight:
                report.skipped += 1
                continue
            res = borcherds_instance(voa, k, m, n, u, v, w, cache)
            if res is None:
                report.skipped += 1
                continue
            report.checked += 1
            if res:
                report.residuals.append(BorcherdsResidual(k, m, n, u, v, w, res))
                if limit is not None and len(report.residuals) >= limit:
                    return report
    return report


# -- axiom checks ---------------------------------------------------------------

@dataclass
class AxiomReport:
    failures: List[str]
    checks: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_axioms(voa: VoaData) -> AxiomReport:
    """Vacuum, Virasoro, L_0-grading and T-derivation checks in window."""
    rep = AxiomReport(failures=list(validate(voa)))
    S = voa.symbols
    om = voa.omega()
    vac = voa.vac()

    def attempt(label, fn):
        try:
            ok = fn()
        except OutOfWindow:
            rep.skipped += 1
            return
        rep.checks += 1
        if not ok:
            rep.failures.append(label)

    c = voa.central_charge
    attempt("omega_(1)omega != 2 omega", lambda: voa.product(1, om, om) == scaled(om, 2))
    attempt("omega_(3)omega != (c/2) vac", lambda: voa.product(3, om, om) == scaled(vac, c / 2))
    for n in [2] + list(range(4, voa.n_max + 1)):
        attempt(f"omega_({n})omega != 0", lambda n=n: not voa.product(n, om, om))
    if voa.conformal is None and c != 0:
        rep.failures.append("null conformal vector requires central charge 0")
    for i in range(voa.dim):
        u = {i: ONE}
        attempt(f"L_0 {S[i]} != {voa.weights[i]} {S[i]}", lambda u=u, i=i: voa.L(0, u) == scaled(u, voa.weights[i]))
    for i in range(voa.dim):
        for j in range(voa.dim):
            for n in range(voa.n_min, voa.n_max + 1):
                if not voa.in_window(n, i, j) or voa.product_weight(n, i, j) + 1 > voa.max_weight:
                    continue
                u, v = {i: ONE}, {j: ONE}

                def deriv(n=n, u=u, v=v):
                    lhs = voa.T(voa.product(n, u, v))
                    rhs = axpy(voa.product(n, voa.T(u), v), ONE, voa.product(n, u, voa.T(v)))
                    return lhs == rhs

                attempt(f"T({S[i]}_({n}){S[j]}) is not a derivation", deriv)
    return rep
