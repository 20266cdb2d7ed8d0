"""Zhu's Poisson algebra p = V / C_2(V) and direct Poisson-algebra inputs.

For a truncated VOA, p is computed weight by weight as
V[r] / span{u_(n) v : n <= -2}, with x.y = u_(-1) v and {x, y} = u_(0) v.
Tables are only filled where the product weight fits the window, so a
truncated quotient is marked ``complete = False``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import OutOfWindow, ParseError
from .linalg import ONE, RowReducer, Vec, axpy, clean, format_rational
from .voa import VoaData, _require, parse_sparse, read_document


@dataclass
class PoissonAlgebraData:
    name: str
    symbols: Tuple[str, ...]
    weights: Tuple[int, ...]
    unit: int
    mult: Dict[Tuple[int, int], Vec]
    bracket: Dict[Tuple[int, int], Vec]
    complete: bool
    profile: Dict[int, int] = field(default_factory=dict)
    c2_finite_in_window: Optional[bool] = None
    trailing_zeros: int = 0

    @property
    def dim(self) -> int:
        return len(self.symbols)

    @property
    def r(self) -> int:
        return self.dim - 1

    def non_unit(self) -> List[int]:
        return [i for i in range(self.dim) if i != self.unit]

    def _bilinear(self, table, x: Mapping, y: Mapping) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                if (i, j) not in table:
                    if self.complete:
                        continue
                    raise KeyError((i, j))
                axpy(out, a * b, table[(i, j)])
        return clean(out)

    def multiply(self, x: Mapping, y: Mapping) -> Vec:
        return self._bilinear(self.mult, x, y)

    def poisson_bracket(self, x: Mapping, y: Mapping) -> Vec:
        return self._bilinear(self.bracket, x, y)

    def weight_of(self, x: Mapping) -> Optional[int]:
        ws = {self.weights[i] for i in x}
        return ws.pop() if len(ws) == 1 else None

    def to_document(self) -> dict:
        S = self.symbols

        def rows(table):
            out = []
            for (i, j), v in sorted(table.items()):
                if v:
                    out.append({"left": S[i], "right": S[j],
                                "value": sorted([S[k], format_rational(c)] for k, c in v.items())})
            return out

        doc = {
            "name": self.name,
            "basis": [{"symbol": s, "weight": w} for s, w in zip(S, self.weights)],
            "unit": S[self.unit],
            "complete": self.complete,
            "mult": rows(self.mult),
            "bracket": rows(self.bracket),
        }
        if self.profile:
            doc["profile"] = [[r, d] for r, d in sorted(self.profile.items())]
            doc["c2_finite_in_window"] = self.c2_finite_in_window
        return doc


def load_poisson(source) -> PoissonAlgebraData:
    doc = read_document(source)
    name = _require(doc, "name", str)
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
    unit = _require(doc, "unit", str)
    if unit not in index:
        raise ParseError(f"unit {unit!r} is not a basis symbol")
    complete = _require(doc, "complete", bool)

    def table(key):
        out = {}
        for k, row in enumerate(_require(doc, key, list)):
            if not isinstance(row, dict):
                raise ParseError(f"{key}[{k}] must be an object")
            left, right = _require(row, "left", str), _require(row, "right", str)
            where = f"{key}[{k}] {left},{right}"
            if left not in index or right not in index:
                raise ParseError(f"{where}: unknown symbol")
            pair = (index[left], index[right])
            if pair in out:
                raise ParseError(f"{where}: duplicate entry")
            out[pair] = parse_sparse(_require(row, "value", list), index, where)
        return out

    mult, bracket = table("mult"), table("bracket")
    if complete:
        for i in range(len(symbols)):
            for j in range(len(symbols)):
                mult.setdefault((i, j), {})
                bracket.setdefault((i, j), {})
    return PoissonAlgebraData(name, tuple(symbols), tuple(weights), index[unit], mult, bracket, complete)


def c2_quotient(voa: VoaData, max_weight: Optional[int] = None) -> PoissonAlgebraData:
    """V / C_2(V) through the window, with the induced tables."""
    W = voa.max_weight if max_weight is None else max_weight
    reducers: Dict[int, RowReducer] = {}
    for r in range(W + 1):
        red = RowReducer(priority=lambda i: i)
        for u in range(voa.dim):
            for v in range(voa.dim):
                n = voa.weights[u] + voa.weights[v] - r - 1
                if n > -2:
                    continue
                if not voa.in_window(n, u, v):
                    raise OutOfWindow(f"C_2 generator {voa.symbols[u]}_({n}){voa.symbols[v]} is not stored",
                                      location=(n, voa.symbols[u], voa.symbols[v]))
                red.add(voa.basis_product(n, u, v))
        reducers[r] = red
    keep = [i for i in range(voa.dim) if voa.weights[i] <= W and i not in reducers[voa.weights[i]].pivots]
    pos = {i: k for k, i in enumerate(keep)}

    def cls(vec: Mapping) -> Vec:
        out: Vec = {}
        for r in sorted({voa.weights[i] for i in vec}):
            part = {i: c for i, c in vec.items() if voa.weights[i] == r}
            for i, c in reducers[r].reduce(part).items():
                out[pos[i]] = c
        return out

    mult: Dict[Tuple[int, int], Vec] = {}
    bracket: Dict[Tuple[int, int], Vec] = {}
    for a, u in enumerate(keep):
        for b, v in enumerate(keep):
            if voa.weights[u] + voa.weights[v] <= W and voa.in_window(-1, u, v):
                mult[(a, b)] = cls(voa.basis_product(-1, u, v))
            if voa.weights[u] + voa.weights[v] - 1 <= W and voa.in_window(0, u, v):
                bracket[(a, b)] = cls(voa.basis_product(0, u, v))
    profile = {r: sum(1 for i in keep if voa.weights[i] == r) for r in range(W + 1)}
    trailing = 0
    for r in range(W, -1, -1):
        if profile[r]:
            break
        trailing += 1
    return PoissonAlgebraData(
        name=f"zhu({voa.name})",
        symbols=tuple(voa.symbols[i] for i in keep),
        weights=tuple(voa.weights[i] for i in keep),
        unit=pos[voa.vacuum],
        mult=mult,
        bracket=bracket,
        complete=False,
        profile=profile,
        c2_finite_in_window=trailing > 0,
        trailing_zeros=trailing,
    )


def c2_class_of(voa: VoaData, p: PoissonAlgebraData, vec: Mapping) -> Vec:
    """Class in p of a homogeneous vector of V (recomputed from the window)."""
    sym_pos = {s: k for k, s in enumerate(p.symbols)}
    out: Vec = {}
    for r in sorted({voa.weights[i] for i in vec}):
        red = RowReducer(priority=lambda i: i)
        for u in range(voa.dim):
            for v in range(voa.dim):
                n = voa.weights[u] + voa.weights[v] - r - 1
                if n <= -2 and voa.in_window(n, u, v):
                    red.add(voa.basis_product(n, u, v))
        part = {i: c for i, c in vec.items() if voa.weights[i] == r}
        for i, c in red.reduce(part).items():
            out[sym_pos[voa.symbols[i]]] = c
    return out


@dataclass
class PoissonReport:
    failures: List[Tuple[str, str]]
    checked: int
    skipped: int

    @property
    def ok(self) -> bool:
        return not self.failures


def poisson_check(p: PoissonAlgebraData, sample: Optional[Sequence[Tuple[int, int, int]]] = None) -> PoissonReport:
    """Commutativity, associativity, skew-symmetry, Jacobi, Leibniz, unit and
    grading, exhaustively on all basis triples unless a sample is given."""
    S = p.symbols
    fails: List[Tuple[str, str]] = []
    checked = skipped = 0
    e = [{i: ONE} for i in range(p.dim)]
    if sample is None:
        sample = list(itertools.product(range(p.dim), repeat=3))
    pairs = sorted({(x, y) for x, y, _ in sample})

    def law(name, witness, fn):
        nonlocal checked, skipped
        try:
            ok = fn()
        except KeyError:
            skipped += 1
            return
        checked += 1
        if not ok:
            fails.append((name, witness))

    for x, y in pairs:
        w = f"({S[x]}, {S[y]})"
        law("commutativity", w, lambda: p.multiply(e[x], e[y]) == p.multiply(e[y], e[x]))
        law("skew-symmetry", w, lambda: p.poisson_bracket(e[x], e[y]) == clean({k: -c for k, c in p.poisson_bracket(e[y], e[x]).items()}))

        def grading_mult():
            v = p.multiply(e[x], e[y])
            return all(p.weights[k] == p.weights[x] + p.weights[y] for k in v)

        def grading_bracket():
            v = p.poisson_bracket(e[x], e[y])
            return all(p.weights[k] == p.weights[x] + p.weights[y] - 1 for k in v)

        law("grading of product", w, grading_mult)
        law("grading of bracket", w, grading_bracket)
    for x in range(p.dim):
        law("unit", S[x], lambda: p.multiply(e[p.unit], e[x]) == e[x])
    for x, y, z in sample:
        w = f"({S[x]}, {S[y]}, {S[z]})"

        def assoc():
            return p.multiply(p.multiply(e[x], e[y]), e[z]) == p.multiply(e[x], p.multiply(e[y], e[z]))

        def jacobi():
            B = p.poisson_bracket
            tot: Vec = {}
            axpy(tot, ONE, B(e[x], B(e[y], e[z])))
            axpy(tot, ONE, B(e[y], B(e[z], e[x])))
            axpy(tot, ONE, B(e[z], B(e[x], e[y])))
            return not clean(tot)

        def leibniz():
            lhs = p.poisson_bracket(p.multiply(e[x], e[y]), e[z])
            rhs = p.multiply(e[x], p.poisson_bracket(e[y], e[z]))
            axpy(rhs, ONE, p.multiply(e[y], p.poisson_bracket(e[x], e[z])))
            return lhs == clean(rhs)

        law("associativity", w, assoc)
        law("Jacobi", w, jacobi)
        law("Leibniz", w, leibniz)
    return PoissonReport(fails, checked, skipped)
