"""Independent generators for VOA structure-constant fixtures.

Nothing here imports quasifinite.  States live in explicit Fock / Verma
spaces (dicts from PBW monomials to Fractions) and the n-th products of
composite states come from iterating the standard formula

    (g_(p) w)_(k) x = sum_i (-1)^i C(p,i) [ g_(p-i) w_(k+i) x
                                            - (-1)^p w_(p+k-i) g_(i) x ]

starting from the generating field's modes.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb

import sympy


def gbinom(top, i):
    if i < 0:
        return 0
    if top >= 0:
        return comb(top, i) if i <= top else 0
    return (-1) ** i * comb(-top + i - 1, i)


def add_into(acc, coeff, vec):
    for k, x in vec.items():
        y = acc.get(k, 0) + coeff * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def partitions(total, min_part, max_part=None):
    """Partitions of ``total`` into parts >= min_part, as descending tuples."""
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, max_part), min_part - 1, -1):
        for rest in partitions(total - first, min_part, first):
            yield (first,) + rest


class ModeOracle:
    """Vertex operators of a VOA strongly generated by a single field g."""

    gen_weight = None

    def gen_mode(self, i, mono):
        """g_(i) applied to one PBW monomial; returns a vector."""
        raise NotImplementedError

    def split(self, mono):
        """(p, rest) with mono = g_(p) rest, or None for the vacuum."""
        raise NotImplementedError

    def weight(self, mono):
        raise NotImplementedError

    def gen_mode_vec(self, i, vec):
        out = {}
        for m, c in vec.items():
            add_into(out, c, self.gen_mode(i, m))
        return out

    def mode_vec(self, mono, k, vec):
        out = {}
        for x, c in vec.items():
            add_into(out, c, self.mode(mono, k, x))
        return out

    @lru_cache(maxsize=None)
    def _mode(self, mono, k, x):
        s = self.split(mono)
        if s is None:
            return {x: Fraction(1)} if k == -1 else {}
        p, w = s
        wx = self.weight(x)
        ww = self.weight(w)
        out = {}
        top1 = ww + wx - k - 1
        for i in range(0, max(top1, -1) + 1):
            c = (-1) ** i * gbinom(p, i)
            if c:
                inner = self.mode(w, k + i, x)
                add_into(out, c, self.gen_mode_vec(p - i, inner))
        top2 = self.gen_weight + wx - 1
        sign = -1 if p % 2 == 0 else 1  # -(-1)^p
        for i in range(0, max(top2, -1) + 1):
            c = (-1) ** i * gbinom(p, i)
            if c:
                inner = self.gen_mode(i, x)
                add_into(out, sign * c, self.mode_vec(w, p + k - i, inner))
        return out

    def mode(self, mono, k, x):
        if self.weight(mono) + self.weight(x) - k - 1 < 0:
            return {}
        return self._mode(mono, k, x)


class FreeBoson(ModeOracle):
    """Heisenberg VOA; monomials are descending tuples of n for a_{-n}."""

    gen_weight = 1

    def weight(self, mono):
        return sum(mono)

    def split(self, mono):
        if not mono:
            return None
        return (-mono[0], mono[1:])

    def gen_mode(self, i, mono):
        if i < 0:
            return {tuple(sorted(mono + (-i,), reverse=True)): Fraction(1)}
        if i == 0:
            return {}
        cnt = mono.count(i)
        if not cnt:
            return {}
        rest = list(mono)
        rest.remove(i)
        return {tuple(rest): Fraction(i * cnt)}

    def basis(self, r):
        return list(partitions(r, 1))


class VirasoroVacuum(ModeOracle):
    """Universal Virasoro VOA; monomials are descending tuples of n >= 2
    for L_{-n1} ... L_{-nk} vac."""

    gen_weight = 2

    def __init__(self, c):
        self.c = Fraction(c)

    def weight(self, mono):
        return sum(mono)

    def split(self, mono):
        if not mono:
            return None
        return (1 - mono[0], mono[1:])

    def gen_mode(self, i, mono):
        return self.L(i - 1, mono)

    @lru_cache(maxsize=None)
    def L(self, m, mono):
        """L_m on a PBW monomial, normal-ordered result."""
        if not mono:
            if m >= -1:
                return {}
            return {(-m,): Fraction(1)}
        n1, rest = mono[0], mono[1:]
        if m <= -2 and -m >= n1:
            return {(-m,) + mono: Fraction(1)}
        out = {}
        # L_m L_{-n1} rest = L_{-n1} L_m rest + [L_m, L_{-n1}] rest
        for mm, c in self.L(m, rest).items():
            add_into(out, c, self.L(-n1, mm))
        if m + n1:
            add_into(out, Fraction(m + n1), self.L(m - n1, rest))
        if m == n1:
            central = self.c / 12 * (m ** 3 - m)
            if central:
                add_into(out, central, {rest: Fraction(1)})
        return out

    def basis(self, r):
        return list(partitions(r, 2))

    def pairing(self, left, vec):
        """Shapovalov pairing <left vac-monomial, vec>."""
        cur = dict(vec)
        for n in left:  # apply L_{n1} first ... L_{nk} last: adjoint reverses order
            nxt = {}
            for mono, c in cur.items():
                add_into(nxt, c, self.L(n, mono))
            cur = nxt
        return cur.get((), Fraction(0))


# -- fixture assembly -----------------------------------------------------

def fmt(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def heisenberg_document(W):
    fb = FreeBoson()
    basis, weight_of = [], {}
    for r in range(W + 1):
        for mono in fb.basis(r):
            basis.append(mono)
            weight_of[mono] = r

    def sym(mono):
        if mono == ():
            return "vac"
        if mono == (1, 1):
            return "w"
        return "".join(f"a{n}" for n in mono)

    # coordinates: PBW monomials, except a1a1 = 2 w
    def to_symbols(vec):
        out = []
        for mono, c in sorted(vec.items()):
            if mono == (1, 1):
                out.append(["w", fmt(2 * c)])
            else:
                out.append([sym(mono), fmt(c)])
        return sorted(out)

    def state(s):
        # w = (1/2) a1a1
        if s == (1, 1):
            return {(1, 1): Fraction(1, 2)}
        return {s: Fraction(1)}

    products = []
    for u in basis:
        for v in basis:
            du, dv = weight_of[u], weight_of[v]
            for n in range(du + dv - W - 1, du + dv):
                out = {}
                uu = state(u)
                vv = state(v)
                for um, uc in uu.items():
                    for vm, vc in vv.items():
                        add_into(out, uc * vc, fb.mode(um, n, vm))
                if out:
                    products.append({"n": n, "left": sym(u), "right": sym(v), "value": to_symbols(out)})
    return {
        "name": f"heisenberg_W{W}",
        "lower_bound_m": 0,
        "central_charge": "1/1",
        "basis": [{"symbol": sym(m), "weight": weight_of[m]} for m in basis],
        "vacuum": "vac",
        "conformal": "w",
        "window": {"max_weight": W, "n_min": -W - 1, "n_max": 2 * W},
        "products": sorted(products, key=lambda p: (p["left"], p["right"], p["n"])),
    }


def virasoro_irreducible_document(c, W, name):
    """Vacuum Virasoro VOA modulo the radical of the Shapovalov form."""
    vir = VirasoroVacuum(c)
    kept, weight_of, proj = [], {}, {}
    for r in range(W + 1):
        if r == 1:
            continue
        monos = sorted(vir.basis(r), reverse=True)
        gram = sympy.Matrix([[sympy.Rational(vir.pairing(a, {b: Fraction(1)})) for b in monos] for a in monos])
        _, pivots = gram.rref()
        keep = [monos[j] for j in pivots]
        kept.extend(keep)
        for m in keep:
            weight_of[m] = r
        proj[r] = (monos, keep, gram[:, list(pivots)])

    def project(vec):
        by_weight = {}
        for mono, c in vec.items():
            by_weight.setdefault(sum(mono), {})[mono] = c
        out = {}
        for r, part in by_weight.items():
            if r > W or r not in proj:
                raise ValueError("projection outside window")
            monos, keep, gsub = proj[r]
            rhs = sympy.Matrix([sympy.Rational(vir.pairing(a, part)) for a in monos])
            sol, _ = gsub.gauss_jordan_solve(rhs)
            for m, x in zip(keep, sol):
                if x != 0:
                    out[m] = Fraction(int(x.p), int(x.q))
        return out

    def sym(mono):
        if mono == ():
            return "vac"
        if mono == (2,):
            return "w"
        return "".join(f"L{n}" for n in mono)

    products = []
    for u in kept:
        for v in kept:
            du, dv = weight_of[u], weight_of[v]
            for n in range(du + dv - W - 1, du + dv):
                out = project(vir.mode(u, n, v))
                if out:
                    products.append({
                        "n": n, "left": sym(u), "right": sym(v),
                        "value": sorted([sym(m), fmt(x)] for m, x in out.items()),
                    })
    return {
        "name": name,
        "lower_bound_m": 0,
        "central_charge": fmt(c),
        "basis": [{"symbol": sym(m), "weight": weight_of[m]} for m in kept],
        "vacuum": "vac",
        "conformal": "w",
        "window": {"max_weight": W, "n_min": -W - 1, "n_max": 2 * W},
        "products": sorted(products, key=lambda p: (p["left"], p["right"], p["n"])),
    }


def trivial_document(W=4):
    return {
        "name": "trivial",
        "lower_bound_m": 0,
        "central_charge": "0/1",
        "basis": [{"symbol": "vac", "weight": 0}],
        "vacuum": "vac",
        "conformal": None,
        "window": {"max_weight": W, "n_min": -W - 1, "n_max": 2 * W},
        "products": [{"n": -1, "left": "vac", "right": "vac", "value": [["vac", "1/1"]]}],
    }
