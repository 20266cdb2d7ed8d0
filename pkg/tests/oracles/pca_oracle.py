"""Independent checks for the Poisson current algebra code.

Nothing here imports quasifinite.  Poisson algebras are plain dicts
{(i, j): {k: Fraction}} read straight from the fixture JSON.
"""

import itertools
import json
from fractions import Fraction


def read_poisson(path):
    doc = json.loads(open(path, encoding="utf-8").read())
    symbols = [b["symbol"] for b in doc["basis"]]
    index = {s: i for i, s in enumerate(symbols)}

    def table(rows):
        out = {}
        for row in rows:
            out[(index[row["left"]], index[row["right"]])] = {index[s]: Fraction(c) for s, c in row["value"]}
        return out

    return {"symbols": symbols, "unit": index[doc["unit"]], "mult": table(doc["mult"]),
            "bracket": table(doc["bracket"])}


# -- index sets ------------------------------------------------------------------


def brute_indices(k, d, n, strict=True):
    """All k-tuples from the box [-n, d + (k-1) n]^k that are sorted and sum to d."""
    if k == 0:
        return [()] if d == 0 else []
    box = range(-n, d + (k - 1) * n + 1)
    out = []
    for seq in itertools.product(box, repeat=k):
        if sum(seq) != d:
            continue
        pairs = list(zip(seq, seq[1:]))
        if all(a > b for a, b in pairs) if strict else all(a >= b for a, b in pairs):
            out.append(seq)
    return sorted(out)


def distinct_partitions(total, k):
    """Partitions of total into exactly k distinct positive parts, by the
    recursion q(t, k) = q(t - k, k) + q(t - k, k - 1)."""
    table = {(0, 0): 1}

    def q(t, j):
        if t < 0 or j < 0:
            return 0
        if (t, j) not in table:
            table[(t, j)] = 0 if j == 0 else q(t - j, j) + q(t - j, j - 1)
        return table[(t, j)]

    return q(total, k)


def brute_bound(r, n, d):
    """sum_k r^k |strict index sequences|, with Q_n(d) = 0 below degree -n.

    Shifting every part by n + 1 turns a strict sequence of k parts >= -n
    summing to d into a partition of d + k (n + 1) into k distinct parts."""
    if d <= -n - 1:
        return 0
    # k distinct parts >= -n sum to at least k (k - 1) / 2 - k n, so k <= 2 (n + |d|) + 1
    return sum(r ** k * distinct_partitions(d + k * (n + 1), k) for k in range(2 * (n + abs(d)) + 2))


# -- one rewriting step, written out by hand ----------------------------------------


def square_of_nilpotent(d, n, x):
    """[d](x)[d](x) with x.x = 0, as {((a, x), (b, x)): c} with a > b, parts >= -n."""
    out = {}
    for j in range(1, d + n + 1):
        key = ((d + j, x), (d - j, x))
        out[key] = out.get(key, 0) - 2
    return out


# -- the ideal identity on a finite index window --------------------------------------


def _vec_bracket(P, X, Y):
    out = {}
    for i, a in X.items():
        for j, b in Y.items():
            for k, c in P["bracket"].get((i, j), {}).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def _vec_mult(P, X, Y):
    out = {}
    for i, a in X.items():
        for j, b in Y.items():
            for k, c in P["mult"].get((i, j), {}).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def _mono(P, factors):
    """Commutative monomial from [(subscript, element)]; None when a Psi_a(1), a != 0, occurs."""
    keep = []
    for a, e in factors:
        if e == P["unit"]:
            if a != 0:
                return None
            continue
        keep.append((a, e))
    return tuple(sorted(keep))


def _add(acc, c, mono):
    if mono is not None and c:
        acc[mono] = acc.get(mono, 0) + c


def _D(P, m, X, Y, J):
    """Psi_m(X.Y) - sum_{|j| <= J} Psi_{m-j}(X) Psi_j(Y), expanded on the basis."""
    out = {}
    for e, c in _vec_mult(P, X, Y).items():
        _add(out, c, _mono(P, [(m, e)]))
    for j in range(-J, J + 1):
        for a, ca in X.items():
            for b, cb in Y.items():
                _add(out, -ca * cb, _mono(P, [(m - j, a), (j, b)]))
    return out


def _bracket_poly(P, poly, n, z):
    """{poly, Psi_n(z)} by the Leibniz rule on each factor."""
    out = {}
    for mono, c in poly.items():
        for pos, (a, e) in enumerate(mono):
            rest = list(mono[:pos] + mono[pos + 1:])
            for f, cf in _vec_bracket(P, {e: 1}, {z: 1}).items():
                _add(out, c * cf, _mono(P, rest + [(a + n, f)]))
    return out


def ideal_identity_defect(P, x, y, z, m, n, J=12):
    """Coefficients where {D_m(x,y), Psi_n(z)} and D_{m+n}(x,{y,z}) + D_{m+n}(y,{x,z})
    disagree, restricted to monomials whose subscripts are far from the window edge."""
    lhs = _bracket_poly(P, _D(P, m, {x: 1}, {y: 1}, J), n, z)
    rhs = {}
    for mono, c in _D(P, m + n, {x: 1}, _vec_bracket(P, {y: 1}, {z: 1}), J).items():
        _add(rhs, c, mono)
    for mono, c in _D(P, m + n, {y: 1}, _vec_bracket(P, {x: 1}, {z: 1}), J).items():
        _add(rhs, c, mono)
    safe = J - abs(m) - abs(n) - 1
    bad = []
    for mono in set(lhs) | set(rhs):
        if any(abs(a) > safe for a, _ in mono):
            continue
        if lhs.get(mono, 0) != rhs.get(mono, 0):
            bad.append(mono)
    return sorted(bad)
