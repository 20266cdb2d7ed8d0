"""Level dimensions of the two Lee-Yang irreducibles, from their product
characters, and the quotient dimensions they predict.

The vacuum module has character prod 1/(1-q^k) over k = 2, 3 mod 5; the
module of lowest weight -1/5 uses k = 1, 4 mod 5.  For a rational VOA the
quotient Q_n(d) decomposes as sum over irreducibles M and levels j <= n of
Hom(M_j, M_{j+d}).
"""


def product_series(residues, top):
    coeffs = [1] + [0] * top
    for k in range(1, top + 1):
        if k % 5 not in residues:
            continue
        # multiply by 1 / (1 - q^k)
        for i in range(k, top + 1):
            coeffs[i] += coeffs[i - k]
    return coeffs


def level_dims(top=20):
    return {"0": product_series({2, 3}, top), "-1/5": product_series({1, 4}, top)}


def predicted_quotient_dim(n, d, top=20):
    total = 0
    for dims in level_dims(top).values():
        for j in range(0, n + 1):
            if 0 <= j + d <= top:
                total += dims[j] * dims[j + d]
    return total
