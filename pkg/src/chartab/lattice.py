"""Exact lattice reduction over the character inner product.

Characters are vectors in the lattice of virtual characters, where the
scalar product is integral.  Everything here works on integer coefficient
rows against a fixed Gram matrix, so no cyclotomic arithmetic happens in
the inner loops and all results are exact.
"""

from __future__ import annotations

from fractions import Fraction

from .classfun import Reduction, scalar_product


def hermite_row_reduce(A):
    """Row Hermite normal form with a unimodular transform.

    Returns (H, T) with T * A = H, H in upper echelon shape with positive
    pivots and entries above each pivot reduced into [0, pivot).  Pivot
    choice is canonical: smallest nonzero absolute value, then lowest row
    index, so identical inputs give identical transforms.
    """
    H = [list(map(int, row)) for row in A]
    m = len(H)
    n = len(H[0]) if m else 0
    T = [[int(i == j) for j in range(m)] for i in range(m)]
    top = 0
    for col in range(n):
        while True:
            live = [i for i in range(top, m) if H[i][col]]
            if not live:
                break
            piv = min(live, key=lambda i: (abs(H[i][col]), i))
            for i in live:
                if i == piv:
                    continue
                q = H[i][col] // H[piv][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[piv])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[piv])]
            if all(H[i][col] == 0 for i in range(top, m) if i != piv):
                if piv != top:
                    H[piv], H[top] = H[top], H[piv]
                    T[piv], T[top] = T[top], T[piv]
                break
        if top < m and H[top][col]:
            if H[top][col] < 0:
                H[top] = [-a for a in H[top]]
                T[top] = [-a for a in T[top]]
            for i in range(top):
                q = H[i][col] // H[top][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[top])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[top])]
            top += 1
    return H, T


def _gram(t, chars):
    m = len(chars)
    G = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1):
            s = scalar_product(t, chars[i], chars[j])
            if s.denominator != 1:
                raise ValueError(
                    f"scalar product of characters {i + 1} and {j + 1} "
                    f"is not integral: {s}"
                )
            G[i][j] = G[j][i] = int(s)
    return G


def _independent_rows(G0):
    """Integer coefficient rows forming a basis of the input span.

    Zero rows of the Hermite form of the Gram matrix correspond to exact
    linear dependencies (the form is positive definite on class functions),
    so the matching transform rows are dropped.
    """
    H, T = hermite_row_reduce(G0)
    return [T[k] for k in range(len(H)) if any(H[k])]


def _lll_coefficient_rows(U, G0, delta=Fraction(3, 4)):
    """Textbook LLL on rows of U under the form G0, all arithmetic exact.

    U rows must be linearly independent.  Returns the reduced rows.  The
    current Gram matrix is maintained under the row operations, so inner
    products are table lookups.
    """
    n = len(U)
    if n <= 1:
        return [list(r) for r in U]
    U = [list(r) for r in U]
    m = len(G0)
    W = [[sum(G0[a][b] * U[j][b] for b in range(m)) for j in range(n)] for a in range(m)]
    G = [[sum(U[i][a] * W[a][j] for a in range(m)) for j in range(n)] for i in range(n)]

    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n

    def gs_line(k):
        # c[j] = <b_k, b*_j>; also sets mu[k][:k] and B[k]
        c = [Fraction(0)] * k
        for j in range(k):
            u = Fraction(G[k][j])
            for i in range(j):
                u -= mu[j][i] * c[i]
            c[j] = u
            mu[k][j] = u / B[j]
        B[k] = Fraction(G[k][k]) - sum(mu[k][j] * c[j] for j in range(k))

    def red(k, l):
        q = round(mu[k][l])
        if q == 0:
            return
        old_kl = G[k][l]
        old_ll = G[l][l]
        for j in range(n):
            if j != k:
                G[k][j] -= q * G[l][j]
                G[j][k] = G[k][j]
        G[k][k] = G[k][k] - 2 * q * old_kl + q * q * old_ll
        U[k] = [a - q * b for a, b in zip(U[k], U[l])]
        mu[k][l] -= q
        for i in range(l):
            mu[k][i] -= q * mu[l][i]

    def swap(k, kmax):
        U[k], U[k - 1] = U[k - 1], U[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
        m = mu[k][k - 1]
        b = B[k] + m * m * B[k - 1]
        mu[k][k - 1] = m * B[k - 1] / b
        B[k] = B[k - 1] * B[k] / b
        B[k - 1] = b
        for i in range(k + 1, kmax + 1):
            s = mu[i][k]
            mu[i][k] = mu[i][k - 1] - m * s
            mu[i][k - 1] = s + mu[k][k - 1] * mu[i][k]

    B[0] = Fraction(G[0][0])
    kmax = 0
    k = 1
    while k < n:
        if k > kmax:
            kmax = k
            gs_line(k)
        red(k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            swap(k, kmax)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return U


def lll_reduce(t, chars, delta=Fraction(3, 4)) -> Reduction:
    """LLL basis reduction of the lattice spanned by the given characters.

    Norm-1 vectors of the reduced basis are irreducibles (sign-normalized
    to positive degree), everything else comes back as remainders.  The
    spanned lattice is preserved.
    """
    chars = [c for c in chars if not c.is_zero()]
    if not chars:
        return Reduction([], [])
    G0 = _gram(t, chars)
    U = _independent_rows(G0)
    U = _lll_coefficient_rows(U, G0, delta)

    def materialize(row):
        acc = None
        for c, chi in zip(row, chars):
            if not c:
                continue
            term = chi * c
            acc = term if acc is None else acc + term
        return acc

    irreducibles = []
    remainders = []
    for row in U:
        chi = materialize(row)
        if chi is None:
            continue
        if scalar_product(t, chi, chi) == 1:
            if chi.degree.int_value() < 0:
                chi = -chi
            irreducibles.append(chi)
        else:
            remainders.append(chi)
    return Reduction(irreducibles, remainders)


def integral_membership(t, basis, target):
    """Integer coefficients writing target over basis, or None.

    Works in the coordinate frame of scalar products against the basis
    vectors and the target itself: rows of that integer matrix span the
    same lattice as the basis, and membership falls out of the Hermite
    form with transforms.  A found combination is verified value-wise.
    """
    basis = list(basis)
    if not basis:
        return None
    frame = basis + [target]

    def coords(v):
        row = []
        for f in frame:
            s = scalar_product(t, v, f)
            if s.denominator != 1:
                raise ValueError("non-integral scalar product in membership test")
            row.append(int(s))
        return row

    S = [coords(v) for v in basis]
    srow = coords(target)
    H, T = hermite_row_reduce(S)
    y = [0] * len(basis)
    rem = list(srow)
    for k in range(len(H)):
        if not any(H[k]):
            continue
        lead = next(j for j in range(len(rem)) if H[k][j])
        q, r = divmod(rem[lead], H[k][lead])
        if r:
            return None
        y[k] = q
        rem = [a - q * b for a, b in zip(rem, H[k])]
    if any(rem):
        return None
    coeffs = [0] * len(basis)
    for k in range(len(basis)):
        if y[k]:
            for j in range(len(basis)):
                coeffs[j] += y[k] * T[k][j]
    check = None
    for c, v in zip(coeffs, basis):
        if c:
            term = v * c
            check = term if check is None else check + term
    if check is None:
        check = t.class_function([0] * t.nclasses)
    if not (check - target).is_zero():
        return None
    return coeffs
