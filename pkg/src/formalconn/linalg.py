"""Dense exact linear algebra and univariate polynomial helpers.

Matrices are lists of lists of tower representations (see scalars.py);
polynomials are dense ascending coefficient lists.  Everything is plain
Gaussian elimination / Faddeev-LeVerrier over a field of characteristic
zero: sizes here top out around 30, so asymptotics are irrelevant and
exactness is everything.
"""

from __future__ import annotations

from fractions import Fraction


def identity(tower, n):
    z, o = tower.zero(), tower.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zero_matrix(tower, n, m=None):
    z = tower.zero()
    return [[z] * (m if m is not None else n) for _ in range(n)]


def mat_add(tower, a, b):
    return [
        [tower.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)
    ]


def mat_sub(tower, a, b):
    return [
        [tower.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)
    ]


def mat_neg(tower, a):
    return [[tower.neg(x) for x in row] for row in a]


def mat_scale(tower, a, c):
    return [[tower.mul(x, c) for x in row] for row in a]


def mat_mul(tower, a, b):
    n, k, m = len(a), len(b), len(b[0])
    z = tower.zero()
    out = [[z] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for p in range(k):
            x = ai[p]
            if tower.is_zero(x):
                continue
            bp = b[p]
            for j in range(m):
                y = bp[j]
                if not tower.is_zero(y):
                    oi[j] = tower.add(oi[j], tower.mul(x, y))
    return out


def mat_vec(tower, a, v):
    out = []
    for row in a:
        acc = tower.zero()
        for x, y in zip(row, v):
            if not (tower.is_zero(x) or tower.is_zero(y)):
                acc = tower.add(acc, tower.mul(x, y))
        out.append(acc)
    return out


def trace(tower, a):
    acc = tower.zero()
    for i in range(len(a)):
        acc = tower.add(acc, a[i][i])
    return acc


def mat_eq(tower, a, b):
    return all(
        tower.eq(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def is_zero_matrix(tower, a):
    return all(tower.is_zero(x) for row in a for x in row)


def rref(tower, mat):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [list(row) for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if not tower.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = tower.inv(m[r][c])
        m[r] = [tower.mul(x, inv) for x in m[r]]
        for i in range(rows):
            if i != r and not tower.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [
                    tower.sub(x, tower.mul(f, y)) for x, y in zip(m[i], m[r])
                ]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(tower, mat):
    if not mat:
        return 0
    return len(rref(tower, mat)[1])


def kernel_basis(tower, mat):
    """Basis of the right kernel, one vector per free column."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    red, pivots = rref(tower, mat)
    free = [c for c in range(cols) if c not in pivots]
    z, o = tower.zero(), tower.one()
    basis = []
    for fc in free:
        v = [z] * cols
        v[fc] = o
        for r, pc in enumerate(pivots):
            v[pc] = tower.neg(red[r][fc])
        basis.append(v)
    return basis


def solve(tower, mat, rhs):
    """One solution of mat @ x = rhs, or None if inconsistent.

    rhs may be a vector or a matrix (solved column by column).
    """
    vector = not isinstance(rhs[0], list)
    cols_rhs = 1 if vector else len(rhs[0])
    aug = []
    for i, row in enumerate(mat):
        extra = [rhs[i]] if vector else list(rhs[i])
        aug.append(list(row) + extra)
    red, pivots = rref(tower, aug)
    n = len(mat[0])
    for r, pc in enumerate(pivots):
        if pc >= n:
            return None  # pivot in the rhs block: inconsistent
    z = tower.zero()
    out = [[z] * cols_rhs for _ in range(n)]
    for r, pc in enumerate(pivots):
        for j in range(cols_rhs):
            out[pc][j] = red[r][n + j]
    if vector:
        return [row[0] for row in out]
    return out


def inverse(tower, mat):
    n = len(mat)
    sol = solve(tower, mat, identity(tower, n))
    if sol is None:
        raise ZeroDivisionError("matrix is singular")
    # solve() returns one solution; for square full-rank systems it is the inverse
    if rank(tower, mat) != n:
        raise ZeroDivisionError("matrix is singular")
    return sol


def charpoly(tower, a):
    """Monic characteristic polynomial, ascending coefficients.

    Faddeev-LeVerrier: only divisions by 1..n occur, exact over any
    field of characteristic zero.
    """
    n = len(a)
    coeffs_desc = [tower.one()]  # X^n
    m = None
    for k in range(1, n + 1):
        if m is None:
            m = [row[:] for row in a]
        else:
            for i in range(n):
                m[i][i] = tower.add(m[i][i], c)
            m = mat_mul(tower, a, m)
        c = tower.scale(trace(tower, m), Fraction(-1, k))
        coeffs_desc.append(c)
    return list(reversed(coeffs_desc))


# ---- dense univariate polynomials over a tower ------------------------


def poly_trim(tower, p):
    while p and tower.is_zero(p[-1]):
        p.pop()
    return p


def poly_add(tower, p, q):
    n = max(len(p), len(q))
    z = tower.zero()
    out = [
        tower.add(p[i] if i < len(p) else z, q[i] if i < len(q) else z)
        for i in range(n)
    ]
    return poly_trim(tower, out)


def poly_mul(tower, p, q):
    if not p or not q:
        return []
    z = tower.zero()
    out = [z] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if tower.is_zero(x):
            continue
        for j, y in enumerate(q):
            if not tower.is_zero(y):
                out[i + j] = tower.add(out[i + j], tower.mul(x, y))
    return poly_trim(tower, out)


def poly_divmod(tower, num, den):
    num = list(num)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    q = [tower.zero()] * max(0, len(num) - len(den) + 1)
    inv_lead = tower.inv(den[-1])
    for k in range(len(num) - len(den), -1, -1):
        c = tower.mul(num[k + len(den) - 1], inv_lead)
        q[k] = c
        if not tower.is_zero(c):
            for j, d in enumerate(den):
                num[k + j] = tower.sub(num[k + j], tower.mul(c, d))
    return poly_trim(tower, q), poly_trim(tower, num)


def poly_monic(tower, p):
    if not p:
        return p
    inv = tower.inv(p[-1])
    return [tower.mul(x, inv) for x in p]


def poly_gcd(tower, p, q):
    p, q = list(p), list(q)
    while q:
        _, r = poly_divmod(tower, p, q)
        p, q = q, r
    return poly_monic(tower, p)


def poly_derivative(tower, p):
    return poly_trim(
        tower, [tower.scale(c, Fraction(i)) for i, c in enumerate(p)][1:]
    )


def poly_squarefree_part(tower, p):
    """p divided by gcd(p, p'): same roots, all simple."""
    d = poly_derivative(tower, p)
    g = poly_gcd(tower, p, d)
    if len(g) <= 1:
        return poly_monic(tower, p)
    q, r = poly_divmod(tower, p, g)
    assert not r
    return poly_monic(tower, q)


def poly_eval(tower, p, x):
    acc = tower.zero()
    for c in reversed(p):
        acc = tower.add(tower.mul(acc, x), c)
    return acc


def poly_eval_matrix(tower, p, a):
    n = len(a)
    acc = zero_matrix(tower, n)
    for c in reversed(p):
        acc = mat_mul(tower, acc, a)
        for i in range(n):
            acc[i][i] = tower.add(acc[i][i], c)
    return acc


def is_semisimple_matrix(tower, a):
    """True iff the matrix is diagonalizable over an algebraic closure.

    Criterion: the squarefree part of the characteristic polynomial
    annihilates the matrix.  Gcd computations are stable under field
    extension, so no explicit splitting field is needed.
    """
    p = charpoly(tower, a)
    m = poly_squarefree_part(tower, p)
    return is_zero_matrix(tower, poly_eval_matrix(tower, m, a))


def matrix_power_is_zero(tower, a, max_power=None):
    """True iff a is nilpotent (checked via iterated squaring)."""
    n = len(a)
    if max_power is None:
        max_power = n
    b = a
    k = 1
    while k < max_power:
        b = mat_mul(tower, b, b)
        k *= 2
        if is_zero_matrix(tower, b):
            return True
    return is_zero_matrix(tower, b)
