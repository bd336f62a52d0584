"""Exact integer-lattice kernel: Hermite/Smith normal forms, kernels, saturation.

Rows of a matrix are lattice generators in Z^d.  All arithmetic is on Python
ints, so nothing overflows.
"""

from math import gcd


def _xgcd(a, b):
    # returns (g, x, y) with x*a + y*b == g >= 0
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def hnf(rows):
    """Row-style Hermite normal form: echelon, positive pivots, entries above
    a pivot reduced into [0, pivot).  Zero rows are dropped.  Unique for a
    fixed lattice."""
    H, _ = hnf_with_transform(rows)
    return H


def hnf_with_transform(rows):
    """Return (H, U) with U unimodular over the input row space: the nonzero
    rows of H form the HNF basis and U records the row operations applied to
    the full input (rows of U give each H-row as a combination of inputs)."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(n):
        # find a pivot in rows >= row
        piv = None
        for i in range(row, m):
            if A[i][col]:
                piv = i
                break
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        U[row], U[piv] = U[piv], U[row]
        # clear below via gcd row ops
        for i in range(row + 1, m):
            while A[i][col]:
                a, b = A[row][col], A[i][col]
                if b % a == 0:
                    q = b // a
                    for k in range(n):
                        A[i][k] -= q * A[row][k]
                    for k in range(m):
                        U[i][k] -= q * U[row][k]
                else:
                    g, x, y = _xgcd(a, b)
                    ag, bg = a // g, b // g
                    for k in range(n):
                        ra, ri = A[row][k], A[i][k]
                        A[row][k] = x * ra + y * ri
                        A[i][k] = -bg * ra + ag * ri
                    for k in range(m):
                        ra, ri = U[row][k], U[i][k]
                        U[row][k] = x * ra + y * ri
                        U[i][k] = -bg * ra + ag * ri
        if A[row][col] < 0:
            A[row] = [-v for v in A[row]]
            U[row] = [-v for v in U[row]]
        # reduce entries above the pivot
        p = A[row][col]
        for i in range(row):
            q = A[i][col] // p
            if q:
                for k in range(n):
                    A[i][k] -= q * A[row][k]
                for k in range(m):
                    U[i][k] -= q * U[row][k]
        row += 1
    H = [r for r in A[:row]]
    return H, (U, row)


def kernel_basis(rows):
    """Basis of {v in Z^m : v * rows == 0} (left integer kernel); the result
    lattice is saturated."""
    m = len(rows)
    if m == 0:
        return []
    _H, (U, rank) = hnf_with_transform(rows)
    ker = [U[i] for i in range(rank, m)]
    return hnf(ker) if ker else []


def snf(rows):
    """Smith normal form.  Returns (diag, U, V) with U*A*V having the
    elementary divisors diag (d1 | d2 | ...) on the diagonal."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, x, y, bg, ag):
        for k in range(n):
            a, b = A[i][k], A[j][k]
            A[i][k] = x * a + y * b
            A[j][k] = -bg * a + ag * b
        for k in range(m):
            a, b = U[i][k], U[j][k]
            U[i][k] = x * a + y * b
            U[j][k] = -bg * a + ag * b

    def col_op(i, j, x, y, bg, ag):
        for k in range(m):
            a, b = A[k][i], A[k][j]
            A[k][i] = x * a + y * b
            A[k][j] = -bg * a + ag * b
        for k in range(n):
            a, b = V[k][i], V[k][j]
            V[k][i] = x * a + y * b
            V[k][j] = -bg * a + ag * b

    t = 0
    while t < min(m, n):
        # move a nonzero entry to (t, t)
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            A[t], A[i0] = A[i0], A[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for k in range(m):
                A[k][t], A[k][j0] = A[k][j0], A[k][t]
            for k in range(n):
                V[k][t], V[k][j0] = V[k][j0], V[k][t]
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    g, x, y = _xgcd(A[t][t], A[i][t])
                    row_op(t, i, x, y, A[i][t] // g, A[t][t] // g)
            for j in range(t + 1, n):
                if A[t][j]:
                    g, x, y = _xgcd(A[t][t], A[t][j])
                    col_op(t, j, x, y, A[t][j] // g, A[t][t] // g)
            if all(A[i][t] == 0 for i in range(t + 1, m)) and \
               all(A[t][j] == 0 for j in range(t + 1, n)):
                break
        # divisibility fix-up: fold any non-multiple into position t
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t]:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            for k in range(n):
                A[t][k] += A[bad][k]
            for k in range(m):
                U[t][k] += U[bad][k]
            continue
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return diag, U, V


def saturate(rows, dim=None):
    """Saturation {v in Z^d : k*v in L for some k >= 1} of the row lattice,
    as an HNF basis.  Computed as the double integer kernel, so the result is
    exactly the rational row space intersected with Z^d."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    d = dim or len(rows[0])
    # orthogonal complement K = {x : rows * x^T = 0}, then saturation = ker(K)
    cols = [[r[j] for r in rows] for j in range(d)]     # transpose
    K = kernel_basis(cols)                              # rows orthogonal to L
    if not K:
        return hnf([[int(i == j) for j in range(d)] for i in range(d)])
    cols2 = [[r[j] for r in K] for j in range(d)]
    return kernel_basis(cols2)


def saturation_index(rows):
    """[saturate(L) : L] = product of the elementary divisors over the rank."""
    diag, _, _ = snf(rows)
    p = 1
    for d in diag:
        p *= d
    return p


def solve_left(rows, target):
    """One integer solution x of x * rows == target, or None.  rows are the
    lattice generators; used to express a vector over a generating set."""
    m = len(rows)
    if m == 0:
        return [] if not any(target) else None
    H, (U, rank) = hnf_with_transform(rows)
    n = len(rows[0])
    t = list(target)
    coeff = [0] * rank
    for i in range(rank):
        # pivot column of H row i
        piv = next(j for j in range(n) if H[i][j])
        if t[piv] % H[i][piv]:
            return None
        q = t[piv] // H[i][piv]
        coeff[i] = q
        for k in range(n):
            t[k] -= q * H[i][k]
    if any(t):
        return None
    x = [0] * m
    for i in range(rank):
        if coeff[i]:
            for k in range(m):
                x[k] += coeff[i] * U[i][k]
    return x


def in_lattice(rows, target):
    return solve_left(rows, target) is not None


def lattice_gcd_1d(values, modulus=None):
    """Generator of the subgroup of Z (or Z/modulus) generated by values."""
    g = 0
    for v in values:
        g = gcd(g, v)
    if modulus:
        g = gcd(g, modulus)
    return g
