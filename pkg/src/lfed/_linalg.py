"""Dense exact linear algebra over any field type supporting + - * / and bool."""
from __future__ import annotations


def rref(rows, ncols: int):
    """Reduced row echelon form. Returns (matrix, pivot_columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows, ncols: int):
    """Basis of {v : rows * v = 0}, one vector per free column."""
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols)
    zero = rows[0][0] * 0
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = zero + 1
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), a[i][0] * 0)
             for j in range(len(b[0]))] for i in range(len(a))]


def identity(n: int, one):
    zero = one * 0
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def inverse(a):
    n = len(a)
    one = a[0][0] * 0 + 1
    aug = [list(row) + identity(n, one)[i] for i, row in enumerate(a)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def det(a):
    n = len(a)
    m = [list(r) for r in a]
    result = m[0][0] * 0 + 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c]), None)
        if pivot is None:
            return result * 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result = result * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result
