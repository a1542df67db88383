"""Generic exact linear algebra over any field-like element type.

Entries must support +, -, *, / and compare equal to 0.  Used with
Fraction, quadratic field elements and number field elements alike.
Matrices are lists of lists; nothing here mutates its arguments.
"""

from __future__ import annotations

from fractions import Fraction


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), start=a[i][0] * b[0][j] * 0)
         for j in range(m)]
        for i in range(n)
    ]


def mat_vec(a, v):
    return [sum((a[i][j] * v[j] for j in range(len(v))), start=a[i][0] * v[0] * 0)
            for i in range(len(a))]


def mat_identity(n, one=Fraction(1)):
    return [[one if i == j else one * 0 for j in range(n)] for i in range(n)]


def mat_sub(a, b):
    return [[a[i][j] - b[i][j] for j in range(len(a[0]))] for i in range(len(a))]


def mat_scal(c, a):
    return [[c * x for x in row] for row in a]


def transpose(a):
    return [list(row) for row in zip(*a)]


def mat_inv(a):
    """Inverse by Gauss-Jordan elimination; raises on singular input."""
    n = len(a)
    one = a[0][0] ** 0 if hasattr(a[0][0], "__pow__") else Fraction(1)
    aug = [list(row) + [one if i == j else one * 0 for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not aug[r][col] == 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = one / aug[col][col]
        aug[col] = [x * inv_p for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col] == 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def mat_det(a):
    n = len(a)
    m = [list(row) for row in a]
    det = m[0][0] ** 0 if hasattr(m[0][0], "__pow__") else Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col] == 0), None)
        if piv is None:
            return det * 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = det * -1
        det = det * m[col][col]
        inv_p = (m[col][col] ** 0) / m[col][col]
        for r in range(col + 1, n):
            if not m[r][col] == 0:
                f = m[r][col] * inv_p
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def solve(a, rhs):
    """Solve a x = rhs for a vector rhs."""
    inv = mat_inv(a)
    return mat_vec(inv, rhs)


def nullspace_rational(a: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the rational nullspace of a (rows = equations)."""
    if not a:
        return []
    rows = [list(map(Fraction, row)) for row in a]
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis
