"""
Exact Gaussian elimination over :class:`~qhs.scalar.Scalar`.

Matrices are lists of rows; all results are exact.  Systems at desk scale
have at most a few hundred unknowns, so the plain row-reduction is fine.
"""

from .scalar import ONE, ZERO, Scalar, ScalarError


def zeros(m, n):
    return [[ZERO] * n for _ in range(m)]


def identity(n):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def matmul(a, b):
    if not a:
        return []
    n, m = len(b), len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [ZERO] * m
        for k in range(n):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(m):
                    if bk[j]:
                        acc[j] = acc[j] + x * bk[j]
        out.append(acc)
    return out


def rref(rows, ncols=None):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y if y else x for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0} as a list of vectors."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def solve(rows, rhs, ncols):
    """
    One solution of rows . x = rhs, or None if inconsistent.  Also returns
    the nullspace dimension so callers can assert uniqueness.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None, None
    x = [ZERO] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x, ncols - len(pivots)


def inverse(m):
    n = len(m)
    aug = [list(r) + e for r, e in zip(m, identity(n))]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ScalarError("singular matrix")
    return [row[n:] for row in red]


def det(m):
    """Determinant by elimination."""
    m = [list(r) for r in m]
    n = len(m)
    out = ONE
    for c in range(n):
        piv = next((k for k in range(c, n) if m[k][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out = out * m[c][c]
        inv = m[c][c].inverse()
        for k in range(c + 1, n):
            if m[k][c]:
                f = m[k][c] * inv
                m[k] = [x - f * y for x, y in zip(m[k], m[c])]
    return out


def conj_transpose(m):
    return [[m[j][i].conj() for j in range(len(m))] for i in range(len(m[0]))] if m else []


def as_scalar_matrix(m):
    return [[Scalar.coerce(x) for x in row] for row in m]
