"""Small exact linear algebra layer over Q.

Matrices are lists of rows of ``Fraction``.  Rank, row reduction and kernels
are delegated to sympy's ``DomainMatrix`` over QQ; everything else here is
thin glue so the rest of the package never sees sympy types.
"""
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


class LinAlgError(ValueError):
    pass


def frac(x):
    """Coerce ints, Fractions, gmpy/sympy rationals and "p/q" strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def _dm(rows, ncols=None):
    nrows = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = [[QQ(int(v.numerator), int(v.denominator)) for v in r] for r in rows]
    return DomainMatrix(data, (nrows, ncols), QQ)


def _back(dm):
    return [[frac(v) for v in row] for row in dm.to_list()]


def zeros(m, n):
    return [[Fraction(0)] * n for _ in range(m)]


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def matmul(a, b):
    if not a:
        return []
    n = len(b[0]) if b else 0
    bt = list(zip(*b)) if b else [()] * n
    out = []
    for row in a:
        nz = [(k, v) for k, v in enumerate(row) if v]
        out.append([sum((v * col[k] for k, v in nz), Fraction(0)) for col in bt])
    return out


def matvec(a, v):
    out = []
    nz = [(k, x) for k, x in enumerate(v) if x]
    for row in a:
        out.append(sum((row[k] * x for k, x in nz), Fraction(0)))
    return out


def add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a):
    c = frac(c)
    return [[c * x for x in r] for r in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def commutator(a, b):
    return sub(matmul(a, b), matmul(b, a))


def is_zero(a):
    return all(x == 0 for r in a for x in r)


def rank(rows, ncols=None):
    if not rows:
        return 0
    return _dm(rows, ncols).rank()


def rref(rows, ncols=None):
    """Return (reduced rows without zero rows, pivot columns)."""
    if not rows:
        return [], ()
    r, piv = _dm(rows, ncols).rref()
    red = _back(r)[: len(piv)]
    return red, tuple(piv)


def nullspace(a, ncols=None):
    """Basis (list of vectors) of {x : a x = 0}."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(a, ncols).nullspace()
    return [row for row in _back(ns)] if ns.shape[0] else []


def solve(a, b):
    """One solution of a x = b, or None.  Also returns a kernel basis."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None, nullspace(a, ncols)
    x = [Fraction(0)] * ncols
    for row, p in zip(red, piv):
        x[p] = row[ncols]
    return x, nullspace(a, ncols)


def inverse(a):
    n = len(a)
    dm = _dm(a, n)
    if dm.rank() != n:
        raise LinAlgError("matrix is singular")
    return _back(dm.inv())


def det(a):
    if not a:
        return Fraction(1)
    return frac(_dm(a, len(a)).det())


def span_equal(u, v, ncols):
    """Do the row sets u and v span the same subspace of Q^ncols?"""
    ru, rv = rank(u, ncols) if u else 0, rank(v, ncols) if v else 0
    if ru != rv:
        return False
    if ru == 0:
        return True
    return rank(list(u) + list(v), ncols) == ru


def in_span(vec, rows, ncols):
    if not any(vec):
        return True
    if not rows:
        return False
    return rank(list(rows) + [vec], ncols) == rank(rows, ncols)
