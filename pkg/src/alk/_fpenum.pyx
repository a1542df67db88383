# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice enumeration kernel.

Same contract as _fpenum_py: enumerate integer vectors under a quadratic
form bound via the Cholesky factor, depth-first from the last coordinate.
"""

import math

from libc.math cimport sqrt, exp, ceil, floor

KERNEL_NAME = "cython"


class BudgetExceeded(RuntimeError):
    def __init__(self, budget, found):
        super().__init__(
            f"enumeration budget {budget} exceeded after {found} vectors")
        self.budget = budget
        self.found = found


def _cholesky_upper(gram):
    n = len(gram)
    u = [[0.0] * n for _ in range(n)]
    for i in range(n):
        s = gram[i][i] - sum(u[k][i] * u[k][i] for k in range(i))
        if s <= 0.0:
            raise ValueError("Gram matrix not positive definite")
        u[i][i] = math.sqrt(s)
        for j in range(i + 1, n):
            u[i][j] = (gram[i][j] - sum(u[k][i] * u[k][j] for k in range(i))) / u[i][i]
    return u


def enumerate_vectors(gram, double bound, long budget=5_000_000):
    cdef int n = len(gram)
    cdef double[16] ubuf
    cdef long[4] x
    cdef int i, j
    if n > 4:
        # rank > 4 never occurs in this package; fall back to a safe path
        from . import _fpenum_py
        return _fpenum_py.enumerate_vectors(gram, bound, budget)
    u = _cholesky_upper(gram)
    for i in range(n):
        for j in range(n):
            ubuf[i * 4 + j] = u[i][j]
        x[i] = 0
    coords = []
    norms = []
    cdef double eps = 1e-9 * (1.0 + abs(bound))
    _rec(n, n - 1, 0.0, bound, eps, ubuf, x, coords, norms, budget)
    return coords, norms


cdef _rec(int n, int i, double used, double bound, double eps,
          double* u, long* x, list coords, list norms, long budget):
    cdef double rem = bound + eps - used
    if rem < 0:
        return
    cdef double s = 0.0
    cdef int j
    for j in range(i + 1, n):
        s += u[i * 4 + j] * x[j]
    cdef double half = sqrt(rem)
    cdef double uii = u[i * 4 + i]
    cdef long lo = <long>ceil((-s - half) / uii - 1e-12)
    cdef long hi = <long>floor((-s + half) / uii + 1e-12)
    cdef long xi
    cdef double t
    for xi in range(lo, hi + 1):
        x[i] = xi
        t = (uii * xi + s) ** 2
        if used + t > bound + eps:
            continue
        if i == 0:
            if len(coords) >= budget:
                raise BudgetExceeded(budget, len(coords))
            coords.append(tuple([x[j] for j in range(n)]))
            norms.append(used + t)
        else:
            _rec(n, i - 1, used + t, bound, eps, u, x, coords, norms, budget)
    x[i] = 0


def gauss_sum(gram, double bound, long budget=5_000_000):
    coords, norms = enumerate_vectors(gram, bound, budget)
    cdef double total = 0.0
    cdef double q
    for q in norms:
        total += exp(-math.pi * q)
    return total, len(norms)
