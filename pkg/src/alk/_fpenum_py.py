"""Pure-Python lattice enumeration kernel (fallback for the compiled one).

Enumerates all integer vectors x with x^T G x <= bound for a positive
definite Gram matrix G, by nested interval search on the Cholesky factor.
"""

from __future__ import annotations

import math

KERNEL_NAME = "python"


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int, found: int):
        super().__init__(f"enumeration budget {budget} exceeded after {found} vectors")
        self.budget = budget
        self.found = found


def _cholesky_upper(gram):
    """Upper-triangular U with U^T U = G."""
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


def enumerate_vectors(gram, bound, budget=5_000_000):
    """All integer x with Q(x) <= bound.  Returns (list of tuples, list of
    float norms).  Deterministic ordering (lexicographic from the last
    coordinate down)."""
    n = len(gram)
    u = _cholesky_upper(gram)
    coords: list[tuple[int, ...]] = []
    norms: list[float] = []
    x = [0] * n
    eps = 1e-9 * (1.0 + abs(bound))

    def rec(i, used):
        # used = sum of squared terms from levels > i
        rem = bound + eps - used
        if rem < 0:
            return
        s = sum(u[i][j] * x[j] for j in range(i + 1, n))
        half = math.sqrt(rem)
        lo = math.ceil((-s - half) / u[i][i] - 1e-12)
        hi = math.floor((-s + half) / u[i][i] + 1e-12)
        for xi in range(lo, hi + 1):
            x[i] = xi
            t = (u[i][i] * xi + s) ** 2
            if used + t > bound + eps:
                continue
            if i == 0:
                if len(coords) >= budget:
                    raise BudgetExceeded(budget, len(coords))
                coords.append(tuple(x))
                norms.append(used + t)
            else:
                rec(i - 1, used + t)
        x[i] = 0

    rec(n - 1, 0.0)
    return coords, norms


def gauss_sum(gram, bound, budget=5_000_000):
    """(sum of exp(-pi * Q(x)), count) over Q(x) <= bound."""
    coords, norms = enumerate_vectors(gram, bound, budget)
    return sum(math.exp(-math.pi * q) for q in norms), len(norms)
