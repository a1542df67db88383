"""Exact arithmetic in Q[x]/(m) for monic m, plus cyclotomic helpers.

Used for quartic towers: traces of order bases, exact embedding matrices
for abelian quartic fields, and the Gaussian-period construction of
cyclic quartic fields inside Q(zeta_p) for primes p = 1 mod 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient lists, low degree first)


def poly_trim(c: list[Fraction]) -> list[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim([
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ])


def poly_scal(s, a):
    return poly_trim([s * x for x in a])


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv = 1 / b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] * inv
        k = len(a) - len(b)
        q[k] = f
        for i, y in enumerate(b):
            a[k + i] -= f * y
        poly_trim(a)
    return poly_trim(q), a


def poly_mod(a, m):
    return poly_divmod(a, m)[1]


def poly_xgcd(a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(s0, poly_scal(Fraction(-1), poly_mul(q, s1)))
        t0, t1 = t1, poly_add(t0, poly_scal(Fraction(-1), poly_mul(q, t1)))
    if not r0:
        raise ZeroDivisionError("gcd of zero polynomials")
    lead = r0[-1]
    return poly_scal(1 / lead, r0), poly_scal(1 / lead, s0), poly_scal(1 / lead, t0)


def poly_compose_mod(a, c, m):
    """a(c(x)) mod m(x)."""
    out: list[Fraction] = []
    power = [Fraction(1)]
    for coeff in a:
        out = poly_add(out, poly_scal(coeff, power))
        power = poly_mod(poly_mul(power, c), m)
    return out


# ---------------------------------------------------------------------------
# number field elements


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(min_poly) with min_poly monic of degree n."""

    min_poly: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def elem(self, coeffs) -> "NFElem":
        c = [Fraction(x) for x in coeffs] if not isinstance(coeffs, (int, Fraction)) \
            else [Fraction(coeffs)]
        c = poly_mod(c, list(self.min_poly))
        c = c + [Fraction(0)] * (self.degree - len(c))
        return NFElem(self, tuple(c))

    @property
    def gen(self) -> "NFElem":
        return self.elem([0, 1])

    def one(self) -> "NFElem":
        return self.elem(1)


@dataclass(frozen=True)
class NFElem:
    field: NumberField
    coeffs: tuple[Fraction, ...]

    def _coerce(self, other):
        if isinstance(other, NFElem):
            return other
        return self.field.elem(Fraction(other))

    def __add__(self, other):
        o = self._coerce(other)
        return NFElem(self.field, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prod = poly_mod(poly_mul(list(self.coeffs), list(o.coeffs)),
                        list(self.field.min_poly))
        prod = prod + [Fraction(0)] * (self.field.degree - len(prod))
        return NFElem(self.field, tuple(prod))

    __rmul__ = __mul__

    def inverse(self):
        g, s, _ = poly_xgcd(poly_trim(list(self.coeffs)), list(self.field.min_poly))
        if len(g) != 1:
            raise ZeroDivisionError("element not invertible (reducible modulus?)")
        inv = poly_scal(1 / g[0], s)
        return self.field.elem(inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, NFElem):
            return self.field.min_poly == other.field.min_poly and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return all(c == 0 for c in self.coeffs[1:]) and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.min_poly, self.coeffs))

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self on the power basis (columns)."""
        n = self.field.degree
        cols = []
        for i in range(n):
            basis_vec = [Fraction(0)] * n
            basis_vec[i] = Fraction(1)
            prod = (self * NFElem(self.field, tuple(basis_vec))).coeffs
            cols.append(list(prod))
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def norm(self) -> Fraction:
        from .ratlinalg import mat_det

        return mat_det(self.mult_matrix())

    def apply_conj(self, conj_poly: Sequence[Fraction]) -> "NFElem":
        """Image under the automorphism sending the generator to conj_poly."""
        img = poly_compose_mod(list(self.coeffs), list(conj_poly),
                               list(self.field.min_poly))
        return self.field.elem(img)

    def embed(self, root: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * root + complex(float(c))
        return out


def poly_disc_quartic(coeffs: Sequence[Fraction]) -> Fraction:
    """Discriminant of a monic quartic = disc of the power basis Z[theta]."""
    K = NumberField(tuple(Fraction(c) for c in coeffs))
    theta = K.gen
    basis = [K.one(), theta, theta * theta, theta * theta * theta]
    gram = [[(basis[i] * basis[j]).trace() for j in range(4)] for i in range(4)]
    from .ratlinalg import mat_det

    return mat_det(gram)


# ---------------------------------------------------------------------------
# cyclotomic arithmetic for Gaussian periods


class Cyclotomic:
    """Z[zeta_p] with vectors indexed by exponents 0..p-1 and the single
    relation sum_k zeta^k = 0 (canonical form zeroes the coefficient of
    zeta^(p-1))."""

    def __init__(self, p: int):
        self.p = p

    def zero(self):
        return [Fraction(0)] * self.p

    def canon(self, v):
        c = v[self.p - 1]
        return [x - c for x in v[: self.p - 1]] + [Fraction(0)]

    def add(self, a, b):
        return self.canon([x + y for x, y in zip(a, b)])

    def scal(self, s, a):
        return self.canon([s * x for x in a])

    def mul(self, a, b):
        out = self.zero()
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y == 0:
                    continue
                out[(i + j) % self.p] += x * y
        return self.canon(out)

    def monomial(self, k):
        v = self.zero()
        v[k % self.p] = Fraction(1)
        return self.canon(v)

    def rational_part(self, v):
        """The rational value if v is rational; raises otherwise."""
        v = self.canon(v)
        if any(x != 0 for x in v[1:]):
            raise ValueError("not a rational cyclotomic element")
        return v[0]


def _primitive_root(p: int) -> int:
    from .intarith import factorize

    fac = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    raise ValueError("no primitive root found")


def _solve_in_power_basis(cyc: Cyclotomic, powers: list[list[Fraction]],
                          target: list[Fraction]) -> list[Fraction]:
    """Rational coordinates of target in span(powers), exact, verified."""
    from .ratlinalg import mat_inv, mat_vec

    m = len(powers)
    # pick m coordinate positions giving an invertible square system
    cols = list(range(cyc.p - 1))
    import itertools

    a_full = [[powers[j][i] for j in range(m)] for i in range(cyc.p - 1)]
    for pick in itertools.combinations(cols, m):
        sub = [a_full[i] for i in pick]
        try:
            inv = mat_inv([[Fraction(x) for x in row] for row in sub])
        except ZeroDivisionError:
            continue
        sol = mat_vec(inv, [target[i] for i in pick])
        # verify against every coordinate
        ok = all(
            sum(sol[j] * powers[j][i] for j in range(m)) == target[i]
            for i in range(cyc.p - 1)
        )
        if ok:
            return sol
        raise ArithmeticError("target not in the span of the power basis")
    raise ArithmeticError("power basis is degenerate")


def gaussian_period_quartic(p: int) -> dict:
    """Exact data for the quartic subfield of Q(zeta_p), p prime, p = 1 mod 4.

    Returns min_poly of the period eta_0, the conjugation polynomial of a
    Galois generator tau (eta_0 -> eta_1), the coordinates of sqrt(p) in
    the power basis, and delta = (eta_0 - eta_2)^2 in F = Q(sqrt(p)) as a
    pair (rational part, sqrt(p) coefficient).
    """
    if p % 4 != 1:
        raise ValueError("p must be 1 mod 4")
    cyc = Cyclotomic(p)
    g = _primitive_root(p)
    m = (p - 1) // 4
    etas = []
    for j in range(4):
        v = cyc.zero()
        for k in range(m):
            v[pow(g, 4 * k + j, p)] += 1
        etas.append(cyc.canon(v))

    # minimal polynomial prod (X - eta_j), coefficients as cyclotomic vectors
    poly = [cyc.monomial(0)]  # coefficients of X^i, constant term first
    for eta in etas:
        new = [cyc.zero() for _ in range(len(poly) + 1)]
        for i, c in enumerate(poly):
            new[i + 1] = cyc.add(new[i + 1], c)
            new[i] = cyc.add(new[i], cyc.mul(cyc.scal(Fraction(-1), eta), c))
        poly = new
    min_poly = tuple(cyc.rational_part(c) for c in poly)
    assert min_poly[4] == 1

    powers = [cyc.monomial(0)]
    for _ in range(3):
        powers.append(cyc.mul(powers[-1], etas[0]))

    tau_coords = _solve_in_power_basis(cyc, powers, etas[1])

    # quadratic Gauss sum: sum of legendre(k) zeta^k = sqrt(p) for p = 1 mod 4
    gauss = cyc.zero()
    for k in range(1, p):
        gauss[k] += 1 if pow(k, (p - 1) // 2, p) == 1 else -1
    gauss = cyc.canon(gauss)
    sqrtp_coords = _solve_in_power_basis(cyc, powers, gauss)

    diff = cyc.add(etas[0], cyc.scal(Fraction(-1), etas[2]))
    delta_vec = cyc.mul(diff, diff)
    # delta lies in Q(sqrt p): delta = u + v*sqrt(p)
    one = cyc.monomial(0)
    from .ratlinalg import mat_inv, mat_vec

    # solve u*1 + v*gauss = delta on two independent coordinates, verify all
    sol = _solve_in_power_basis(cyc, [one, gauss], delta_vec)
    u, v = sol

    return {
        "p": p,
        "min_poly": min_poly,
        "tau_poly": tuple(tau_coords),
        "sqrtp_coords": tuple(sqrtp_coords),
        "delta": (u, v),
    }
