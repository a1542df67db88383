"""Exact arithmetic in quadratic fields and quadratic towers.

A field F = Q(sqrt(d)) is described by a squarefree integer d.  Elements
are pairs of rationals (a, b) meaning a + b*sqrt(d).  Finite places are
tagged by the splitting behaviour of the rational prime below them;
split-place valuations go through a Hensel-lifted root of the minimal
polynomial of the integral-basis generator, so all finite-place data is
exact.  Quartic fields enter only as towers K = F(sqrt(delta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .intarith import (
    factorize,
    is_square_fraction,
    is_squarefree,
    prime_support,
    sqrt_fraction,
    valuation,
)

DEFAULT_HENSEL_PRECISION = 64


class PrecisionError(ArithmeticError):
    """Raised when a split-place valuation exceeds the Hensel precision."""


# ---------------------------------------------------------------------------
# fields and elements


@dataclass(frozen=True)
class QuadField:
    """F = Q(sqrt(d)) for squarefree d not in {0, 1}."""

    d: int

    def __post_init__(self):
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} must be squarefree and not 0 or 1")

    @property
    def disc(self) -> int:
        return abs(self.d) if self.d % 4 == 1 else 4 * abs(self.d)

    @property
    def is_real(self) -> bool:
        return self.d > 0

    def elem(self, a, b=0) -> "QFElem":
        return QFElem(self, Fraction(a), Fraction(b))

    @property
    def omega(self) -> "QFElem":
        # generator of the ring of integers over Z
        if self.d % 4 == 1:
            return self.elem(Fraction(1, 2), Fraction(1, 2))
        return self.elem(0, 1)

    @property
    def integral_basis(self) -> tuple["QFElem", "QFElem"]:
        return (self.elem(1), self.omega)

    def gen_min_poly(self) -> tuple[Fraction, Fraction]:
        """(c0, c1) with omega^2 + c1*omega + c0 = 0."""
        if self.d % 4 == 1:
            return (Fraction(1 - self.d, 4), Fraction(-1))
        return (Fraction(-self.d), Fraction(0))

    def __repr__(self):
        return f"QuadField(d={self.d})"


@dataclass(frozen=True)
class QFElem:
    field: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "QFElem":
        if isinstance(other, QFElem):
            if other.field.d != self.field.d:
                raise ValueError("elements of different fields")
            return other
        return QFElem(self.field, Fraction(other), Fraction(0))

    def __add__(self, other):
        o = self._coerce(other)
        return QFElem(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QFElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self.field.d
        return QFElem(
            self.field,
            self.a * o.a + d * self.b * o.b,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QFElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element")
        return QFElem(self.field, self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = QFElem(self.field, Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QFElem):
            return self.field.d == other.field.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.d, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conj(self) -> "QFElem":
        return QFElem(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_rational(self) -> bool:
        return self.b == 0

    def gen_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (u, v) with self = u + v*omega."""
        if self.field.d % 4 == 1:
            return (self.a - self.b, 2 * self.b)
        return (self.a, self.b)

    def embeddings(self) -> tuple[complex, complex]:
        """The two complex embedding values (conjugates for d < 0)."""
        d = self.field.d
        if d > 0:
            s = math.sqrt(d)
            return (float(self.a) + float(self.b) * s, float(self.a) - float(self.b) * s)
        s = math.sqrt(-d)
        z = complex(float(self.a), float(self.b) * s)
        return (z, z.conjugate())

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.d}))"


def make_quad_field(d: int) -> QuadField:
    return QuadField(d)


def is_square_in_field(x: QFElem) -> bool:
    """Whether x is a square in its quadratic field."""
    if x.is_zero():
        return True
    d = x.field.d
    if x.b == 0:
        return is_square_fraction(x.a) or is_square_fraction(x.a / d)
    # (s + t sqrt(d))^2 = x needs Nr(x) a square and s^2 = (a +- sqrt(Nr))/2 a square
    n = x.norm()
    if not is_square_fraction(n):
        return False
    r = sqrt_fraction(n)
    for s2 in ((x.a + r) / 2, (x.a - r) / 2):
        if is_square_fraction(s2):
            return True
    return False


# ---------------------------------------------------------------------------
# places


def _sqrt_mod_p(a: int, p: int) -> Optional[int]:
    """Tonelli-Shanks square root of a mod odd prime p, or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def splitting_type(F: QuadField, p: int) -> str:
    d = F.d
    if p == 2:
        if d % 8 == 1:
            return "split"
        if d % 4 == 1:  # d = 5 mod 8
            return "inert"
        return "ramified"
    if d % p == 0:
        return "ramified"
    return "split" if pow(d % p, (p - 1) // 2, p) == 1 else "inert"


@lru_cache(maxsize=None)
def _hensel_root(d: int, p: int, prec: int) -> int:
    """Root of the minimal polynomial of omega mod p^prec (split p only)."""
    F = QuadField(d)
    c0, c1 = F.gen_min_poly()
    c0n, c1n = int(c0), int(c1)

    def f(x):
        return x * x + c1n * x + c0n

    def fp(x):
        return 2 * x + c1n

    r = next(x for x in range(p) if f(x) % p == 0 and fp(x) % p != 0)
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mod = p ** k
        # Newton step: fp(r) is a unit mod p by simplicity of the root
        r = (r - f(r) * pow(fp(r), -1, mod)) % mod
    return r


@dataclass(frozen=True)
class Place:
    """A place of a quadratic field.

    kind: 'finite', 'real' or 'complex'.  Finite places carry the prime p
    and a tag in {'split1', 'split2', 'inert', 'ramified'}; real places an
    embedding index in {0, 1}.
    """

    field: QuadField
    kind: str
    p: int = 0
    tag: str = ""
    embedding_index: int = 0
    precision: int = DEFAULT_HENSEL_PRECISION

    @property
    def residue_size(self) -> int:
        """q_v, the size of the residue field (finite places)."""
        if self.kind != "finite":
            raise ValueError("residue field only at finite places")
        return self.p * self.p if self.tag == "inert" else self.p

    def hensel_root(self) -> int:
        """Root of the omega minimal polynomial mod p^precision."""
        if not self.tag.startswith("split"):
            raise ValueError("Hensel root only at split places")
        r = _hensel_root(self.field.d, self.p, self.precision)
        if self.tag == "split2":
            # the other root; the two roots sum to -c1 mod p^M
            _, c1 = self.field.gen_min_poly()
            r = (-int(c1) - r) % self.p ** self.precision
        return r


def finite_places(F: QuadField, p: int, precision: int = DEFAULT_HENSEL_PRECISION) -> list[Place]:
    t = splitting_type(F, p)
    if t == "split":
        return [Place(F, "finite", p, "split1", precision=precision),
                Place(F, "finite", p, "split2", precision=precision)]
    return [Place(F, "finite", p, t, precision=precision)]


def infinite_places(F: QuadField) -> list[Place]:
    if F.is_real:
        return [Place(F, "real", embedding_index=0), Place(F, "real", embedding_index=1)]
    return [Place(F, "complex")]


def finite_valuation(x: QFElem, v: Place) -> int:
    """Exact valuation of x != 0 at a finite place."""
    if x.is_zero():
        raise ValueError("valuation of 0")
    p, tag = v.p, v.tag
    nv = valuation(x.norm(), p)
    if tag == "inert":
        if nv % 2 != 0:
            raise ArithmeticError("odd norm valuation at an inert place")
        return nv // 2
    if tag == "ramified":
        return nv
    # split place: evaluate u + v*omega at the Hensel root
    u, w = x.gen_coords()
    shift = min(
        valuation(u, p) if u != 0 else 10 ** 9,
        valuation(w, p) if w != 0 else 10 ** 9,
    )
    pf = Fraction(p) ** shift
    u, w = u / pf, w / pf
    r = v.hensel_root()
    mod = p ** v.precision
    # u, w are p-integral here; reduce the rational representative mod p^M
    num = (u.numerator * w.denominator + w.numerator * u.denominator * r)
    den = u.denominator * w.denominator
    residue = num * pow(den, -1, mod) % mod
    if residue == 0:
        val = v.precision  # at least; cross-check below decides
    else:
        val = valuation(residue, p)
    other = nv - (val + shift)
    if residue == 0 or val >= v.precision - 8:
        # precision exhausted: recover via the conjugate place if possible
        conj_val = _split_conj_valuation(x, v)
        if conj_val is None:
            raise PrecisionError(
                f"Hensel precision {v.precision} insufficient at p={p}; retry with more"
            )
        return nv - conj_val
    del other
    return val + shift


def _split_conj_valuation(x: QFElem, v: Place) -> Optional[int]:
    """Valuation at the conjugate split place, if it is precision-safe."""
    other = Place(v.field, "finite", v.p, "split2" if v.tag == "split1" else "split1",
                  precision=v.precision)
    u, w = x.gen_coords()
    p = v.p
    shift = min(
        valuation(u, p) if u != 0 else 10 ** 9,
        valuation(w, p) if w != 0 else 10 ** 9,
    )
    pf = Fraction(p) ** shift
    u, w = u / pf, w / pf
    r = other.hensel_root()
    mod = p ** other.precision
    num = (u.numerator * w.denominator + w.numerator * u.denominator * r)
    den = u.denominator * w.denominator
    residue = num * pow(den, -1, mod) % mod
    if residue == 0 or valuation(residue, p) >= other.precision - 8:
        return None
    return valuation(residue, p) + shift


def place_data(F: QuadField, x: QFElem, v: Place) -> tuple[Optional[int], float | Fraction]:
    """(valuation, normalized absolute value) of x at the place v.

    Finite absolute values are exact Fractions q_v^(-val); Archimedean
    ones are floats, squared modulus at the complex place.
    """
    if v.kind == "finite":
        val = finite_valuation(x, v)
        q = Fraction(v.residue_size)
        return val, q ** (-val)
    if v.kind == "real":
        return None, abs(x.embeddings()[v.embedding_index])
    # complex place, normalized absolute value = squared modulus = Nr(x)
    return None, float(abs(x.norm()))


def support_places(F: QuadField, x: QFElem) -> list[Place]:
    """All finite places where |x|_v can differ from 1."""
    if x.is_zero():
        raise ValueError("0 has no support")
    u, w = x.gen_coords()
    den = math.lcm(u.denominator, w.denominator)
    y = x * den
    primes = set(prime_support(Fraction(den))) if den != 1 else set()
    primes |= set(factorize(int(y.norm())))
    out: list[Place] = []
    for p in sorted(primes):
        out.extend(finite_places(F, p))
    return out


def content(F: QuadField, x: QFElem) -> float:
    """Product of |x|_v over all places; equals 1 for x != 0."""
    c = Fraction(1)
    for v in support_places(F, x):
        c *= place_data(F, x, v)[1]
    out = float(c)
    for v in infinite_places(F):
        out *= place_data(F, x, v)[1]
    return out


# ---------------------------------------------------------------------------
# fractional ideals (maximal order of a quadratic field)


def _hnf_rows(rows: list[tuple[int, int]]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Hermite normal form [[a, b], [0, c]] of the Z-module spanned by rows."""
    rows = [r for r in rows if r != (0, 0)]
    if not rows:
        raise ValueError("zero module")
    # gcd of the first column with Bezout tracking
    while True:
        nz = [r for r in rows if r[0] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda r: abs(r[0]))
        a = nz[0]
        new = [a]
        for r in nz[1:]:
            q = r[0] // a[0]
            new.append((r[0] - q * a[0], r[1] - q * a[1]))
        rows = new + [r for r in rows if r[0] == 0]
    first = next((r for r in rows if r[0] != 0), None)
    seconds = [r[1] for r in rows if r[0] == 0]
    if first is None or not seconds:
        raise ValueError("rows do not span a rank-2 module")
    c = 0
    for s in seconds:
        c = math.gcd(c, s)
    if c == 0:
        raise ValueError("rows do not span a rank-2 module")
    a, b = abs(first[0]), first[1] if first[0] > 0 else -first[1]
    b %= c
    return (a, b), (0, c)


@dataclass(frozen=True)
class FracIdeal:
    """Fractional ideal of O_F, stored as an HNF basis over the integral
    basis (1, omega): rows (a, b) meaning a + b*omega, scaled by 1/den."""

    field: QuadField
    rows: tuple[tuple[int, int], tuple[int, int]]
    den: int

    @staticmethod
    def from_gens(F: QuadField, gens: Sequence[QFElem]) -> "FracIdeal":
        """O_F-module generated by the given elements."""
        omega = F.omega
        elems = []
        for g in gens:
            elems.append(g)
            elems.append(g * omega)
        coords = [e.gen_coords() for e in elems]
        den = math.lcm(*[math.lcm(u.denominator, w.denominator) for u, w in coords])
        rows = [(int(u * den), int(w * den)) for u, w in coords]
        r = _hnf_rows(rows)
        g = math.gcd(r[0][0], math.gcd(r[0][1], math.gcd(r[1][1], den)))
        rows2 = ((r[0][0] // g, r[0][1] // g), (0, r[1][1] // g))
        return FracIdeal(F, rows2, den // g)

    @staticmethod
    def maximal_order(F: QuadField) -> "FracIdeal":
        return FracIdeal(F, ((1, 0), (0, 1)), 1)

    def basis_elems(self) -> tuple[QFElem, QFElem]:
        F = self.field
        omega = F.omega
        out = []
        for a, b in self.rows:
            out.append((F.elem(a) + omega * b) * Fraction(1, self.den))
        return tuple(out)

    def norm(self) -> Fraction:
        (a, _), (_, c) = self.rows
        return Fraction(a * c, self.den ** 2)

    def conj(self) -> "FracIdeal":
        return FracIdeal.from_gens(self.field, [e.conj() for e in self.basis_elems()])

    def inverse(self) -> "FracIdeal":
        # L * conj(L) = Nr(L) * O_F in the maximal order
        n = self.norm()
        return FracIdeal.from_gens(
            self.field, [e.conj() / n for e in self.basis_elems()]
        )

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        gens = [x * y for x in self.basis_elems() for y in other.basis_elems()]
        return FracIdeal.from_gens(self.field, gens)

    def scale(self, c) -> "FracIdeal":
        return FracIdeal.from_gens(self.field, [e * c for e in self.basis_elems()])

    def __pow__(self, n: int) -> "FracIdeal":
        if n == 0:
            return FracIdeal.maximal_order(self.field)
        if n < 0:
            return self.inverse() ** (-n)
        out = FracIdeal.maximal_order(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def contains(self, x: QFElem) -> bool:
        u, w = x.gen_coords()
        (a, b), (_, c) = self.rows
        # solve (u, w)*den = m*(a, b) + n*(0, c) over Z
        un, wn = u * self.den, w * self.den
        m = Fraction(un, a)
        if m.denominator != 1:
            return False
        n = Fraction(wn - m * b, c)
        return n.denominator == 1

    def is_ideal(self) -> bool:
        omega = self.field.omega
        return all(self.contains(e * omega) for e in self.basis_elems())

    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return (self.field.d == other.field.d
                and [Fraction(r[0], self.den) for r in self.rows]
                == [Fraction(r[0], other.den) for r in other.rows]
                and [Fraction(r[1], self.den) for r in self.rows]
                == [Fraction(r[1], other.den) for r in other.rows])

    def __hash__(self):
        return hash((self.field.d, self.rows, self.den))


def prime_ideal(place: Place) -> FracIdeal:
    """The prime ideal of O_F attached to a finite place."""
    F, p = place.field, place.p
    if place.tag == "inert":
        return FracIdeal.from_gens(F, [F.elem(p)])
    if place.tag == "ramified":
        d = F.d
        if p != 2 or d % 2 == 0:
            gen = F.elem(0, 1)  # sqrt(d)
        else:  # p = 2, d = 3 mod 4
            gen = F.elem(1, 1)
        return FracIdeal.from_gens(F, [F.elem(p), gen])
    r = place.hensel_root() % p
    omega = F.omega
    return FracIdeal.from_gens(F, [F.elem(p), omega - F.elem(r)])


# ---------------------------------------------------------------------------
# towers K = F(sqrt(delta))


def _poly_is_irreducible_quartic(coeffs: Sequence[Fraction]) -> bool:
    """Irreducibility over Q of a monic quartic (rational root test plus
    quadratic-factor test through sympy's exact factorization)."""
    import sympy

    x = sympy.symbols("x")
    poly = sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(coeffs))
    return sympy.Poly(poly, x).is_irreducible


@dataclass(frozen=True)
class FieldTower:
    """Q c F c K with [K:F] = 2.

    base None means F = Q (then K is the quadratic field of sqrt(delta)).
    For quartic towers theta denotes a primitive element of K with monic
    minimal polynomial theta_min_poly (degree 4, rational coefficients);
    sqrt_d_coords expresses sqrt(d) in the power basis of theta.
    conj_polys, when present, give the four embeddings K -> K (abelian K)
    as polynomials in theta, ordered compatibly with F.
    """

    base: Optional[QuadField]
    delta: object  # QFElem for quartic towers, Fraction for base Q
    theta_min_poly: Optional[tuple[Fraction, ...]] = None
    sqrt_d_coords: Optional[tuple[Fraction, ...]] = None
    declared_DK: Optional[int] = None
    declared_maximal: bool = False
    galois_hint: Optional[str] = None
    conj_polys: Optional[tuple[tuple[Fraction, ...], ...]] = field(default=None)

    @property
    def degree(self) -> int:
        return 2 if self.base is None else 4


def make_tower(
    F: Optional[QuadField],
    delta,
    declared_DK: Optional[int] = None,
    declared_maximal: bool = False,
    galois_hint: Optional[str] = None,
    conj_polys=None,
) -> FieldTower:
    if F is None:
        delta = Fraction(delta)
        if delta == 0 or is_square_fraction(delta):
            raise ValueError("delta must be a nonsquare")
        return FieldTower(None, delta, declared_DK=declared_DK,
                          declared_maximal=declared_maximal, galois_hint=galois_hint)
    if not isinstance(delta, QFElem):
        delta = F.elem(delta)
    if delta.is_zero() or is_square_in_field(delta):
        raise ValueError("delta must be a nonsquare in F")
    d = F.d
    if delta.b != 0:
        # theta = sqrt(delta), minimal polynomial x^4 - Tr(delta) x^2 + Nr(delta)
        mp = (delta.norm(), Fraction(0), -delta.trace(), Fraction(0), Fraction(1))
        sq = (Fraction(-delta.a, 1) / delta.b, Fraction(0), 1 / delta.b, Fraction(0))
    else:
        # biquadratic: theta = sqrt(d) + sqrt(e)
        e = delta.a
        if e == d:
            raise ValueError("delta equals d; not a valid biquadratic datum")
        mp = ((Fraction(d) - e) ** 2, Fraction(0), -2 * (Fraction(d) + e),
              Fraction(0), Fraction(1))
        c = 1 / (2 * (e - d))
        sq = (Fraction(0), -(3 * d + e) * c, Fraction(0), c)
    if not _poly_is_irreducible_quartic(mp):
        raise ValueError("delta does not generate a quartic field")
    return FieldTower(F, delta, mp, sq, declared_DK, declared_maximal,
                      galois_hint, conj_polys)


# ---------------------------------------------------------------------------
# trace form discriminants


def trace_form_disc(basis: Sequence) -> Fraction:
    """det(Tr(b_i b_j)) for a module basis of an order.

    Accepts quadratic field elements or number field elements (anything
    with a trace() method and multiplication).
    """
    n = len(basis)
    gram = [[(basis[i] * basis[j]).trace() for j in range(n)] for i in range(n)]
    from .ratlinalg import mat_det

    det = mat_det([[Fraction(x) for x in row] for row in gram])
    if det == 0:
        raise ValueError("trace Gram is singular: not a basis of an order")
    return det
