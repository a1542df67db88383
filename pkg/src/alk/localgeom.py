"""Tori in GL2 over Q, their local coordinates, and related local data.

A torus is the unit group of a quadratic algebra K = Q(sqrt D) acting on
itself; we fix the right-regular matrix model on a basis (1, g): the
matrix of x = a + b*sqrt(D) on the basis (1, sqrt(D)) is
[[a, b], [bD, a]].  The conjugator built from the eigenbasis of the
algebra turns any rational 2x2 matrix gamma into coordinates
(b1, b2) in K with c gamma c^{-1} = [[b1, b2], [conj b2, conj b1]];
everything at finite places is exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .intarith import valuation
from .numfield import QFElem, QuadField
from .ratlinalg import mat_inv, mat_mul


# ---------------------------------------------------------------------------
# torus model


@dataclass(frozen=True)
class QuadTorus:
    """Multiplication model of K^x on the basis (1, basis_gen)."""

    K: QuadField
    basis_gen: QFElem

    def __post_init__(self):
        if self.basis_gen.b == 0:
            raise ValueError("basis generator must not be rational")

    def embed(self, x: QFElem) -> list[list[Fraction]]:
        """Matrix of right multiplication by x on row vectors."""
        g = self.basis_gen
        u, v = _coords_in_basis(x, g)
        w, z = _coords_in_basis(x * g, g)
        return [[u, v], [w, z]]

    def conjugator(self) -> list[list[QFElem]]:
        """c with c * embed(x) * c^{-1} = diag(x, conj x) for all x."""
        K, g = self.K, self.basis_gen
        one = K.elem(1)
        m = [[one, one], [g, g.conj()]]
        return mat_inv(m)


def _coords_in_basis(x: QFElem, g: QFElem) -> tuple[Fraction, Fraction]:
    """(u, v) with x = u + v*g."""
    v = x.b / g.b
    u = x.a - v * g.a
    return u, v


def standard_torus(D: int) -> QuadTorus:
    K = QuadField(D)
    return QuadTorus(K, K.elem(0, 1))


def order_torus(D: int, f: int) -> QuadTorus:
    """Torus on the basis (1, f*omega) of the conductor-f order."""
    K = QuadField(D)
    return QuadTorus(K, K.omega * f)


# ---------------------------------------------------------------------------
# local quadratic extension data


@dataclass(frozen=True)
class LocalQuadExt:
    """Completion data of the order Z_p[f*omega] in K at p."""

    K: QuadField
    p: int
    conductor: int
    ext_type: str  # split / inert / ramified
    alpha: QFElem  # order generator f*omega
    delta: QFElem  # different generator alpha - conj(alpha)

    @property
    def disc_valuation(self) -> int:
        return valuation(self.delta.norm(), self.p)

    @property
    def disc_u(self) -> Fraction:
        """|disc O_u|_p^{-1} = p^{v_p(Nr delta)}."""
        return Fraction(self.p) ** self.disc_valuation

    def in_order(self, x: QFElem) -> bool:
        """x in Z_p + Z_p*alpha."""
        u, v = _coords_in_basis(x, self.alpha)
        return _p_integral(u, self.p) and _p_integral(v, self.p)

    def in_inverse_different(self, x: QFElem) -> bool:
        return self.in_order(x * self.delta)


def _p_integral(x: Fraction, p: int) -> bool:
    return x == 0 or valuation(x, p) >= 0


def different_and_orders(D: int, p: int, f: int = 1) -> LocalQuadExt:
    if f == 0:
        raise ValueError("conductor must be nonzero")
    from .numfield import splitting_type

    K = QuadField(D)
    alpha = K.omega * f
    delta = alpha - alpha.conj()
    return LocalQuadExt(K, p, f, splitting_type(K, p), alpha, delta)


# ---------------------------------------------------------------------------
# local coordinates


@dataclass(frozen=True)
class LocalCoords:
    b1: object  # QFElem (finite) or complex (Archimedean)
    b2: object
    c: tuple  # conjugator rows
    kind: str  # "finite" or "arch"

    def psi(self, det_gamma) -> object:
        """Nr(b2)/det; exact in the finite case."""
        if self.kind == "finite":
            return self.b2.norm() / det_gamma
        return self.b2[0] * self.b2[1] / det_gamma


def local_coords(torus: QuadTorus, gamma) -> LocalCoords:
    """Exact coordinates of a rational 2x2 matrix with respect to the torus."""
    K = torus.K
    g = [[_as_field_elem(K, x) for x in row] for row in gamma]
    c = torus.conjugator()
    cinv = mat_inv(c)
    m = mat_mul(mat_mul(c, g), cinv)
    if not (m[1][1] == m[0][0].conj() and m[1][0] == m[0][1].conj()):
        raise ArithmeticError("conjugated matrix lost its sigma-pattern")
    return LocalCoords(m[0][0], m[0][1], tuple(tuple(r) for r in c), "finite")


def _as_field_elem(K: QuadField, x) -> QFElem:
    if isinstance(x, QFElem):
        return x
    return K.elem(Fraction(x))


def reconstruct(torus: QuadTorus, coords: LocalCoords):
    """c^{-1} [[b1, b2], [conj b2, conj b1]] c, for the identity check."""
    c = [list(r) for r in coords.c]
    cinv = mat_inv(c)
    mid = [[coords.b1, coords.b2], [coords.b2.conj(), coords.b1.conj()]]
    return mat_mul(mat_mul(cinv, mid), c)


def psi_invariant(torus: QuadTorus, gamma) -> Fraction:
    """psi_T(gamma) = Nr(b2)/det(gamma); lies in the base field."""
    lc = local_coords(torus, gamma)
    det = gamma[0][0] * gamma[1][1] - gamma[0][1] * gamma[1][0]
    if det == 0:
        raise ValueError("gamma must be invertible")
    return lc.psi(Fraction(det))


def normalizer_coset_rep(torus: QuadTorus) -> list[list[Fraction]]:
    """A representative of the nontrivial N_T/T coset (needs conj g = -g)."""
    g = torus.basis_gen
    if g.conj() != -g:
        raise ValueError("representative implemented for trace-zero generators")
    return [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(-1)]]


def coset_normalized_coords(torus: QuadTorus, gamma) -> tuple:
    """Coordinates normalized inside the torus coset: a normalizer element
    (b1 = 0) is brought to (0, 1) by a torus translation."""
    lc = local_coords(torus, gamma)
    if not lc.b1.is_zero():
        raise ValueError("not in the nontrivial normalizer coset")
    return (torus.K.elem(0), torus.K.elem(1))


# ---------------------------------------------------------------------------
# integrality and invariant bounds


def integrality_checks(ext: LocalQuadExt, gamma) -> dict:
    """The four order conditions on the coordinates, their conjunction, and
    the direct matrix-side membership gamma in GL2(Z_p)."""
    torus = QuadTorus(ext.K, ext.alpha)
    lc = local_coords(torus, gamma)
    p = ext.p
    det = Fraction(gamma[0][0] * gamma[1][1] - gamma[0][1] * gamma[1][0])
    checks = {
        "b_in_inv_different": ext.in_inverse_different(lc.b1)
        and ext.in_inverse_different(lc.b2),
        "difference_integral": ext.in_order(lc.b1 - lc.b2),
        "traces_integral": _p_integral(lc.b1.trace(), p)
        and _p_integral(lc.b2.trace(), p),
        "det_is_unit": det != 0 and valuation(det, p) == 0,
    }
    checks["all"] = all(checks.values())
    entries_integral = all(
        _p_integral(Fraction(x), p) for row in gamma for x in row
    )
    checks["gamma_in_gl2_zp"] = entries_integral and checks["det_is_unit"]
    checks["coords"] = lc
    return checks


def psi_bound_finite(ext: LocalQuadExt, gamma) -> dict:
    """|psi(k)|_p <= disc_u for k in GL2(Z_p), as exact valuations."""
    torus = QuadTorus(ext.K, ext.alpha)
    psi = psi_invariant(torus, [[Fraction(x) for x in row] for row in gamma])
    if psi == 0:
        return {"psi": psi, "abs": Fraction(0), "disc_u": ext.disc_u, "ok": True}
    abs_psi = Fraction(ext.p) ** (-valuation(psi, ext.p))
    return {"psi": psi, "abs": abs_psi, "disc_u": ext.disc_u,
            "ok": abs_psi <= ext.disc_u}


# ---------------------------------------------------------------------------
# Archimedean coordinates


def arch_conjugator(f: list[list[float]]) -> tuple:
    """Conjugator for the algebra generated by a traceless norm-one matrix.

    Returns (c, alpha) with c f c^{-1} = diag(alpha, -alpha); a unipotent
    (or swap) pre-conjugation makes the top-right entry at least 1/2 in
    absolute value first.
    """
    a, b = f[0][0], f[0][1]
    c_, d_ = f[1][0], f[1][1]
    if abs(a + d_) > 1e-9:
        raise ValueError("generator must be traceless")
    nrm = math.sqrt(2 * a * a + b * b + c_ * c_)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError("generator must have norm one")
    candidates = (
        [[1.0, 0.0], [0.0, 1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[1.0, 1.0], [0.0, 1.0]],
        [[1.0, -1.0], [0.0, 1.0]],
    )
    for u in candidates:
        uinv = _inv2(u)
        fp = _mul2(_mul2(u, f), uinv)
        if abs(fp[0][1]) >= 0.49:
            break
    else:
        raise ArithmeticError("no pre-conjugation achieved |b| >= 1/2")
    ap, bp = fp[0][0], fp[0][1]
    alpha = cmath.sqrt(complex(ap * ap + bp * fp[1][0]))
    m = [[complex(bp), complex(bp)], [alpha - ap, -alpha - ap]]
    cmat = _inv2(m)
    return _mul2(cmat, [[complex(x) for x in row] for row in u]), alpha


def _mul2(a, b):
    return [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]


def _inv2(m):
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]


def arch_local_coords(f: list[list[float]], gamma) -> LocalCoords:
    c, _alpha = arch_conjugator(f)
    g = [[complex(float(x)) for x in row] for row in gamma]
    m = _mul2(_mul2(c, g), _inv2(c))
    return LocalCoords((m[0][0], m[1][1]), (m[0][1], m[1][0]),
                       tuple(tuple(r) for r in c), "arch")


def psi_invariant_arch(f: list[list[float]], gamma) -> complex:
    lc = arch_local_coords(f, gamma)
    det = float(gamma[0][0]) * float(gamma[1][1]) - float(gamma[0][1]) * float(gamma[1][0])
    return lc.psi(det)


# ---------------------------------------------------------------------------
# orbital measures


def orbital_measure_split(psi: Fraction, kind: str, q: Optional[int] = None,
                          radius: Optional[float] = None,
                          in_inverse_different: Optional[bool] = None) -> float:
    """Closed-form local orbital measures.

    kind 'split_nonarch': (log_q |psi|^{-1} + 1)(log_q |1+psi|^{-1} + 1)
    via the valuation-range count; 'field_nonarch': 0/1 indicator;
    'split_real'/'split_complex': log-length range product with the given
    Archimedean radius bound R.
    """
    if kind == "field_nonarch":
        if in_inverse_different is None:
            raise ValueError("field case needs the inverse-different flag")
        return 1.0 if in_inverse_different else 0.0
    psi = Fraction(psi)
    if psi == 0 or psi == -1:
        raise ValueError("psi in {0, -1} is the degenerate stabilizer case")
    if kind == "split_nonarch":
        m = valuation(psi, q)
        el = valuation(1 + psi, q)
        if m < 0 or el < 0:
            return 0.0
        return float((m + 1) * (el + 1))
    if kind in ("split_real", "split_complex"):
        pref = 2.0 if kind == "split_real" else 2.0 * math.pi
        r = float(radius)
        t1 = math.log(1.0 / abs(float(psi))) + 2.0 * math.log(r)
        t2 = math.log(1.0 / abs(1.0 + float(psi))) + 2.0 * math.log(r)
        if t1 < 0 or t2 < 0:
            return 0.0
        return pref * t1 * pref * t2
    raise ValueError(f"unknown kind {kind!r}")


def orbital_measure_split_oracle(psi: Fraction, q: int) -> int:
    """Valuation-range enumeration oracle for the split case: counts the
    radii rho with |b2 c1| <= |rho| <= |b1 c2|^{-1} factor by factor."""
    psi = Fraction(psi)

    def range_count(m: int) -> int:
        if m < 0:
            return 0
        lo_abs = Fraction(q) ** (-m)  # |b2 c1|, with |b1 c2| = 1
        count = 0
        for k in range(-m - 5, m + 6):
            rho_abs = Fraction(q) ** (-k)
            if lo_abs <= rho_abs <= 1:
                count += 1
        return count

    return range_count(valuation(psi, q)) * range_count(valuation(1 + psi, q))


# ---------------------------------------------------------------------------
# norm image index


def norm_index(ext: LocalQuadExt) -> int:
    """Index of the norm image of the local order's units in Z_p^x."""
    p = ext.p
    if p != 2:
        return 1 if ext.disc_valuation == 0 else 2
    # dyadic: enumerate norms of units modulo 8
    tr = int(ext.alpha.trace())
    nr = ext.alpha.norm()
    assert nr.denominator == 1
    nr = int(nr)
    images = set()
    for x in range(8):
        for y in range(8):
            n = (x * x + tr * x * y + nr * y * y) % 8
            if n % 2 == 1:
                images.add(n)
    units = {1, 3, 5, 7}
    assert images <= units and all((a * b) % 8 in images for a in images for b in images)
    return len(units) // len(images)


# ---------------------------------------------------------------------------
# GL4 block coordinates


def block_coordinates_gl4(F: QuadField, gamma, f: int = 1) -> dict:
    """Coordinates of a rational 4x4 matrix with respect to the embedded
    Res_{F/Q} GL2: conjugation by P_(23) diag(c, c) yields blocks
    [[A1, A2], [conj A2, conj A1]] with A1, A2 over F."""
    alpha = F.omega * f
    one = F.elem(1)
    zero = F.elem(0)
    c = mat_inv([[one, one], [alpha, alpha.conj()]])
    dd = [
        [c[0][0], c[0][1], zero, zero],
        [c[1][0], c[1][1], zero, zero],
        [zero, zero, c[0][0], c[0][1]],
        [zero, zero, c[1][0], c[1][1]],
    ]
    perm = [[one if (i, j) in ((0, 0), (1, 2), (2, 1), (3, 3)) else zero
             for j in range(4)] for i in range(4)]
    c1 = mat_mul(perm, dd)
    g = [[_as_field_elem(F, x) for x in row] for row in gamma]
    m = mat_mul(mat_mul(c1, g), mat_inv(c1))
    a1 = [[m[0][0], m[0][1]], [m[1][0], m[1][1]]]
    a2 = [[m[0][2], m[0][3]], [m[1][2], m[1][3]]]
    pattern_ok = all(
        m[2 + i][2 + j] == a1[i][j].conj() and m[2 + i][j] == a2[i][j].conj()
        for i in range(2) for j in range(2)
    )
    return {"A1": a1, "A2": a2, "pattern_ok": pattern_ok, "c1": c1}


def block_integrality(F: QuadField, gamma, p: int, f: int = 1) -> dict:
    """Integrality of the block coordinates for gamma in GL4(Z_p)."""
    ext = different_and_orders(F.d, p, f)
    bc = block_coordinates_gl4(F, gamma, f)
    a1, a2 = bc["A1"], bc["A2"]
    in_inv_diff = all(ext.in_inverse_different(a1[i][j]) and
                      ext.in_inverse_different(a2[i][j])
                      for i in range(2) for j in range(2))
    diff_int = all(ext.in_order(a1[i][j] - a2[i][j])
                   for i in range(2) for j in range(2))
    return {"pattern_ok": bc["pattern_ok"], "in_inv_different": in_inv_diff,
            "difference_integral": diff_int,
            "A2_zero": all(a2[i][j].is_zero() for i in range(2) for j in range(2))}
