"""Euclidean lattices and Hermitian line bundles over quadratic rings.

Degrees, theta invariants, Poisson-Riemann-Roch, duality, and the
comparison bounds.  Gram matrices and ideals are exact; theta values are
floats with certified truncation tails.

Norm convention for bundles: a bundle carries one radius rho per
Archimedean embedding (equal at conjugate embeddings) and the section
norm at sigma is |sigma(s)| / rho_sigma.  Sections of norm <= 1
everywhere are exactly the elements of the ideal inside the box
|sigma(s)| <= rho_sigma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

from . import enumeration
from .numfield import FracIdeal, QFElem, QuadField
from .ratlinalg import mat_det, mat_inv


@dataclass(frozen=True)
class EuclideanLattice:
    """Free Z-module of rank n with a symmetric positive definite Gram
    matrix; exact entries when available."""

    gram: tuple[tuple[object, ...], ...]
    exact: bool

    @property
    def rank(self) -> int:
        return len(self.gram)

    def det(self):
        if self.exact:
            return mat_det([list(r) for r in self.gram])
        import numpy as np

        return float(np.linalg.det([[float(x) for x in r] for r in self.gram]))

    def covolume(self) -> float:
        return math.sqrt(float(self.det()))

    def dual(self) -> "EuclideanLattice":
        if self.exact:
            inv = mat_inv([list(r) for r in self.gram])
            return EuclideanLattice(tuple(tuple(r) for r in inv), True)
        import numpy as np

        inv = np.linalg.inv([[float(x) for x in r] for r in self.gram])
        return EuclideanLattice(tuple(tuple(float(x) for x in r) for r in inv), False)


def euclidean_lattice(gram: Sequence[Sequence]) -> EuclideanLattice:
    n = len(gram)
    exact = all(isinstance(x, Rational) for row in gram for x in row)
    if exact:
        g = [[Fraction(x) for x in row] for row in gram]
        for i in range(n):
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix not symmetric")
        for k in range(1, n + 1):
            minor = mat_det([row[:k] for row in g[:k]])
            if minor <= 0:
                raise ValueError("Gram matrix not positive definite")
        return EuclideanLattice(tuple(tuple(r) for r in g), True)
    import numpy as np

    a = np.array([[float(x) for x in row] for row in gram])
    if not np.allclose(a, a.T):
        raise ValueError("Gram matrix not symmetric")
    if np.linalg.eigvalsh(a).min() <= 0:
        raise ValueError("Gram matrix not positive definite")
    return EuclideanLattice(tuple(tuple(float(x) for x in r) for r in a), False)


@dataclass(frozen=True)
class ThetaReport:
    h0: float
    h1: float
    adeg: float
    truncation_radius: float
    tail_bound: float

    def to_dict(self) -> dict:
        return {
            "h0": self.h0,
            "h1": self.h1,
            "adeg": self.adeg,
            "truncation_radius": self.truncation_radius,
            "tail_bound": self.tail_bound,
        }


def theta_invariants_euclidean(
    lat: EuclideanLattice,
    tail_tol: float = enumeration.DEFAULT_TAIL_TOL,
    budget: int = enumeration.DEFAULT_BUDGET,
) -> ThetaReport:
    h0, radius, tail = enumeration.theta_log_sum(lat.gram, tail_tol, budget)
    h1, radius_d, tail_d = enumeration.theta_log_sum(lat.dual().gram, tail_tol, budget)
    adeg = -math.log(lat.covolume())
    return ThetaReport(h0, h1, adeg, max(radius, radius_d), max(tail, tail_d))


# ---------------------------------------------------------------------------
# Hermitian line bundles


@dataclass(frozen=True)
class HermitianLineBundle:
    """field None means the base is Q and the ideal is a positive rational
    generator; otherwise the ideal is a fractional ideal of O_F.  radii
    has one entry per Archimedean embedding (two for quadratic F, equal
    at the complex conjugate pair)."""

    field: Optional[QuadField]
    ideal: object
    radii: tuple[Fraction, ...]


def make_bundle(field: Optional[QuadField], ideal, radii) -> HermitianLineBundle:
    radii = tuple(Fraction(r) if isinstance(r, Rational) else Fraction(float(r))
                  for r in (radii if isinstance(radii, (tuple, list)) else (radii,)))
    if any(r <= 0 for r in radii):
        raise ValueError("radii must be positive")
    if field is None:
        q = Fraction(ideal)
        if q <= 0:
            raise ValueError("ideal generator must be positive")
        if len(radii) != 1:
            raise ValueError("one Archimedean place over Q")
        return HermitianLineBundle(None, q, radii)
    if not isinstance(ideal, FracIdeal):
        raise TypeError("quadratic field bundles need a FracIdeal")
    if not ideal.is_ideal():
        raise ValueError("basis not closed under multiplication by O_F")
    if len(radii) != 2:
        raise ValueError("two embeddings for a quadratic field")
    if not field.is_real and radii[0] != radii[1]:
        raise ValueError("radii must agree at conjugate complex embeddings")
    return HermitianLineBundle(field, ideal, radii)


def trivial_bundle(field: Optional[QuadField]) -> HermitianLineBundle:
    if field is None:
        return make_bundle(None, 1, (1,))
    return make_bundle(field, FracIdeal.maximal_order(field), (1, 1))


def canonical_bundle(field: Optional[QuadField]) -> HermitianLineBundle:
    """The inverse different with the plain embedding norms; its degree is
    log D_F."""
    if field is None:
        return trivial_bundle(None)
    d = field.d
    sqrt_d = field.elem(0, 1)
    gen = 1 / sqrt_d if d % 4 == 1 else 1 / (2 * sqrt_d)
    ideal = FracIdeal.from_gens(field, [gen])
    return make_bundle(field, ideal, (1, 1))


def sections_basis(bundle: HermitianLineBundle):
    if bundle.field is None:
        return (bundle.ideal,)
    return bundle.ideal.basis_elems()


def adeg_via_section(bundle: HermitianLineBundle, s) -> float:
    """deg = log [L : O_F s] - sum_sigma log ||s||_sigma for s in L."""
    if bundle.field is None:
        s = Fraction(s)
        if s == 0:
            raise ValueError("zero section")
        if (s / bundle.ideal).denominator != 1:
            raise ValueError("section not in the ideal")
        index = abs(s) / bundle.ideal
        return math.log(index) - math.log(abs(s) / bundle.radii[0])
    assert isinstance(s, QFElem)
    if s.is_zero():
        raise ValueError("zero section")
    if not bundle.ideal.contains(s):
        raise ValueError("section not in the ideal")
    index = abs(s.norm()) / bundle.ideal.norm()
    arch = 0.0
    for k, sigma in enumerate(s.embeddings()):
        arch += math.log(abs(sigma) / float(bundle.radii[k]))
    return math.log(index) - arch


def adeg(bundle: HermitianLineBundle) -> float:
    return adeg_via_section(bundle, sections_basis(bundle)[0])


def dual_bundle(bundle: HermitianLineBundle) -> HermitianLineBundle:
    radii = tuple(1 / r for r in bundle.radii)
    if bundle.field is None:
        return make_bundle(None, 1 / bundle.ideal, radii)
    return make_bundle(bundle.field, bundle.ideal.inverse(), radii)


def tensor_bundle(b1: HermitianLineBundle, b2: HermitianLineBundle) -> HermitianLineBundle:
    if (b1.field is None) != (b2.field is None) or (
        b1.field is not None and b1.field.d != b2.field.d
    ):
        raise ValueError("bundles over different fields")
    radii = tuple(r1 * r2 for r1, r2 in zip(b1.radii, b2.radii))
    if b1.field is None:
        return make_bundle(None, b1.ideal * b2.ideal, radii)
    return make_bundle(b1.field, b1.ideal * b2.ideal, radii)


def direct_image(bundle: HermitianLineBundle) -> EuclideanLattice:
    """Underlying Z-lattice with ||v||^2 = sum over embeddings of
    |sigma(v)|^2 / rho_sigma^2.  Exact Gram whenever the radii allow."""
    if bundle.field is None:
        q = bundle.ideal
        return euclidean_lattice([[(q / bundle.radii[0]) ** 2]])
    F = bundle.field
    b = bundle.ideal.basis_elems()
    r1, r2 = bundle.radii
    if F.is_real:
        if r1 == r2:
            rho2 = r1 * r1
            gram = [[(b[i] * b[j]).trace() / rho2 for j in range(2)] for i in range(2)]
            return euclidean_lattice(gram)
        emb = [x.embeddings() for x in b]
        scale = (float(r1) ** 2, float(r2) ** 2)
        gram_f = [
            [sum(emb[i][k] * emb[j][k] / scale[k] for k in range(2))
             for j in range(2)]
            for i in range(2)
        ]
        return euclidean_lattice(gram_f)
    rho2 = r1 * r1
    gram = [[(b[i] * b[j].conj()).trace() / rho2 for j in range(2)] for i in range(2)]
    return euclidean_lattice(gram)


def _leq_with_sqrt(rational_part: Fraction, sqrt_part: Fraction, d: int,
                   bound: Fraction) -> bool:
    """Exact test of rational_part + sqrt_part*sqrt(d) <= bound (d > 0)."""
    rem = bound - rational_part
    if sqrt_part == 0:
        return rem >= 0
    if sqrt_part > 0:
        return rem >= 0 and sqrt_part * sqrt_part * d <= rem * rem
    return rem >= 0 or sqrt_part * sqrt_part * d >= rem * rem


def box_sections(bundle: HermitianLineBundle,
                 budget: int = enumeration.DEFAULT_BUDGET) -> list:
    """All s in the ideal with |sigma(s)| <= rho_sigma at every embedding;
    membership decided exactly."""
    if bundle.field is None:
        q, r = bundle.ideal, bundle.radii[0]
        kmax = int(r / q)
        return [k * q for k in range(-kmax, kmax + 1)]
    F = bundle.field
    b = bundle.ideal.basis_elems()
    lat = direct_image(bundle)
    n = 2
    coords, _ = enumeration.enumerate_vectors(lat.gram, n * (1 + 1e-9), budget)
    out = []
    for m, k in coords:
        x = b[0] * m + b[1] * k
        if F.is_real:
            sq = x * x  # sigma_1(x)^2 = a + b sqrt(d), sigma_2 flips the sign
            ok = _leq_with_sqrt(sq.a, sq.b, F.d, bundle.radii[0] ** 2) and \
                _leq_with_sqrt(sq.a, -sq.b, F.d, bundle.radii[1] ** 2)
        else:
            ok = x.norm() <= bundle.radii[0] ** 2
        if ok:
            out.append(x)
    return out


def h1_via_duality(bundle: HermitianLineBundle,
                   tail_tol: float = enumeration.DEFAULT_TAIL_TOL,
                   budget: int = enumeration.DEFAULT_BUDGET) -> float:
    """h1 of the bundle as h0 of dual tensor canonical."""
    twisted = tensor_bundle(dual_bundle(bundle), canonical_bundle(bundle.field))
    lat = direct_image(twisted)
    h0, _, _ = enumeration.theta_log_sum(lat.gram, tail_tol, budget)
    return h0


def bundle_theta_and_h0ar(
    bundle: HermitianLineBundle,
    tail_tol: float = enumeration.DEFAULT_TAIL_TOL,
    budget: int = enumeration.DEFAULT_BUDGET,
) -> tuple[ThetaReport, float]:
    """Theta invariants of the bundle (h1 via the duality route, checked
    against the direct-image dual) and the Arakelov h0 from the unit box."""
    lat = direct_image(bundle)
    h0, radius, tail = enumeration.theta_log_sum(lat.gram, tail_tol, budget)
    h1_direct, _, _ = enumeration.theta_log_sum(lat.dual().gram, tail_tol, budget)
    h1_dual = h1_via_duality(bundle, tail_tol, budget)
    if abs(h1_direct - h1_dual) > 1e-6:
        raise ArithmeticError(
            f"duality routes disagree: {h1_direct} vs {h1_dual}")
    report = ThetaReport(h0, h1_dual, adeg(bundle), radius, tail)
    h0_ar = math.log(len(box_sections(bundle, budget)))
    return report, h0_ar


# ---------------------------------------------------------------------------
# bounds


def f_bound(t: float) -> float:
    """The comparison function: 1 + t for t >= 0, e^{2 pi t} below 0."""
    return 1.0 + t if t >= 0 else math.exp(2.0 * math.pi * t)


def theta_bounds(t: float, bundle: HermitianLineBundle,
                 tail_tol: float = enumeration.DEFAULT_TAIL_TOL) -> dict:
    """Instantiates the degree-based upper bounds at the given t."""
    n = 1 if bundle.field is None else 2
    log_df = 0.0 if bundle.field is None else math.log(bundle.field.disc)
    report, h0_ar = bundle_theta_and_h0ar(bundle, tail_tol)
    deg = report.adeg
    checks = {}
    checks["h0_small_degree"] = {
        "premise": deg <= t,
        "bound": f_bound(t),
        "value": report.h0,
        "ok": (not deg <= t) or report.h0 <= f_bound(t) + 1e-9,
    }
    premise = deg >= log_df + t
    checks["h1_large_degree"] = {
        "premise": premise,
        "bound": f_bound(-t),
        "value": report.h1,
        "ok": (not premise) or report.h1 <= f_bound(-t) + 1e-9,
    }
    h0_big = deg - 0.5 * log_df + f_bound(-t)
    checks["h0_large_degree"] = {
        "premise": premise,
        "bound": h0_big,
        "value": report.h0,
        "ok": (not premise) or report.h0 <= h0_big + 1e-9,
    }
    checks["h0ar_large_degree"] = {
        "premise": premise,
        "bound": h0_big + math.pi * n,
        "value": h0_ar,
        "ok": (not premise) or h0_ar <= h0_big + math.pi * n + 1e-9,
    }
    return {"f_value": f_bound(t), "report": report, "h0_ar": h0_ar,
            "checks": checks}
