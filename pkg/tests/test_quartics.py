from fractions import Fraction

import pytest

from alk import quartics
from alk.intarith import is_square_fraction
from alk.nfpoly import NumberField, poly_disc_quartic
from alk.toralsets import classify_galois_type


def test_cyclotomic_tower_presentation():
    tower = quartics.zeta5_tower()
    assert tower.base.d == 5
    assert tower.theta_min_poly == (Fraction(5), Fraction(0), Fraction(5),
                                    Fraction(0), Fraction(1))
    assert tower.declared_DK == 125
    assert classify_galois_type(tower) == "cyclic"


def test_conductor_sixteen_tower():
    tower = quartics.sqrt2plus_tower()
    assert tower.base.d == 2
    assert tower.declared_DK == 2048
    assert classify_galois_type(tower) == "cyclic"


def test_biquadratic_tower_classification_and_disc():
    tower = quartics.biquadratic_tower(2, 3)
    assert classify_galois_type(tower) == "biquadratic"
    # power basis discriminant differs from the field one by a square
    ratio = Fraction(poly_disc_quartic(tower.theta_min_poly), tower.declared_DK)
    assert ratio > 0 and is_square_fraction(ratio)


def test_dihedral_tower_classification():
    tower = quartics.dihedral_tower(2, 1, 1)
    assert classify_galois_type(tower) == "dihedral"
    assert tower.conj_polys is None


def test_biquadratic_rejects_equal_radicands():
    with pytest.raises(ValueError):
        quartics.biquadratic_tower(2, 2)


def test_sqrt_d_coordinates_square_to_d():
    for tower in (quartics.zeta5_tower(), quartics.sqrt2plus_tower(),
                  quartics.biquadratic_tower(5, 3),
                  quartics.gaussian_period_tower(13)):
        K = NumberField(tower.theta_min_poly)
        sd = K.elem(tower.sqrt_d_coords)
        assert sd * sd == Fraction(tower.base.d)


def test_gaussian_period_towers_are_cyclic_with_cube_discriminant():
    for p in (13, 17, 29):
        tower = quartics.gaussian_period_tower(p)
        assert tower.base.d == p
        assert tower.declared_DK == p ** 3
        assert classify_galois_type(tower) == "cyclic"
        ratio = Fraction(poly_disc_quartic(tower.theta_min_poly), p ** 3)
        assert ratio > 0 and is_square_fraction(ratio)


def test_conjugation_polynomials_generate_order_four():
    from alk.git4 import galois_image_permutations, perm_compose, regular_embedding

    emb = regular_embedding(quartics.gaussian_period_tower(13))
    image = galois_image_permutations(emb)
    gen = image[2]  # the tau slot of the (id, tau^2, tau, tau^3) ordering
    g2 = perm_compose(gen, gen)
    g4 = perm_compose(g2, g2)
    assert g2 != (0, 1, 2, 3) and g4 == (0, 1, 2, 3)
