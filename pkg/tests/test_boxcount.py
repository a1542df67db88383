import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alk.boxcount import (
    count_box,
    count_box_naive,
    counting_bound_check,
    make_radius_family,
    norm_of_family,
)
from alk.numfield import Place, finite_places, make_quad_field


def test_gaussian_integers_in_small_disc():
    F = make_quad_field(-1)
    fam = make_radius_family(F, [], [Fraction(2)])
    assert count_box(F, fam) == 9
    assert count_box_naive(F, fam) == 9


def test_golden_units_in_unit_box():
    F = make_quad_field(5)
    fam = make_radius_family(F, [], [Fraction(1), Fraction(1)])
    assert count_box(F, fam) == 3
    assert count_box_naive(F, fam) == 3


def test_denominator_at_a_split_place_enlarges_the_count():
    F = make_quad_field(-1)
    v1, _ = finite_places(F, 5)
    fam = make_radius_family(F, [(v1, Fraction(5))], [Fraction(2)])
    got = count_box(F, fam)
    assert got == count_box_naive(F, fam)
    assert got == 37


def test_rational_base_box():
    fam = make_radius_family(None, [], [Fraction(7, 2)])
    assert count_box(None, fam) == 7
    assert count_box_naive(None, fam) == 7


def test_radius_must_lie_in_the_value_group():
    F = make_quad_field(5)
    inert = Place(F, "finite", 2, "inert")  # residue size 4
    with pytest.raises(ValueError):
        make_radius_family(F, [(inert, Fraction(2))], [1, 1])
    make_radius_family(F, [(inert, Fraction(4))], [1, 1])


def test_norm_of_family_multiplies_all_radii():
    F = make_quad_field(-1)
    v1, v2 = finite_places(F, 5)
    fam = make_radius_family(F, [(v1, Fraction(5)), (v2, Fraction(1, 5))],
                             [Fraction(3)])
    assert norm_of_family(fam) == 3


def test_two_counting_routes_agree_on_random_families():
    rng = random.Random(19)
    for d in (-1, 2, 5, -3):
        F = make_quad_field(d)
        for _ in range(8):
            finite = []
            for p in (2, 3, 5):
                if rng.random() < 0.4:
                    place = finite_places(F, p)[0]
                    e = rng.choice([-1, 1])
                    finite.append((place, Fraction(place.residue_size) ** e))
            if F.is_real:
                inf = [Fraction(rng.randint(1, 5)), Fraction(rng.randint(1, 5))]
            else:
                inf = [Fraction(rng.randint(1, 8))]
            fam = make_radius_family(F, finite, inf)
            assert count_box(F, fam) == count_box_naive(F, fam)


@settings(max_examples=25, deadline=None)
@given(r=st.integers(1, 12))
def test_count_is_odd_and_monotone_in_the_radius(r):
    F = make_quad_field(-1)
    c1 = count_box(F, make_radius_family(F, [], [Fraction(r)]))
    c2 = count_box(F, make_radius_family(F, [], [Fraction(r + 1)]))
    assert c1 % 2 == 1 and c2 % 2 == 1
    assert c1 <= c2


def test_bound_check_reports_hypothesis_violation():
    F = make_quad_field(-1)
    fam = make_radius_family(F, [], [Fraction(1)])
    res = counting_bound_check(F, fam, Fraction(10))  # norm 1 < 10 * disc
    assert res["hypothesis_ok"] is False
    assert res["status"] == "hypothesis_violated"
    assert res["passed"] is None


def test_bound_check_passes_in_hypothesis():
    F = make_quad_field(-1)
    fam = make_radius_family(F, [], [Fraction(8)])
    res = counting_bound_check(F, fam, Fraction(1))  # norm 8 >= disc 4
    assert res["hypothesis_ok"] and res["passed"]
    assert res["count"] <= res["bound"]
