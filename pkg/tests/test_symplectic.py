import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fourgeo.errors import InputError, NoEllipticBlock, Unreachable
from fourgeo.invariants import from_chi_c1sq
from fourgeo.symplectic import (
    E,
    K3_blownup,
    RegionConfig,
    S,
    SumRecipe,
    X,
    Y,
    fiber_sum,
    fold_expanded,
    geo_constant,
    infinite_family,
    plan_point,
    region_membership,
    sum_invariants,
    x_closed_form,
    x_recipe,
    y_from_x_block,
    y_recipe,
)

from strategies import random_recipe


def test_torus_sum_adds_chi_and_c1sq():
    cn = fiber_sum(E(2).invariants, E(3).invariants, 1)
    assert (cn.chi, cn.c1sq) == (5, 0)


def test_genus_two_sum():
    cn = fiber_sum(S.invariants, S.invariants, 2)
    assert (cn.e, cn.sigma) == (S.invariants.e * 2 + 4, S.invariants.sigma * 2)


def test_block_values():
    assert (S.chi, S.c1sq) == (2, 1)
    assert (X(1).chi, X(1).c1sq) == (56, 405)
    assert (Y(1).chi, Y(1).c1sq) == (60, 419)
    assert K3_blownup(2).invariants == from_chi_c1sq(2, -2)
    assert not X(1).simply_connected and Y(1).simply_connected


@pytest.mark.parametrize("i", range(1, 11))
def test_y_is_x_folded_with_blown_up_k3(i):
    assert y_from_x_block(i) == Y(i).invariants


@given(st.integers(1, 40), st.integers(0, 8), st.integers(2, 40))
def test_x_family(k, r, n):
    recipe = x_recipe(k, r, n)
    cn = fold_expanded(recipe)
    assert (cn.chi, cn.c1sq) == x_closed_form(k, r, n) == (3 * k + 2 * r + n - 1, 9 * k + r - 8)
    assert sum_invariants(recipe) == cn


def test_run_arithmetic_matches_expansion(rng):
    for _ in range(200):
        recipe = random_recipe(rng)
        assert sum_invariants(recipe) == fold_expanded(recipe)


def test_run_arithmetic_at_scale():
    huge = 10**280
    recipe = SumRecipe.build([(E(3), 1, 1), (Y(2), huge, 1), (S, huge, 1), (S, 5, 2)], blowups=7)
    cn = sum_invariants(recipe)
    small = sum_invariants(SumRecipe.build([(E(3), 1, 1), (Y(2), 1, 1), (S, 1, 1), (S, 5, 2)], blowups=7))
    assert cn.chi - small.chi == (huge - 1) * (Y(2).chi + S.chi)
    assert cn.c1sq - small.c1sq == (huge - 1) * (Y(2).c1sq + S.c1sq)


def test_recipe_validation():
    with pytest.raises(InputError):
        SumRecipe.build([(E(2), 1, 1), (Y(1), 1, 2)])
    with pytest.raises(InputError):
        SumRecipe.build([(E(2), 1, 1), (S, 2, 2)])
    with pytest.raises(InputError):
        SumRecipe.build([(E(2), 0, 1)])
    with pytest.raises(InputError):
        SumRecipe.build([(E(2), 1, 3)])
    with pytest.raises(InputError):
        SumRecipe.build([])


def test_json_round_trip(rng):
    for _ in range(20):
        recipe = random_recipe(rng)
        assert SumRecipe.from_json(recipe.to_json()) == recipe


@pytest.mark.parametrize(
    "chi, c1sq",
    [(2, 0), (10, 0), (4, 1), (100, 249), (200, 549), (500, 2000), (10000, 60000)],
)
def test_planner_examples(chi, c1sq):
    recipe = plan_point(chi, c1sq)
    assert all(r.block.minimal for r in recipe.runs)
    cn = fold_expanded(recipe) if recipe.block_count < 10**4 else sum_invariants(recipe)
    assert (cn.chi, cn.c1sq) == (chi, c1sq)


@pytest.mark.parametrize("chi, c1sq", [(1, 0), (1, 5), (3, 1), (60, 419)])
def test_planner_unreachable(chi, c1sq):
    with pytest.raises(Unreachable):
        plan_point(chi, c1sq)


def test_planner_input_errors():
    with pytest.raises(InputError):
        plan_point(0, 1)
    with pytest.raises(InputError):
        plan_point(5, -1)


@given(st.integers(2700, 10**6), st.data())
@settings(max_examples=100, deadline=None)
def test_planner_covers_geo_region(chi, data):
    top = int((Fraction(17, 2)) * chi - geo_constant(Fraction(1, 2)))
    if top < 0:
        return
    c1sq = data.draw(st.integers(0, top))
    assert "geo" in region_membership(chi, c1sq)
    cn = sum_invariants(plan_point(chi, c1sq))
    assert (cn.chi, cn.c1sq) == (chi, c1sq)


def test_geo_constant():
    assert geo_constant(Fraction(1, 2)) == 22913
    with pytest.raises(InputError):
        geo_constant(Fraction(1, 10**6), (1, 2))


def test_regions():
    assert region_membership(100, 249) >= {"wedge", "wedge-6", "bmy"}
    assert "wedge" not in region_membership(100, 250)
    assert "wedge" in region_membership(20, 9)
    assert "wedge" not in region_membership(20, 10)
    assert region_membership(1, 10) == set()
    assert "non-einstein" in region_membership(10**6, 5 * 10**6)
    assert "non-einstein" not in region_membership(10**6, 6 * 10**6)
    assert "wedge-6" in region_membership(20, 48)
    cfg = RegionConfig(epsilon=Fraction(1, 2), epsilon_constant=0)
    assert "geo" in region_membership(10, 85, cfg)


def test_infinite_family():
    base = plan_point(100, 249)
    family = infinite_family(base, (2, 3, 5))
    assert len({m.describe() for m in family}) == 3
    for member, p in zip(family, (2, 3, 5)):
        assert sum_invariants(member) == sum_invariants(base)
        assert f"log({p})" in member.tags
        assert member.simply_connected
    with pytest.raises(NoEllipticBlock):
        infinite_family(SumRecipe.build([(S, 3, 1)]), (2,))
    with pytest.raises(InputError):
        infinite_family(base, (2, 2))


def test_y_recipe():
    cn = sum_invariants(y_recipe(3, 2, 1, 4, i=2))
    assert cn.chi == 3 * Y(2).chi + 3 * 2 + 2 * 1 + 4 - 1
    assert cn.c1sq == 3 * Y(2).c1sq + 9 * 2 + 1 - 8
