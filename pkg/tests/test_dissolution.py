import random

import pytest
from hypothesis import given, settings, strategies as st

from fourgeo.dissolution import MAX_BLOCKS, dissolve, expected_x_shape, expected_y_shape
from fourgeo.errors import InputError, SpinRecipe
from fourgeo.symplectic import E, S, SumRecipe, X, Y, sum_invariants, x_recipe, y_recipe

from strategies import random_recipe

ATOMS = {"CP2": (3, 1), "CP2bar": (3, -1), "S2xS2": (4, 0)}


def connected_sum(shape, table):
    """(e, sigma) of a connected sum, recomputed from the summand names."""
    e = sigma = 0
    for name, n in shape.items():
        pe, ps = ATOMS[name] if name in ATOMS else (table[name].invariants.e, table[name].invariants.sigma)
        e += n * pe
        sigma += n * ps
    return e - 2 * (sum(shape.values()) - 1), sigma


def assert_conserved(recipe, expr):
    base = sum_invariants(recipe)
    target = (base.e + 1, base.sigma + 1)
    assert expr.steps and expr.steps[0].rule == "stabilize"
    assert all((s.e, s.sigma) == target for s in expr.steps)
    assert connected_sum(expr.shape(), expr.block_table) == target


@pytest.mark.parametrize("k, r, n", [(1, 0, 2), (2, 5, 3), (4, 8, 7), (10, 3, 2)])
def test_x_shape(k, r, n):
    expr = dissolve(x_recipe(k, r, n))
    assert expr.shape() == {"S": k + r, "S2xS2": 3 * k + r + 2 * n - 2, "CP2bar": 8 * n - 1}
    assert expr.shape() == expected_x_shape(k, r, n)
    assert expr.describe() == f"{k + r}S # {3 * k + r + 2 * n - 2}S2xS2 # {8 * n - 1}CP2bar"


@given(st.integers(1, 4), st.integers(1, 6), st.integers(0, 8), st.integers(2, 6), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_y_shape(l, k, r, n, i):
    recipe = y_recipe(l, k, r, n, i=i)
    expr = dissolve(recipe)
    assert expr.shape() == expected_y_shape(l, k, r, n, i=i)
    assert_conserved(recipe, expr)


def test_random_recipes_conserve(rng):
    for _ in range(100):
        recipe = random_recipe(rng)
        assert_conserved(recipe, dissolve(recipe))


@given(st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_random_recipes_property(rnd):
    recipe = random_recipe(random.Random(rnd.random()))
    expr = dissolve(recipe)
    assert_conserved(recipe, expr)
    assert all(expr.block_table[n].kind in ("S", "Y") for n in expr.shape() if n not in ATOMS)


def test_elliptic_alone():
    expr = dissolve(SumRecipe.build([(E(3), 1, 1)]))
    assert expr.shape() == {"S2xS2": 6, "CP2bar": 23}


def test_k3_blown_up():
    expr = dissolve(SumRecipe.build([(E(2), 1, 1), (S, 1, 1)], blowups=2))
    assert_conserved(SumRecipe.build([(E(2), 1, 1), (S, 1, 1)], blowups=2), expr)


def test_pending_resolving_numbers():
    expr = dissolve(y_recipe(1, 1, 0, 2))
    assert any("S" in p for p in expr.pending) and any("Y(1)" in p for p in expr.pending)


def test_errors():
    with pytest.raises(SpinRecipe):
        dissolve(SumRecipe.build([(E(2), 1, 1)]))
    with pytest.raises(InputError):
        dissolve(SumRecipe.build([(E(2), 1, 1), (X(1), 1, 1)]))
    with pytest.raises(InputError):
        dissolve(SumRecipe.build([(E(3), 1, 1), (S, MAX_BLOCKS, 1)]))
