import random
from fractions import Fraction as F

import pytest

from helpers import matching_pennies, vertex_game_value
from l0simons.errors import DomainError, ResourceError
from l0simons.fileio import generate
from l0simons.instance import Selection
from l0simons.l0 import Rv
from l0simons.oracle import GridSpec, brute_game, brute_lhs, brute_rhs, entry_range


def test_grid_spec():
    with pytest.raises(DomainError):
        GridSpec(0)


def test_brute_game_examples():
    assert brute_game([[1, 0], [0, 1]], GridSpec(2)) == F(1, 2)
    assert brute_game([[1, 1], [0, 0]], GridSpec(1)) == 0


def test_brute_game_sandwich():
    rng = random.Random(100)
    for _ in range(100):
        r, c = rng.randint(1, 3), rng.randint(1, 4)
        m = [[F(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(c)] for _ in range(r)]
        exact = vertex_game_value(m)
        spread = max(max(row) for row in m) - min(min(row) for row in m)
        assert 0 <= brute_game(m, GridSpec(200)) - exact <= spread / 200


def test_refinement_monotone():
    rng = random.Random(5)
    for _ in range(20):
        m = [[F(rng.randint(-9, 9), 3) for _ in range(3)] for _ in range(3)]
        vals = [brute_game(m, GridSpec(k)) for k in (5, 10, 20, 40)]
        assert vals == sorted(vals, reverse=True)


def test_caps():
    with pytest.raises(ResourceError):
        brute_game([[0]] * 6, GridSpec(2))
    with pytest.raises(ResourceError):
        brute_rhs(generate(0, (4, 2, 0, 1)), GridSpec(2))
    with pytest.raises(ResourceError):
        brute_lhs(generate(0, (6, 5, 0, 1)), cap=100)


def test_brute_rhs_matching_pennies():
    assert brute_rhs(matching_pennies(), GridSpec(2)).values == (F(1, 2),)


def test_brute_lhs_cases():
    inst = matching_pennies(selections=(Selection(("b",)),))
    assert brute_lhs(inst).values == (F(1),)
    g = generate(3, (2, 3, 0, 1))
    f = g.functions.cycle[0]
    z = Selection(("b2", "b3"))
    inst = type(g)(g.space, g.base_points, g.functions, g.epsilon, (z,))
    assert brute_lhs(inst) == Rv(g.space, (f.table["b2"].values[0], f.table["b3"].values[1]))


def test_entry_range():
    assert entry_range(matching_pennies()).values == (F(1),)
