import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings

from mckp.core.errors import (
    EmptyGroup, EmptyInstance, IndexOutOfRange, MckpError, NegativeValue,
)
from mckp.core.models import (
    ChoiceVector, Outcome, ValueClass, evaluate, global_bounds, is_feasible,
    isclose, validate_instance,
)
from tests.strategies import instances


def test_validate_e1(e1):
    assert e1.k == 2
    assert e1.n == 4
    assert e1.max_n == 2
    assert e1.budget == 6
    assert e1.value_class is ValueClass.INTEGRAL
    assert e1.groups[0].profits == (10, 7)
    assert e1.groups[1].costs == (5, 1)


def test_integral_floats_become_ints():
    inst = validate_instance([[(10.0, 4), (7, 2.0)]], 6.0)
    assert inst.integral
    assert all(type(v) is int for v in inst.groups[0].profits + inst.groups[0].costs)
    assert type(inst.budget) is int


def test_half_budget_makes_instance_real():
    inst = validate_instance([[(10, 4), (7, 2)]], 6.5)
    assert inst.value_class is ValueClass.REAL
    assert inst.groups[0].profits == (10.0, 7.0)
    assert all(type(v) is float for v in inst.groups[0].costs)


def test_numpy_values_accepted():
    inst = validate_instance([[(np.int64(3), np.int32(1))]], np.int64(2))
    assert inst.integral
    assert type(inst.groups[0].profits[0]) is int


@pytest.mark.parametrize('groups, budget, error', [
    ([], 5, EmptyInstance),
    ([[(1, 1)], []], 5, EmptyGroup),
    ([[(1, -1)]], 5, NegativeValue),
    ([[(-1, 1)]], 5, NegativeValue),
    ([[(1, 1)]], -5, NegativeValue),
    ([[(1, float('nan'))]], 5, MckpError),
    ([[(1, 1)]], math.inf, MckpError),
    ([[(1, True)]], 5, MckpError),
    ([[(1, '2')]], 5, MckpError),
    ([[(1, 2, 3)]], 5, MckpError),
])
def test_validate_rejects(groups, budget, error):
    with pytest.raises(error):
        validate_instance(groups, budget)


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate_instance([], 1)


def test_matrices_are_padded():
    inst = validate_instance([[(1, 2), (3, 4), (5, 6)], [(7, 8)]], 10)
    P, C, mask = inst.matrices
    assert P.shape == C.shape == mask.shape == (2, 3)
    assert P.dtype == np.int64
    assert mask.tolist() == [[True, True, True], [True, False, False]]
    assert C[1].tolist() == [8, 0, 0]


def test_huge_values_use_object_matrices():
    inst = validate_instance([[(2**70, 1), (1, 2**65)]], 2**66)
    P, C, _ = inst.matrices
    assert P.dtype == object
    assert P[0, 0] == 2**70


def test_real_matrices_are_float():
    inst = validate_instance([[(1.5, 2)]], 3)
    assert inst.matrices[0].dtype == np.float64


@pytest.mark.parametrize('picks, outcome', [
    ((0, 0), (16, -9)),
    ((0, 1), (13, -5)),
    ((1, 0), (13, -7)),
    ((1, 1), (10, -3)),
])
def test_evaluate_e1(e1, picks, outcome):
    assert evaluate(e1, ChoiceVector(picks)).as_tuple() == outcome


def test_evaluate_rejects_bad_choices(e1):
    with pytest.raises(IndexOutOfRange):
        evaluate(e1, ChoiceVector((0, 2)))
    with pytest.raises(IndexError):
        evaluate(e1, ChoiceVector((0, -1)))
    with pytest.raises(IndexOutOfRange):
        evaluate(e1, ChoiceVector((0,)))


def test_is_feasible(e1):
    assert is_feasible(e1, ChoiceVector((0, 1)))
    assert not is_feasible(e1, ChoiceVector((1, 0)))
    assert is_feasible(e1, ChoiceVector((1, 1)))


def test_choice_vector_normalizes():
    choice = ChoiceVector(np.array([1, 0]))
    assert choice.picks == (1, 0)
    assert all(type(j) is int for j in choice)
    assert choice == ChoiceVector([1, 0])


def test_outcome_dominates():
    assert Outcome(13, -5).dominates(Outcome(13, -7))
    assert Outcome(13, -5).dominates(Outcome(12, -5))
    assert not Outcome(13, -5).dominates(Outcome(13, -5))
    assert not Outcome(16, -9).dominates(Outcome(13, -5))
    assert Outcome(13, -5).cost == 5


def test_global_bounds_e1(e1):
    bounds = global_bounds(e1)
    assert bounds.c_min == 3
    assert bounds.c_max == 9
    assert bounds.p_max == 16
    assert bounds.c_min_choice.picks == (1, 1)
    assert bounds.p_max_choice.picks == (0, 0)


def test_global_bounds_lowest_index_witness():
    inst = validate_instance([[(5, 3), (5, 3), (2, 1)]], 3)
    bounds = global_bounds(inst)
    assert bounds.p_max_choice.picks == (0,)
    assert bounds.c_max_choice.picks == (0,)
    assert bounds.c_min_choice.picks == (2,)


def test_isclose():
    assert isclose(1.0, 1.0 + 1e-12)
    assert not isclose(1.0, 1.001)
    assert isclose(0.0, 1e-10)
    assert isclose(1e12, 1e12 + 1)


@settings(max_examples=50, deadline=None)
@given(instances())
def test_global_bounds_match_enumeration(inst):
    outcomes = [evaluate(inst, ChoiceVector(c))
                for c in itertools.product(*(range(g.n) for g in inst.groups))]
    bounds = global_bounds(inst)
    assert bounds.c_min == min(o.cost for o in outcomes)
    assert bounds.c_max == max(o.cost for o in outcomes)
    assert bounds.p_max == max(o.f1 for o in outcomes)
