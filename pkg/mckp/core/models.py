## How to represent a choice of items?
# Option1: an n-length 0/1 vector x with one 1 per group.
# Option2: one item index per group.
# Currently using option2: "exactly one item per group" holds by
# construction and X stays the Cartesian product of the groups.
#
# Values are kept as Python numbers. An instance whose profits, costs and
# budget are all integral stores ints and every solver works on it in exact
# integer/rational arithmetic; anything else stores floats and the solvers
# compare with a relative tolerance.
import logging
import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

from mckp.core.errors import (
    EmptyGroup, EmptyInstance, IndexOutOfRange, MckpError, NegativeValue,
)

logger = logging.getLogger(__name__)

REL_TOL = 1e-9

# int64 arithmetic on scores stays exact below this magnitude
INT64_SAFE = 2**62


class ValueClass(Enum):
    INTEGRAL = 'all-integral'
    REAL = 'real'


def isclose(x, y, rel_tol=REL_TOL):
    """x == y up to rel_tol * max(1, |x|, |y|)."""
    return abs(x - y) <= rel_tol * max(1.0, abs(x), abs(y))


def ratio(num, den, exact):
    """num / den as a Fraction on the exact path, float otherwise."""
    if exact:
        return Fraction(num, den)
    return num / den


def _is_integral(value):
    if isinstance(value, numbers.Integral):
        return True
    if isinstance(value, Fraction):
        return value.denominator == 1
    return float(value).is_integer()


def _check_value(value, what):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise MckpError(f"{what} is not a real number: {value!r}")
    if not math.isfinite(value):
        raise MckpError(f"{what} is not finite: {value!r}")
    if value < 0:
        raise NegativeValue(f"{what} is negative: {value!r}")
    return value.item() if isinstance(value, np.generic) else value


@dataclass(frozen=True)
class Group:
    '''One set of mutually exclusive items; exactly one gets picked.'''
    profits: tuple
    costs: tuple

    def __post_init__(self):
        if len(self.profits) != len(self.costs):
            raise ValueError("profits and costs differ in length")
        if not self.profits:
            raise EmptyGroup("group has no items")

    @property
    def n(self):
        return len(self.profits)

    @property
    def integral(self):
        return all(isinstance(v, numbers.Integral) for v in self.profits + self.costs)

    def items(self):
        return list(zip(self.profits, self.costs))

    def __repr__(self):
        return f"<Group {self.n} items {self.items()}>"


@dataclass(frozen=True)
class Instance:
    groups: tuple
    budget: float
    value_class: ValueClass

    def __post_init__(self):
        if not self.groups:
            raise EmptyInstance("instance has no groups")

    @property
    def k(self):
        return len(self.groups)

    @property
    def n(self):
        return sum(g.n for g in self.groups)

    @property
    def max_n(self):
        return max(g.n for g in self.groups)

    @property
    def integral(self):
        return self.value_class is ValueClass.INTEGRAL

    @cached_property
    def matrices(self):
        return as_matrices(self.groups, self.integral)

    def __repr__(self):
        return f"<Instance k={self.k} n={self.n} b={self.budget} ({self.value_class.value})>"


@dataclass(frozen=True)
class ChoiceVector:
    '''One item index per group.'''
    picks: tuple

    def __post_init__(self):
        object.__setattr__(self, 'picks', tuple(int(j) for j in self.picks))

    def __len__(self):
        return len(self.picks)

    def __iter__(self):
        return iter(self.picks)

    def __getitem__(self, i):
        return self.picks[i]


@dataclass(frozen=True)
class Outcome:
    """Point (p^T x, -c^T x) in objective space; both coordinates are maximized."""
    f1: float
    f2: float

    @property
    def cost(self):
        return -self.f2

    def dominates(self, other):
        return (self.f1 >= other.f1 and self.f2 >= other.f2
                and (self.f1 > other.f1 or self.f2 > other.f2))

    def as_tuple(self):
        return (self.f1, self.f2)


@dataclass(frozen=True)
class GlobalBounds:
    c_min: float
    c_max: float
    p_max: float
    c_min_choice: ChoiceVector
    c_max_choice: ChoiceVector
    p_max_choice: ChoiceVector


def as_matrices(groups, integral):
    """(P, C, mask): len(groups) x max_n profit and cost matrices, zero padded.

    mask[i, j] is True where item j exists in group i. Integral data gets
    int64 matrices, or object matrices of Python ints for huge values.
    """
    k, width = len(groups), max(g.n for g in groups)
    if not integral:
        dtype = np.float64
    elif max(max(max(g.profits), max(g.costs)) for g in groups) < INT64_SAFE:
        dtype = np.int64
    else:
        dtype = object

    P = np.zeros((k, width), dtype=dtype)
    C = np.zeros((k, width), dtype=dtype)
    mask = np.zeros((k, width), dtype=bool)
    for i, g in enumerate(groups):
        P[i, :g.n] = g.profits
        C[i, :g.n] = g.costs
        mask[i, :g.n] = True
    return P, C, mask


def validate_instance(raw_groups, budget):
    """Build an Instance from raw [(profit, cost), ...] groups and a budget."""
    raw_groups = [list(g) for g in raw_groups]
    if not raw_groups:
        raise EmptyInstance("instance has no groups")

    budget = _check_value(budget, "budget")
    checked = []
    for i, raw in enumerate(raw_groups):
        if not raw:
            raise EmptyGroup(f"group {i} has no items")
        items = []
        for j, item in enumerate(raw):
            try:
                p, c = item
            except (TypeError, ValueError):
                raise MckpError(f"item {j} of group {i} is not a (profit, cost) pair: {item!r}")
            items.append((_check_value(p, f"profit of item {j} in group {i}"),
                          _check_value(c, f"cost of item {j} in group {i}")))
        checked.append(items)

    integral = _is_integral(budget) and all(
        _is_integral(p) and _is_integral(c) for items in checked for p, c in items
    )
    cast = int if integral else float
    groups = tuple(
        Group(tuple(cast(p) for p, _ in items), tuple(cast(c) for _, c in items))
        for items in checked
    )
    instance = Instance(groups, cast(budget),
                        ValueClass.INTEGRAL if integral else ValueClass.REAL)
    logger.debug(f"Validated {instance}")
    return instance


def _check_choice(instance, choice):
    if len(choice) != instance.k:
        raise IndexOutOfRange(f"choice has {len(choice)} picks for {instance.k} groups")
    for i, (g, j) in enumerate(zip(instance.groups, choice)):
        if not 0 <= j < g.n:
            raise IndexOutOfRange(f"pick {j} out of range for group {i} with {g.n} items")


def evaluate(instance, choice):
    _check_choice(instance, choice)
    f1 = sum(g.profits[j] for g, j in zip(instance.groups, choice))
    f2 = -sum(g.costs[j] for g, j in zip(instance.groups, choice))
    return Outcome(f1, f2)


def is_feasible(instance, choice):
    return -evaluate(instance, choice).f2 <= instance.budget


def global_bounds(instance):
    """C_min, C_max and P_max with lowest-index witnesses."""
    cmin, cmax, pmax = [], [], []
    for g in instance.groups:
        idx = range(g.n)
        cmin.append(min(idx, key=g.costs.__getitem__))
        cmax.append(max(idx, key=lambda j: (g.costs[j], -j)))
        pmax.append(max(idx, key=lambda j: (g.profits[j], -j)))

    cmin, cmax, pmax = ChoiceVector(cmin), ChoiceVector(cmax), ChoiceVector(pmax)
    return GlobalBounds(
        c_min=evaluate(instance, cmin).cost,
        c_max=evaluate(instance, cmax).cost,
        p_max=evaluate(instance, pmax).f1,
        c_min_choice=cmin,
        c_max_choice=cmax,
        p_max_choice=pmax,
    )
