"""Weighted-sum scalarizations of the profit/cost bi-objective problem.

Maximizing wp * p^T x - wc * c^T x over X decomposes into one argmax per
group, so every problem here is solved in a single pass over the items.
On integral data with integer weights scores are compared exactly; in every
other case two scores tie when they agree up to rel_tol.
"""

import logging
import numbers
from dataclasses import dataclass
from typing import Optional

import numpy as np

from mckp.core.errors import DegenerateObjective
from mckp.core.models import (
    INT64_SAFE, REL_TOL, ChoiceVector, as_matrices, evaluate,
)

logger = logging.getLogger(__name__)

# |S| grows as a product of tie-set sizes; reported values saturate here
S_CARDINALITY_CAP = 2**63 - 1


@dataclass(frozen=True)
class ScalarWeights:
    '''Maximize wp * profit - wc * cost.'''
    wp: float
    wc: float

    def __post_init__(self):
        for name in ('wp', 'wc'):
            value = getattr(self, name)
            if isinstance(value, np.generic):
                object.__setattr__(self, name, value.item())
        if self.wp < 0 or self.wc < 0:
            raise ValueError(f"weights must be nonnegative, got ({self.wp}, {self.wc})")
        if self.wp + self.wc <= 0:
            raise ValueError("weights must not both be zero")

    @classmethod
    def from_lambda(cls, lam):
        if not 0 < lam < 1:
            raise ValueError(f"lambda must lie in (0, 1), got {lam}")
        return cls(lam, 1 - lam)

    @property
    def integral(self):
        return isinstance(self.wp, numbers.Integral) and isinstance(self.wc, numbers.Integral)

    def score(self, outcome):
        return self.wp * outcome.f1 + self.wc * outcome.f2


@dataclass(frozen=True)
class GroupScalarResult:
    v: float
    best_j: int
    ties: tuple


@dataclass(frozen=True)
class ScalarizedSolution:
    value: float
    representative: ChoiceVector
    per_group: tuple
    s_cardinality: int
    weights: ScalarWeights
    exact: bool

    @property
    def ties(self):
        return [r.ties for r in self.per_group]


@dataclass(frozen=True)
class SubmaxProfile:
    f1_max: float
    f2_max: float
    f1_at_f2max: float
    f2_at_f1max: float
    decr_p: Optional[float]
    decr_negc: Optional[float]
    vbar1: Optional[float]
    vbar2: Optional[float]
    x1: ChoiceVector
    x2: ChoiceVector
    exact: bool

    @property
    def degenerate(self):
        return (self.decr_p is None or self.decr_negc is None
                or self.f2_max == self.f2_at_f1max
                or self.f1_max == self.f1_at_f2max)


def _scores(P, C, mask, weights, exact):
    wp, wc = weights.wp, weights.wc
    if exact:
        bound = wp * int(P.max()) + wc * int(C.max())
        if P.dtype != object and bound < INT64_SAFE:
            S = wp * P - wc * C
        else:
            S = wp * P.astype(object) - wc * C.astype(object)
        fill = -bound - 1
    else:
        S = wp * P.astype(np.float64) - wc * C.astype(np.float64)
        fill = -np.inf
    return np.where(mask, S, fill)


def _ties(S, v, mask, exact, rel_tol):
    if exact:
        return mask & (S == v[:, None])
    vv = v[:, None]
    with np.errstate(invalid='ignore'):
        near = (vv - S) <= rel_tol * np.maximum(1.0, np.maximum(np.abs(S), np.abs(vv)))
    return mask & near


def _solve_rows(P, C, mask, weights, exact, rel_tol):
    S = _scores(P, C, mask, weights, exact)
    v = S.max(axis=1)
    T = _ties(S, v, mask, exact, rel_tol)
    best = T.argmax(axis=1)
    return [
        GroupScalarResult(vi, int(bj), tuple(np.flatnonzero(row).tolist()))
        for vi, bj, row in zip(v.tolist(), best, T)
    ]


def group_scalar_argmax(group, weights, rel_tol=REL_TOL):
    exact = group.integral and weights.integral
    P, C, mask = as_matrices([group], group.integral)
    return _solve_rows(P, C, mask, weights, exact, rel_tol)[0]


def solve_scalarized(instance, weights, rel_tol=REL_TOL):
    exact = instance.integral and weights.integral
    P, C, mask = instance.matrices
    per_group = _solve_rows(P, C, mask, weights, exact, rel_tol)

    card = 1
    for r in per_group:
        card *= len(r.ties)
        if card >= S_CARDINALITY_CAP:
            card = S_CARDINALITY_CAP
            break

    return ScalarizedSolution(
        value=sum(r.v for r in per_group),
        representative=ChoiceVector(r.best_j for r in per_group),
        per_group=tuple(per_group),
        s_cardinality=card,
        weights=weights,
        exact=exact,
    )


def _smallest_gap(top, below, has):
    if not has.any():
        return None
    return min((top - below)[has].tolist())


def submax_profile(instance):
    """Extreme values of both objectives, their refined witnesses and decr(p), decr(-c).

    x1 maximizes profit and, among profit maximizers, minimizes cost;
    x2 minimizes cost and, among cost minimizers, maximizes profit. Both
    refinements are per group since the objectives are separable.
    """
    P, C, mask = instance.matrices
    big = C.max() + 1

    pmax = np.where(mask, P, -1).max(axis=1)
    top = mask & (P == pmax[:, None])
    x1 = np.where(top, C, big).argmin(axis=1)

    cmin = np.where(mask, C, big).min(axis=1)
    low = mask & (C == cmin[:, None])
    x2 = np.where(low, P, -1).argmax(axis=1)

    # submax: largest value strictly below the group maximum
    below = mask & (P < pmax[:, None])
    psub = np.where(below, P, -1).max(axis=1)
    decr_p = _smallest_gap(pmax, psub, below.any(axis=1))

    above = mask & (C > cmin[:, None])
    csub = np.where(above, C, big).min(axis=1)
    decr_negc = _smallest_gap(csub, cmin, above.any(axis=1))

    x1, x2 = ChoiceVector(x1.tolist()), ChoiceVector(x2.tolist())
    o1, o2 = evaluate(instance, x1), evaluate(instance, x2)
    profile = SubmaxProfile(
        f1_max=o1.f1,
        f2_max=o2.f2,
        f1_at_f2max=o2.f1,
        f2_at_f1max=o1.f2,
        decr_p=decr_p,
        decr_negc=decr_negc,
        vbar1=None if decr_p is None else o1.f1 - decr_p,
        vbar2=None if decr_negc is None else o2.f2 - decr_negc,
        x1=x1,
        x2=x2,
        exact=instance.integral,
    )
    logger.debug(f"Submax profile: F1={profile.f1_max} F2={profile.f2_max} "
                 f"decr(p)={decr_p} decr(-c)={decr_negc}")
    return profile


def epsilon_weights(profile):
    """Weights of the perturbed problems (P1) and (P2).

    Exact profiles get the cleared-denominator integer pairs.
    """
    if profile.degenerate:
        raise DegenerateObjective(
            f"no perturbation weights: F1={profile.f1_max}, F1bar={profile.f1_at_f2max}, "
            f"F2={profile.f2_max}, F2bar={profile.f2_at_f1max}, "
            f"decr(p)={profile.decr_p}, decr(-c)={profile.decr_negc}"
        )
    F1, F2 = profile.f1_max, profile.f2_max
    F1bar, F2bar = profile.f1_at_f2max, profile.f2_at_f1max
    if profile.exact:
        return (ScalarWeights(F2 - F2bar, F1 - profile.vbar1),
                ScalarWeights(F2 - profile.vbar2, F1 - F1bar))

    eps1 = (F1 - profile.vbar1) / (F2 - F2bar)
    eps2 = (F2 - profile.vbar2) / (F1 - F1bar)
    return ScalarWeights(1.0, eps1), ScalarWeights(eps2, 1.0)


def _pick_within_ties(instance, solution, key):
    picks = []
    for g, r in zip(instance.groups, solution.per_group):
        picks.append(min(r.ties, key=lambda j: key(g.profits[j], g.costs[j], j)))
    return ChoiceVector(picks)


def solve_P1(instance, profile, rel_tol=REL_TOL):
    """Pareto point with maximal profit; ties go to more profit, then less cost."""
    weights, _ = epsilon_weights(profile)
    solution = solve_scalarized(instance, weights, rel_tol)
    choice = _pick_within_ties(instance, solution, lambda p, c, j: (-p, c, j))
    return choice, evaluate(instance, choice)


def solve_P2(instance, profile, rel_tol=REL_TOL):
    """Pareto point with minimal cost; ties go to less cost, then more profit."""
    _, weights = epsilon_weights(profile)
    solution = solve_scalarized(instance, weights, rel_tol)
    choice = _pick_within_ties(instance, solution, lambda p, c, j: (c, -p, j))
    return choice, evaluate(instance, choice)
