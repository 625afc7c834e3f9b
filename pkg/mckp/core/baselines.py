"""Reference solvers BISSA is validated and benchmarked against."""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from mckp.core.errors import (
    InfeasibleInstance, MemoryBudgetExceeded, NonIntegralData, TooLarge,
)
from mckp.core.models import (
    INT64_SAFE, ChoiceVector, Outcome, evaluate, ratio,
)

logger = logging.getLogger(__name__)

DEFAULT_PRODUCT_CAP = 10**7
DEFAULT_DP_MEMORY_BYTES = 2 * 1024**3


class ExactMethod(Enum):
    BRUTE = 'brute'
    DP = 'dp'


@dataclass(frozen=True)
class ExactResult:
    opt_profit: float
    solution: ChoiceVector
    method: ExactMethod


@dataclass(frozen=True)
class GreedyResult:
    greedy_profit: float
    greedy_solution: ChoiceVector
    lp_upper_bound: float


@dataclass(frozen=True)
class ParetoPoint:
    outcome: Outcome
    witness: ChoiceVector


def _check_feasible(instance):
    c_min = sum(min(g.costs) for g in instance.groups)
    if c_min > instance.budget:
        raise InfeasibleInstance(f"cheapest choice costs {c_min}, budget is {instance.budget}")


def _check_product(instance, product_cap):
    product = 1
    for g in instance.groups:
        product *= g.n
        if product > product_cap:
            raise TooLarge(f"|X| exceeds the enumeration cap {product_cap}")
    return product


def _totals(instance):
    """Profit and cost of every choice, as arrays shaped (n_1, ..., n_k).

    Sums accumulate in group order, the same order evaluate() uses.
    """
    groups = instance.groups
    if not instance.integral:
        dtype = np.float64
    elif (sum(max(g.profits) for g in groups) < INT64_SAFE
          and sum(max(g.costs) for g in groups) < INT64_SAFE):
        dtype = np.int64
    else:
        dtype = object

    P = np.array(groups[0].profits, dtype=dtype)
    C = np.array(groups[0].costs, dtype=dtype)
    for g in groups[1:]:
        P = np.add.outer(P, np.array(g.profits, dtype=dtype))
        C = np.add.outer(C, np.array(g.costs, dtype=dtype))
    return P, C


def _choice_at(shape, flat_index):
    return ChoiceVector(int(j) for j in np.unravel_index(flat_index, shape))


def brute_force(instance, product_cap=DEFAULT_PRODUCT_CAP):
    """Best feasible choice by enumerating all of X; lowest lexicographic choice on ties."""
    _check_product(instance, product_cap)
    _check_feasible(instance)

    P, C = _totals(instance)
    # profits are nonnegative, -1 marks infeasible choices
    scored = np.where(C <= instance.budget, P, -1).ravel()
    best = int(np.argmax(scored))
    solution = _choice_at(P.shape, best)
    return ExactResult(
        opt_profit=evaluate(instance, solution).f1,
        solution=solution,
        method=ExactMethod.BRUTE,
    )


def pareto_front(instance, product_cap=DEFAULT_PRODUCT_CAP):
    """Nondominated outcomes of (maximize p^T x, maximize -c^T x), by decreasing f1.

    Each outcome carries its lowest lexicographic witness.
    """
    _check_product(instance, product_cap)
    P, C = _totals(instance)
    profits, costs = P.ravel().tolist(), C.ravel().tolist()

    order = sorted(range(len(profits)), key=lambda t: (-profits[t], costs[t], t))
    front = []
    cheapest = None
    for t in order:
        if cheapest is not None and costs[t] >= cheapest:
            continue
        cheapest = costs[t]
        witness = _choice_at(P.shape, t)
        front.append(ParetoPoint(evaluate(instance, witness), witness))
    return front


def _integral_items(instance):
    """Per-group (profits, costs) as ints, or None when some item value is fractional."""
    if instance.integral:
        return [(g.profits, g.costs) for g in instance.groups]
    items = []
    for g in instance.groups:
        values = g.profits + g.costs
        if not all(float(v).is_integer() for v in values):
            return None
        items.append((tuple(int(p) for p in g.profits), tuple(int(c) for c in g.costs)))
    return items


def dp_exact(instance, memory_bytes=DEFAULT_DP_MEMORY_BYTES):
    """Cost-indexed dynamic program over groups.

    Each group's costs are shifted by the group minimum, so the table only
    spans the budget left after the cheapest choice. A fractional budget is
    accepted when every item is integral: c <= b and c <= floor(b) agree then.
    """
    items = _integral_items(instance)
    if items is None:
        raise NonIntegralData("dp_exact needs integral profits and costs")
    _check_feasible(instance)

    k = instance.k
    budget = math.floor(instance.budget)
    shifts = [min(costs) for _, costs in items]
    room = budget - sum(shifts)
    spread = sum(max(costs) - s for (_, costs), s in zip(items, shifts))
    W = min(room, spread)

    if instance.max_n <= np.iinfo(np.uint8).max:
        choice_dtype = np.uint8
    else:
        choice_dtype = np.uint16 if instance.max_n <= np.iinfo(np.uint16).max else np.uint32
    profit_dtype = np.int64 if sum(max(profits) for profits, _ in items) < INT64_SAFE else object

    table_bytes = k * (W + 1) * np.dtype(choice_dtype).itemsize
    if table_bytes + 3 * (W + 1) * 8 > memory_bytes:
        raise MemoryBudgetExceeded(
            f"DP table of {k} x {W + 1} needs {table_bytes} bytes, limit is {memory_bytes}"
        )
    logger.debug(f"DP table {k} x {W + 1} ({table_bytes} bytes)")

    choice = np.zeros((k, W + 1), dtype=choice_dtype)
    best = np.zeros(W + 1, dtype=profit_dtype)
    for i, ((profits, costs), shift) in enumerate(zip(items, shifts)):
        new = np.full(W + 1, -1, dtype=profit_dtype)
        for j, (p, c) in enumerate(zip(profits, costs)):
            w = c - shift
            if w > W:
                continue
            cand = np.full(W + 1, -1, dtype=profit_dtype)
            cand[w:] = best[:W + 1 - w] + p
            better = cand > new
            new[better] = cand[better]
            choice[i, better] = j
        best = new

    picks = [0] * k
    w = W
    for i in range(k - 1, -1, -1):
        j = int(choice[i, w])
        picks[i] = j
        w -= items[i][1][j] - shifts[i]

    solution = ChoiceVector(picks)
    opt = sum(items[i][0][j] for i, j in enumerate(picks))
    assert opt == best[W], "DP backtracking disagrees with the table"
    return ExactResult(opt_profit=opt, solution=solution, method=ExactMethod.DP)


def lp_dominance_filter(group):
    """Items of the group on the upper convex hull of (cost, profit), by increasing cost.

    Returns (item index, profit, cost) triples with strictly increasing
    profit and strictly decreasing incremental efficiency.
    """
    order = sorted(range(group.n), key=lambda j: (group.costs[j], -group.profits[j], j))

    hull = []
    for j in order:
        p, c = group.profits[j], group.costs[j]
        if hull and p <= hull[-1][1]:
            continue    # dominated
        while len(hull) >= 2:
            _, p0, c0 = hull[-2]
            _, p1, c1 = hull[-1]
            # hull[-1] on or below the segment hull[-2] -> (c, p)
            if (p1 - p0) * (c - c0) <= (p - p0) * (c1 - c0):
                hull.pop()
            else:
                break
        hull.append((j, p, c))
    return hull


def greedy(instance):
    """LP-relaxation greedy: cheapest hull items, then upgrades by decreasing efficiency."""
    _check_feasible(instance)
    exact = instance.integral

    frontiers = [lp_dominance_filter(g) for g in instance.groups]
    level = [0] * instance.k
    profit = sum(f[0][1] for f in frontiers)
    residual = instance.budget - sum(f[0][2] for f in frontiers)

    upgrades = []
    for i, frontier in enumerate(frontiers):
        for lvl in range(1, len(frontier)):
            dp = frontier[lvl][1] - frontier[lvl - 1][1]
            dc = frontier[lvl][2] - frontier[lvl - 1][2]
            upgrades.append((ratio(dp, dc, exact), dc, i, lvl, dp))
    upgrades.sort(key=lambda u: (-u[0], u[1], u[2], u[3]))

    lp_bound = None
    for _, dc, i, lvl, dp in upgrades:
        if level[i] != lvl - 1:
            continue    # an earlier upgrade of this group did not fit
        if dc > residual:
            if lp_bound is None:
                lp_bound = profit + ratio(residual * dp, dc, exact)
            continue
        level[i] = lvl
        profit += dp
        residual -= dc

    solution = ChoiceVector(f[lvl][0] for f, lvl in zip(frontiers, level))
    greedy_profit = evaluate(instance, solution).f1
    if lp_bound is None:
        lp_bound = greedy_profit
    logger.debug(f"Greedy profit {greedy_profit}, LP bound {lp_bound}")
    return GreedyResult(
        greedy_profit=greedy_profit,
        greedy_solution=solution,
        lp_upper_bound=lp_bound,
    )
