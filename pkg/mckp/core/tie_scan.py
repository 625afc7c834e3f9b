"""Scan of the terminal solution set S for the feasible member of largest cost.

S is the Cartesian product of the per-group tie sets, so the scan is a
depth-first search over groups that prunes on the remaining cheapest and
dearest completions.
"""

import logging
from dataclasses import dataclass

from mckp.core.models import ChoiceVector, Outcome, evaluate, is_feasible
from mckp.core.scalarized import S_CARDINALITY_CAP

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 200_000_000


@dataclass(frozen=True)
class TieScanResult:
    best: ChoiceVector
    best_outcome: Outcome
    exhaustive: bool
    nodes_visited: int
    s_cardinality: int


def _cardinality(per_group_ties):
    card = 1
    for ties in per_group_ties:
        card *= len(ties)
        if card >= S_CARDINALITY_CAP:
            return S_CARDINALITY_CAP
    return card


def scan_ties(instance, per_group_ties, budget, fallback, node_cap=DEFAULT_NODE_CAP):
    """Minimize f2 over {x in S : f2(x) >= -budget}, starting from a feasible fallback in S."""
    if node_cap < 1:
        raise ValueError(f"node_cap must be at least 1, got {node_cap}")

    groups = instance.groups
    if any(j not in ties for j, ties in zip(fallback, per_group_ties)):
        raise ValueError(f"fallback {fallback.picks} is not a member of the solution set")
    picks = list(fallback)
    fixed = 0
    # (group index, tie members by decreasing cost, their costs)
    levels = []
    for i, ties in enumerate(per_group_ties):
        costs = groups[i].costs
        if len(ties) == 1:
            picks[i] = ties[0]
            fixed += costs[ties[0]]
            continue
        members = sorted(ties, key=lambda j: (-costs[j], j))
        levels.append((i, members, [costs[j] for j in members]))
    # larger tie sets first; stable on group index
    levels.sort(key=lambda lvl: -len(lvl[1]))

    m = len(levels)
    room = budget - fixed
    min_rest = [0] * (m + 1)
    max_rest = [0] * (m + 1)
    for d in range(m - 1, -1, -1):
        min_rest[d] = min_rest[d + 1] + levels[d][2][-1]
        max_rest[d] = max_rest[d + 1] + levels[d][2][0]

    best = sum(groups[i].costs[fallback[i]] for i, _, _ in levels)
    best_pos = [members.index(fallback[i]) for i, members, _ in levels]

    nodes = 0
    truncated = False
    if m == 0:
        nodes = 1
    else:
        pos = [-1] * m
        partial = [0] * (m + 1)
        d = 0
        while d >= 0:
            pos[d] += 1
            costs = levels[d][2]
            if pos[d] >= len(costs):
                pos[d] = -1
                d -= 1
                continue
            if nodes == node_cap:
                truncated = True
                break
            nodes += 1

            cost = partial[d] + costs[pos[d]]
            if cost + min_rest[d + 1] > room:
                continue
            if cost + max_rest[d + 1] <= best:
                # members are sorted by decreasing cost, siblings cannot do better
                pos[d] = -1
                d -= 1
                continue
            if d == m - 1:
                best = cost
                best_pos = pos.copy()
                if best == room:
                    break
                continue
            partial[d + 1] = cost
            d += 1

    for (i, members, _), p in zip(levels, best_pos):
        picks[i] = members[p]
    choice = ChoiceVector(picks)

    if not is_feasible(instance, choice):
        # float path only: the running sums disagreed with evaluate() in the last bits
        logger.warning("Tie scan result infeasible after re-evaluation, keeping the fallback")
        choice = ChoiceVector(fallback)

    if truncated:
        logger.warning(f"Tie scan truncated after {nodes} nodes (|S|={_cardinality(per_group_ties)})")
    else:
        logger.debug(f"Tie scan visited {nodes} nodes")

    return TieScanResult(
        best=choice,
        best_outcome=evaluate(instance, choice),
        exhaustive=not truncated,
        nodes_visited=nodes,
        s_cardinality=_cardinality(per_group_ties),
    )
