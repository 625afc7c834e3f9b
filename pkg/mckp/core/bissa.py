"""Approximate MCKP solving by bisection over weighted-sum scalarizations.

The budget constraint is traded for a second objective (maximize -c^T x).
Starting from the two extreme Pareto points, the solver repeatedly asks the
scalarized problem whose weights are normal to the segment joining the
current points whether a Pareto outcome lies strictly above it, keeping the
budget line f2 = -b strictly between the two points. When nothing lies above
the segment, the best feasible member of the solution set is the answer and
the segment itself bounds every feasible outcome from above.
"""

import logging
import numbers
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from mckp.core.errors import DegenerateGeometry, IterationLimit
from mckp.core.models import REL_TOL, ChoiceVector, Outcome, evaluate, isclose, ratio
from mckp.core.scalarized import (
    ScalarWeights, solve_P1, solve_P2, solve_scalarized, submax_profile,
)
from mckp.core.tie_scan import DEFAULT_NODE_CAP, TieScanResult, scan_ties

logger = logging.getLogger(__name__)


class Status(Enum):
    EXACT_SOLVED = 'ExactSolved'
    APPROXIMATE = 'Approximate'
    INFEASIBLE = 'Infeasible'


class Branch(Enum):
    ABOVE_LINE_INFEASIBLE = 'above-line-infeasible'
    ABOVE_LINE_FEASIBLE = 'above-line-feasible'
    EXACT_HIT = 'exact-hit'
    TERMINAL = 'terminal'


@dataclass
class BissaOptions:
    node_cap: int = DEFAULT_NODE_CAP
    max_iterations: Optional[int] = None   # default: 10 * (k + max n_i)
    rel_tol: float = REL_TOL


@dataclass(frozen=True)
class IterationRecord:
    weights: ScalarWeights
    alpha: float
    opt: float
    outcome: Outcome
    branch: Branch


@dataclass
class BissaReport:
    status: Status
    solution: Optional[ChoiceVector] = None
    outcome: Optional[Outcome] = None
    lb: Optional[float] = None
    ub: Optional[float] = None
    u: Optional[float] = None
    triangle: Optional[tuple] = None
    iterations: list = field(default_factory=list)
    tie_scan: Optional[TieScanResult] = None
    initial_points: Optional[tuple] = None    # outcomes of (P1), (P2)
    final_points: Optional[tuple] = None      # (a1, b1), (a2, b2) at exit
    elapsed_ms: float = 0.0

    @property
    def scalarized_count(self):
        return len(self.iterations)

    @property
    def s_cardinality(self):
        return self.tie_scan.s_cardinality if self.tie_scan else None

    @property
    def exhaustive(self):
        return self.tie_scan.exhaustive if self.tie_scan else True


def uncertainty_bounds(a1, b1, outcome, budget):
    """(lb, u, ub) where ub is where the terminal line meets f2 = -budget."""
    f1, f2 = outcome.f1, outcome.f2
    if f2 < -budget:
        raise ValueError(f"outcome {outcome.as_tuple()} violates the budget {budget}")
    if f2 == b1:
        raise DegenerateGeometry(f"outcome f2={f2} coincides with b1")
    exact = all(isinstance(v, numbers.Integral) for v in (a1, b1, f1, f2, budget))
    u = ratio((a1 - f1) * (f2 + budget), f2 - b1, exact)
    return f1, u, f1 + u


class BissaSolver:
    '''State machine over the points (a1, b1) (infeasible side) and (a2, b2) (feasible side).'''

    def __init__(self, instance, options=None):
        self.instance = instance
        self.options = options or BissaOptions()
        self.budget = instance.budget
        self.exact = instance.integral

        self.iterations = []
        self.x1 = self.x2 = None
        self.a1 = self.b1 = self.a2 = self.b2 = None
        self.initial_points = None

    def run(self):
        start = time.perf_counter()
        report = self._run()
        report.iterations = self.iterations
        report.initial_points = self.initial_points
        if report.status is not Status.INFEASIBLE:
            report.final_points = ((self.a1, self.b1), (self.a2, self.b2))
        report.elapsed_ms = (time.perf_counter() - start) * 1000
        logger.debug(f"BISSA finished: {report.status.value}, "
                     f"{report.scalarized_count} scalarized problems, {report.elapsed_ms:.1f} ms")
        return report

    def _run(self):
        self._init_extremes()
        report = self._short_circuit()
        if report is not None:
            return report
        return self._explore()

    def _set_point1(self, choice):
        o = evaluate(self.instance, choice)
        self.x1, self.a1, self.b1 = choice, o.f1, o.f2

    def _set_point2(self, choice):
        o = evaluate(self.instance, choice)
        self.x2, self.a2, self.b2 = choice, o.f1, o.f2

    def _init_extremes(self):
        profile = submax_profile(self.instance)
        if profile.degenerate:
            logger.info("Objectives are degenerate, using the extreme witnesses directly")
            x1, x2 = profile.x1, profile.x2
        else:
            x1, _ = solve_P1(self.instance, profile, self.options.rel_tol)
            x2, _ = solve_P2(self.instance, profile, self.options.rel_tol)
        self._set_point1(x1)
        self._set_point2(x2)
        self.initial_points = ((self.a1, self.b1), (self.a2, self.b2))

    def _hits_budget(self, f2):
        if self.exact:
            return f2 == -self.budget
        return isclose(f2, -self.budget, self.options.rel_tol) and -f2 <= self.budget

    def _exact_report(self, choice):
        o = evaluate(self.instance, choice)
        b = self.budget
        return BissaReport(
            status=Status.EXACT_SOLVED,
            solution=choice,
            outcome=o,
            lb=o.f1,
            ub=o.f1,
            u=0,
            triangle=((o.f1, o.f2), (o.f1, -b), (o.f1, -b)),
        )

    def _short_circuit(self):
        b = self.budget
        if (self.a1, self.b1) == (self.a2, self.b2) and self.b2 >= -b:
            logger.info("Extreme points coincide and fit the budget")
            return self._exact_report(self.x2)
        if self.b1 >= -b:
            logger.info("Maximal-profit point fits the budget")
            return self._exact_report(self.x1)
        if self._hits_budget(self.b2):
            logger.info("Minimal-cost point exhausts the budget exactly")
            return self._exact_report(self.x2)
        if self.b2 < -b:
            logger.info(f"Infeasible: minimal cost {-self.b2} exceeds budget {b}")
            return BissaReport(status=Status.INFEASIBLE)
        return None

    def _max_iterations(self):
        if self.options.max_iterations is not None:
            return self.options.max_iterations
        return 10 * (self.instance.k + self.instance.max_n)

    def _explore(self):
        b = self.budget
        limit = self._max_iterations()
        while True:
            if len(self.iterations) >= limit:
                raise IterationLimit(f"no termination after {limit} scalarized problems")

            # lambda = (b2 - b1) / D with D = (a1 - a2) + (b2 - b1), kept as a weight pair
            weights = ScalarWeights(self.b2 - self.b1, self.a1 - self.a2)
            D = weights.wp + weights.wc
            alphaD = weights.wp * self.a1 + weights.wc * self.b1

            solution = solve_scalarized(self.instance, weights, self.options.rel_tol)
            x = solution.representative
            o = evaluate(self.instance, x)
            optD = solution.value

            if self.exact:
                above = optD > alphaD
            else:
                above = optD > alphaD and not isclose(optD, alphaD, self.options.rel_tol)

            if not above:
                branch = Branch.TERMINAL
            elif self._hits_budget(o.f2):
                branch = Branch.EXACT_HIT
            elif o.f2 > -b:
                branch = Branch.ABOVE_LINE_FEASIBLE
            else:
                branch = Branch.ABOVE_LINE_INFEASIBLE

            record = IterationRecord(
                weights=weights,
                alpha=ratio(alphaD, D, self.exact),
                opt=ratio(optD, D, self.exact),
                outcome=o,
                branch=branch,
            )
            self.iterations.append(record)
            logger.debug(f"Iteration {len(self.iterations)}: weights=({weights.wp}, {weights.wc}) "
                         f"alpha={record.alpha} opt={record.opt} at {o.as_tuple()} -> {branch.value}")

            if branch is Branch.TERMINAL:
                return self._terminal(solution)
            if branch is Branch.EXACT_HIT:
                return self._exact_report(x)
            if branch is Branch.ABOVE_LINE_FEASIBLE:
                self._set_point2(x)
            else:
                self._set_point1(x)

    def _terminal(self, solution):
        b = self.budget
        ties = solution.ties
        if not self.exact:
            # x2 lies on the terminal line, but per-group tolerance may miss it
            ties = [t if j in t else tuple(sorted(t + (j,))) for t, j in zip(ties, self.x2)]

        scan = scan_ties(self.instance, ties, b, self.x2, self.options.node_cap)
        o = scan.best_outcome
        lb, u, ub = uncertainty_bounds(self.a1, self.b1, o, b)
        return BissaReport(
            status=Status.APPROXIMATE,
            solution=scan.best,
            outcome=o,
            lb=lb,
            ub=ub,
            u=u,
            triangle=((o.f1, o.f2), (ub, -b), (o.f1, -b)),
            tie_scan=scan,
        )


def run_bissa(instance, options=None):
    return BissaSolver(instance, options).run()
