import itertools
import statistics
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings

from mckp.core.baselines import brute_force, dp_exact, greedy, pareto_front
from mckp.core.bissa import (
    BissaOptions, Branch, Status, run_bissa, uncertainty_bounds,
)
from mckp.core.errors import DegenerateGeometry, IterationLimit
from mckp.core.generator import GenKind, GenSpec, generate
from mckp.core.models import ChoiceVector, Outcome, evaluate, is_feasible, validate_instance
from mckp.core.scalarized import solve_scalarized
from tests.conftest import make_e1
from tests.strategies import feasible_instances, real_instances


def test_e1_trace(e1):
    report = run_bissa(e1)
    assert report.status is Status.APPROXIMATE
    assert report.initial_points == ((16, -9), (10, -3))

    first, second = report.iterations
    assert (first.weights.wp, first.weights.wc) == (6, 6)
    assert first.alpha == Fraction(7, 2)
    assert first.opt == 4
    assert first.outcome.as_tuple() == (13, -5)
    assert first.branch is Branch.ABOVE_LINE_FEASIBLE

    assert (second.weights.wp, second.weights.wc) == (4, 3)
    assert second.alpha == second.opt == Fraction(37, 7)
    assert second.branch is Branch.TERMINAL

    assert report.scalarized_count == 2
    assert report.s_cardinality == 2
    assert report.exhaustive
    assert report.outcome.as_tuple() == (13, -5)
    assert report.lb == 13
    assert report.u == Fraction(3, 4)
    assert report.ub == Fraction(55, 4)
    assert report.triangle == ((13, -5), (Fraction(55, 4), -6), (13, -6))
    assert report.final_points == ((16, -9), (13, -5))
    assert brute_force(e1).opt_profit == report.lb


def test_e1_max_profit_fits():
    report = run_bissa(make_e1(9))
    assert report.status is Status.EXACT_SOLVED
    assert report.solution.picks == (0, 0)
    assert report.lb == report.ub == 16
    assert report.u == 0
    assert report.scalarized_count == 0


def test_e1_infeasible():
    report = run_bissa(make_e1(2))
    assert report.status is Status.INFEASIBLE
    assert report.solution is None
    assert report.lb is None and report.ub is None


def test_e1_min_cost_exhausts_budget():
    report = run_bissa(make_e1(3))
    assert report.status is Status.EXACT_SOLVED
    assert report.lb == 10
    assert report.solution.picks == (1, 1)


def test_exact_hit_inside_loop(e1):
    report = run_bissa(make_e1(5))
    assert report.status is Status.EXACT_SOLVED
    assert report.iterations[-1].branch is Branch.EXACT_HIT
    assert report.lb == report.ub == 13


def test_degenerate_instance_short_circuits():
    inst = validate_instance([[(5, 2)], [(3, 1)]], 3)
    report = run_bissa(inst)
    assert report.status is Status.EXACT_SOLVED
    assert report.lb == 8
    assert run_bissa(validate_instance([[(5, 2)], [(3, 1)]], 2)).status is Status.INFEASIBLE


def test_perturbation_tie_instance():
    inst = validate_instance([[(10, 4), (7, 1)]], 2)
    report = run_bissa(inst)
    assert report.status is Status.APPROXIMATE
    assert report.lb == 7
    assert report.ub == 8
    assert report.solution.picks == (1,)


def test_real_valued_e1():
    inst = make_e1(6.5)
    assert not inst.integral
    report = run_bissa(inst)
    assert report.status is Status.APPROXIMATE
    assert report.lb == 13
    assert report.ub == pytest.approx(14.125)
    assert report.scalarized_count == 2


def test_iteration_limit(e1):
    with pytest.raises(IterationLimit):
        run_bissa(e1, BissaOptions(max_iterations=1))


def test_uncertainty_bounds():
    assert uncertainty_bounds(16, -9, Outcome(13, -5), 6) == (13, Fraction(3, 4), Fraction(55, 4))
    lb, u, ub = uncertainty_bounds(16, -9, Outcome(13, -6), 6)
    assert u == 0 and lb == ub == 13
    lb, u, ub = uncertainty_bounds(16.0, -9.0, Outcome(13.0, -5.0), 6.5)
    assert u == pytest.approx(1.125)
    with pytest.raises(DegenerateGeometry):
        uncertainty_bounds(16, -5, Outcome(13, -5), 6)
    with pytest.raises(ValueError):
        uncertainty_bounds(16, -9, Outcome(13, -7), 6)


def _check_report(inst, report):
    c_min = sum(min(g.costs) for g in inst.groups)
    if report.status is Status.INFEASIBLE:
        assert c_min > inst.budget
        return
    assert c_min <= inst.budget

    opt = brute_force(inst).opt_profit
    assert is_feasible(inst, report.solution)
    assert report.lb == evaluate(inst, report.solution).f1
    assert report.lb <= opt <= report.ub
    assert report.u >= 0
    assert report.scalarized_count == len(report.iterations)
    if report.status is Status.EXACT_SOLVED:
        assert report.lb == opt
        assert report.u == 0

    front = pareto_front(inst)
    assert report.outcome in {pt.outcome for pt in front}

    budget = inst.budget
    for it in report.iterations:
        assert it.opt >= it.alpha
        above = it.opt > it.alpha
        if it.branch is Branch.TERMINAL:
            assert not above
        elif it.branch is Branch.EXACT_HIT:
            assert above and it.outcome.f2 == -budget
        elif it.branch is Branch.ABOVE_LINE_FEASIBLE:
            assert above and it.outcome.f2 > -budget
        else:
            assert above and it.outcome.f2 < -budget


def test_corpus_sandwich(corpus):
    counts = {status: 0 for status in Status}
    for inst in corpus:
        report = run_bissa(inst)
        counts[report.status] += 1
        _check_report(inst, report)
    assert counts[Status.APPROXIMATE] > 0


def test_corpus_ub_geometry(integral_corpus):
    for inst in integral_corpus:
        report = run_bissa(inst)
        if report.status is not Status.APPROXIMATE or not report.exhaustive:
            continue
        (a1, b1), _ = report.final_points
        ties = solve_scalarized(inst, report.iterations[-1].weights).ties
        for picks in itertools.islice(itertools.product(*ties), 50):
            o = evaluate(inst, ChoiceVector(picks))
            if o.f2 == b1:
                continue
            ub = o.f1 + Fraction((a1 - o.f1) * (o.f2 + inst.budget), o.f2 - b1)
            assert ub == report.ub


def test_corpus_lp_bound_dominates_lb(integral_corpus):
    for inst in integral_corpus:
        report = run_bissa(inst)
        if report.status is Status.INFEASIBLE:
            continue
        assert greedy(inst).lp_upper_bound >= report.lb


@settings(max_examples=200, deadline=None)
@given(feasible_instances(max_k=4, max_n=4, max_value=30))
def test_sandwich_property(inst):
    _check_report(inst, run_bissa(inst))


@settings(max_examples=100, deadline=None)
@given(real_instances())
def test_real_valued_sandwich(inst):
    report = run_bissa(inst)
    if report.status is Status.INFEASIBLE:
        assert sum(min(g.costs) for g in inst.groups) > inst.budget
        return
    opt = brute_force(inst).opt_profit
    assert is_feasible(inst, report.solution)
    assert report.lb <= opt + 1e-9 * max(1.0, abs(opt))
    assert opt <= report.ub + 1e-9 * max(1.0, abs(report.ub))


def _regime(kind, k, n, seeds=range(1, 11)):
    return [generate(GenSpec(GenKind(kind), k, n, seed=s)) for s in seeds]


@pytest.mark.slow
def test_uncorrelated_many_items_regime():
    gaps = []
    for inst in _regime('unc', 10, 1000):
        start = time.perf_counter()
        report = run_bissa(inst)
        assert time.perf_counter() - start < 1.0
        assert report.scalarized_count <= 20
        exact = dp_exact(inst).opt_profit
        assert report.lb <= exact <= report.ub
        gaps.append((exact - report.lb) / exact)
    assert statistics.mean(gaps) <= 0.001
    assert max(gaps) <= 0.003


@pytest.mark.slow
def test_uncorrelated_many_groups_regime():
    gaps = []
    for inst in _regime('unc', 1000, 10):
        start = time.perf_counter()
        report = run_bissa(inst)
        assert time.perf_counter() - start < 1.0
        assert report.scalarized_count <= 25
        # the DP table is too large here; exact profit lies below both upper bounds
        upper = min(report.ub, greedy(inst).lp_upper_bound)
        gaps.append((upper - report.lb) / report.lb)
    assert statistics.mean(gaps) <= 0.001


@pytest.mark.slow
def test_weakly_correlated_regime():
    gaps = []
    for inst in _regime('wco', 20, 20):
        report = run_bissa(inst)
        assert report.scalarized_count <= 15
        assert report.exhaustive
        exact = dp_exact(inst).opt_profit
        assert report.lb <= exact <= report.ub
        gaps.append((exact - report.lb) / exact)
    assert max(gaps) <= 0.08
