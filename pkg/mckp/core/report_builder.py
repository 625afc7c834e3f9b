"""JSON reports and the ten-column bench table."""

import json
import logging
import numbers
from fractions import Fraction

import pandas as pd

from mckp.core.baselines import ExactResult, GreedyResult
from mckp.core.bissa import BissaReport, Status
from mckp.core.parser import format_number

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ['id', 'exact', 'bissa', 'diff', 'rel_diff_pct',
                 'ub', 'ub_gap', 'ub_rel_gap_pct', 'greedy_ub', 'iters']

# columns summarized in the bench footer
FOOTER_COLUMNS = ['diff', 'rel_diff_pct', 'iters']


def _json_number(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else float(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    return value


def _point(point):
    return [_json_number(v) for v in point]


def _plain(value):
    """Profits and differences: integers as integers, anything else as a short decimal."""
    if value is None:
        return ''
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        value = float(value)
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return format_number(value)


def _fixed3(value):
    if value is None:
        return ''
    return f"{float(value):.3f}"


def _pct(num, den):
    if num is None or den is None or den == 0:
        return None
    return 100 * (Fraction(num) / Fraction(den) if _exact(num, den) else num / den)


def _exact(*values):
    return all(isinstance(v, (numbers.Integral, Fraction)) for v in values)


class ReportBuilder:
    """Turns solver results into report payloads, JSON bytes and CSV text."""

    def bissaPayload(self, report, greedy=None, timings=None):
        payload = {
            'algo': 'bissa',
            'status': report.status.value,
            'lb': _json_number(report.lb),
            'ub': _json_number(report.ub),
            'u': _json_number(report.u),
            'picks': list(report.solution) if report.solution is not None else None,
            'outcome': _point(report.outcome.as_tuple()) if report.outcome is not None else None,
            'triangle': [_point(v) for v in report.triangle] if report.triangle else None,
            'iterations': [
                {
                    'weights': [_json_number(it.weights.wp), _json_number(it.weights.wc)],
                    'alpha': _json_number(it.alpha),
                    'opt': _json_number(it.opt),
                    'outcome': _point(it.outcome.as_tuple()),
                    'branch': it.branch.value,
                }
                for it in report.iterations
            ],
            's_cardinality': report.s_cardinality,
            'exhaustive': report.exhaustive,
            'scalarized_count': report.scalarized_count,
            'extreme_points': {
                'initial': [_point(p) for p in report.initial_points] if report.initial_points else None,
                'final': [_point(p) for p in report.final_points] if report.final_points else None,
            },
        }
        if report.tie_scan is not None:
            payload['tie_scan_nodes'] = report.tie_scan.nodes_visited
        if greedy is not None:
            payload['greedy_profit'] = _json_number(greedy.greedy_profit)
            payload['greedy_ub'] = _json_number(greedy.lp_upper_bound)
        payload['timings_ms'] = dict(timings or {'bissa': report.elapsed_ms})
        return payload

    def baselinePayload(self, result, algo, timings=None):
        payload = {'algo': algo}
        if result is None:
            payload['status'] = Status.INFEASIBLE.value
        elif isinstance(result, GreedyResult):
            payload.update({
                'status': 'Solved',
                'greedy_profit': _json_number(result.greedy_profit),
                'picks': list(result.greedy_solution),
                'lp_upper_bound': _json_number(result.lp_upper_bound),
            })
        else:
            payload.update({
                'status': 'Solved',
                'opt_profit': _json_number(result.opt_profit),
                'picks': list(result.solution),
                'method': result.method.value,
            })
        payload['timings_ms'] = dict(timings or {})
        return payload

    def toJson(self, payload):
        return (json.dumps(payload, indent=2) + '\n').encode('utf-8')

    def benchRow(self, instance_id, bissa=None, exact=None, greedy=None):
        """One table row; columns whose solver did not run stay blank."""
        row = dict.fromkeys(BENCH_COLUMNS, '')
        row['id'] = instance_id

        opt = exact.opt_profit if isinstance(exact, ExactResult) else None
        row['exact'] = _plain(opt)
        if isinstance(greedy, GreedyResult):
            row['greedy_ub'] = _fixed3(greedy.lp_upper_bound)

        if isinstance(bissa, BissaReport) and bissa.status is not Status.INFEASIBLE:
            lb, ub = bissa.lb, bissa.ub
            row['bissa'] = _plain(lb)
            row['ub'] = _fixed3(ub)
            row['ub_gap'] = _fixed3(ub - lb)
            row['ub_rel_gap_pct'] = _fixed3(_pct(ub - lb, lb))
            row['iters'] = str(bissa.scalarized_count)
            if opt is not None:
                row['diff'] = _plain(opt - lb)
                row['rel_diff_pct'] = _fixed3(_pct(opt - lb, opt))
        return row

    def benchTable(self, rows, errors=()):
        """CSV text: header, rows, then '#' summary lines.

        errors is a sequence of (instance id, message) pairs.
        """
        df = pd.DataFrame(rows, columns=BENCH_COLUMNS, dtype=object)
        body = df.to_csv(index=False, lineterminator='\n')

        footer = [f"# instances: {len(df)}"]
        for col in FOOTER_COLUMNS:
            values = pd.to_numeric(df[col], errors='coerce').dropna()
            if values.empty:
                footer.append(f"# {col}: mean=n/a max=n/a")
            else:
                footer.append(f"# {col}: mean={values.mean():.3f} max={values.max():.3f}")
        footer.extend(f"# error {instance_id}: {message}" for instance_id, message in errors)
        return body + '\n'.join(footer) + '\n'


def write_report(report, format='json', instance_id='instance', exact=None, greedy=None,
                 timings=None):
    """Serialize a BISSA report (and optional baseline results) as JSON or a one-row CSV."""
    builder = ReportBuilder()
    if format == 'json':
        return builder.toJson(builder.bissaPayload(report, greedy=greedy, timings=timings))
    if format == 'csv':
        row = builder.benchRow(instance_id, bissa=report, exact=exact, greedy=greedy)
        return builder.benchTable([row]).encode('utf-8')
    raise ValueError(f"unknown report format {format!r}")
