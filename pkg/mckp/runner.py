#!/usr/bin/env python3

import logging
import time
from pathlib import Path

import pandas as pd

from mckp.core.baselines import (
    DEFAULT_DP_MEMORY_BYTES, DEFAULT_PRODUCT_CAP,
    brute_force, dp_exact, greedy, pareto_front,
)
from mckp.core.bissa import BissaOptions, Status, run_bissa
from mckp.core.errors import InfeasibleInstance, MckpError
from mckp.core.generator import generate
from mckp.core.parser import format_number, read_instance, write_instance
from mckp.core.report_builder import ReportBuilder

logger = logging.getLogger(__name__)

ALGOS = ('bissa', 'greedy', 'dp', 'brute')
INSTANCE_SUFFIX = '.mckp'

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class SolverRunner:
    """Runs the solvers on instances and files and renders their reports."""

    def __init__(self, options=None, product_cap=DEFAULT_PRODUCT_CAP,
                 dp_memory_bytes=DEFAULT_DP_MEMORY_BYTES):
        self.options = options or BissaOptions()
        self.product_cap = product_cap
        self.dp_memory_bytes = dp_memory_bytes

        self.report_builder = ReportBuilder()

    def run(self, algo, instance):
        """(result, elapsed ms) of one solver; baselines raise InfeasibleInstance."""
        start = time.perf_counter()
        if algo == 'bissa':
            result = run_bissa(instance, self.options)
        elif algo == 'greedy':
            result = greedy(instance)
        elif algo == 'dp':
            result = dp_exact(instance, self.dp_memory_bytes)
        elif algo == 'brute':
            result = brute_force(instance, self.product_cap)
        else:
            raise ValueError(f"unknown algorithm {algo!r}, expected one of {', '.join(ALGOS)}")
        elapsed = (time.perf_counter() - start) * 1000
        logger.debug(f"{algo} finished in {elapsed:.1f} ms")
        return result, elapsed

    def solve(self, algo, instance, format='json', instance_id='instance'):
        """(report bytes, exit code)."""
        try:
            result, elapsed = self.run(algo, instance)
        except InfeasibleInstance as e:
            logger.info(f"{algo}: {e}")
            result, elapsed = None, 0.0

        timings = {algo: elapsed}
        infeasible = result is None or (algo == 'bissa' and result.status is Status.INFEASIBLE)
        code = EXIT_INFEASIBLE if infeasible else EXIT_OK

        if format == 'json':
            if algo == 'bissa':
                payload = self.report_builder.bissaPayload(result, timings=timings)
            else:
                payload = self.report_builder.baselinePayload(result, algo, timings=timings)
            return self.report_builder.toJson(payload), code
        if format == 'csv':
            row = self.report_builder.benchRow(instance_id, **{self._row_key(algo): result})
            return self.report_builder.benchTable([row]).encode('utf-8'), code
        raise ValueError(f"unknown report format {format!r}")

    @staticmethod
    def _row_key(algo):
        return {'bissa': 'bissa', 'greedy': 'greedy', 'dp': 'exact', 'brute': 'exact'}[algo]

    def bench(self, directory, algos):
        """Ten-column CSV over every instance file in directory, ordered by file name."""
        unknown = [a for a in algos if a not in ALGOS]
        if unknown:
            raise ValueError(f"unknown algorithm(s): {', '.join(unknown)}")
        directory = Path(directory)
        if not directory.is_dir():
            raise NotADirectoryError(f"not a directory: {directory}")

        files = sorted(p for p in directory.iterdir() if p.suffix == INSTANCE_SUFFIX)
        rows, errors = [], []
        for path in files:
            instance_id = path.stem
            try:
                instance = read_instance(path)
            except (MckpError, OSError) as e:
                logger.warning(f"{instance_id}: {e}")
                rows.append(self.report_builder.benchRow(instance_id))
                errors.append((instance_id, str(e)))
                continue
            rows.append(self._bench_row(instance_id, instance, algos, errors))
        return self.report_builder.benchTable(rows, errors)

    def _bench_row(self, instance_id, instance, algos, errors):
        """One row; a failing solver leaves only its own columns blank."""
        results = {}
        for algo in algos:
            try:
                results[algo] = self.run(algo, instance)[0]
            except MckpError as e:
                logger.warning(f"{instance_id} ({algo}): {e}")
                errors.append((f"{instance_id} ({algo})", str(e)))
        # the dp column is the exact one; brute stands in when dp was not requested
        exact = results.get('dp', results.get('brute'))
        return self.report_builder.benchRow(
            instance_id,
            bissa=results.get('bissa'),
            exact=exact,
            greedy=results.get('greedy'),
        )

    def generate(self, spec, count, out_dir):
        """Write count instances with consecutive seeds; returns [(path, instance)]."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        for s in spec.series(count):
            instance = generate(s)
            path = out_dir / s.file_name
            write_instance(instance, path)
            logger.info(f"Wrote {path}")
            written.append((path, instance))
        return written

    def pareto(self, instance):
        """Pareto front of (profit, -cost) as CSV with columns f1,f2,picks."""
        front = pareto_front(instance, self.product_cap)
        df = pd.DataFrame(
            [(format_number(pt.outcome.f1), format_number(pt.outcome.f2),
              ' '.join(map(str, pt.witness))) for pt in front],
            columns=['f1', 'f2', 'picks'],
        )
        return df.to_csv(index=False, lineterminator='\n')
