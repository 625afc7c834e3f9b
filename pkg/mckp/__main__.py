import sys
import os
import argparse
import logging
from pathlib import Path

from mckp.core.baselines import DEFAULT_PRODUCT_CAP
from mckp.core.bissa import BissaOptions
from mckp.core.errors import InfeasibleInstance
from mckp.core.generator import DEFAULT_R, DEFAULT_WCO_HALFWIDTH, GenKind, GenSpec
from mckp.core.models import REL_TOL
from mckp.core.parser import format_number, read_instance
from mckp.core.tie_scan import DEFAULT_NODE_CAP
from mckp.runner import ALGOS, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, SolverRunner

NODE_CAP_ENV = 'MCKP_NODE_CAP'
DEFAULT_BENCH_ALGOS = 'dp,bissa,greedy'
DEFAULT_COUNT = 10


def _write_output(output, args):
    if isinstance(output, bytes):
        output = output.decode('utf-8')
    dest = args.output
    if dest:
        Path(dest).write_bytes(output.encode('utf-8'))
        print(f"Written to {dest}")
    else:
        sys.stdout.write(output)


def _runner(args):
    options = BissaOptions(
        node_cap=args.node_cap,
        max_iterations=args.max_iterations,
        rel_tol=args.rel_tol,
    )
    return SolverRunner(options, product_cap=args.product_cap)


def run_gen(args):
    spec = GenSpec(GenKind(args.kind), args.k, args.n, R=args.R, seed=args.seed,
                   wco_halfwidth=args.halfwidth)
    if args.count < 1:
        raise ValueError(f"--count must be at least 1, got {args.count}")
    for path, instance in SolverRunner().generate(spec, args.count, args.out):
        print(f"{path} {spec.kind.value} k={instance.k} n={instance.n} "
              f"b={format_number(instance.budget)}")
    return EXIT_OK


def run_solve(args):
    instance = read_instance(args.in_file)
    output, code = _runner(args).solve(args.algo, instance, args.format,
                                       instance_id=Path(args.in_file).stem)
    _write_output(output, args)
    return code


def run_bench(args):
    algos = [a.strip() for a in args.algos.split(',') if a.strip()]
    _write_output(_runner(args).bench(args.set, algos), args)
    return EXIT_OK


def run_pareto(args):
    instance = read_instance(args.in_file)
    _write_output(SolverRunner(product_cap=args.product_cap).pareto(instance), args)
    return EXIT_OK


def _solver_flags():
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument('--node-cap', type=int,
                       default=os.environ.get(NODE_CAP_ENV, str(DEFAULT_NODE_CAP)),
                       help=f'Tie-scan node cap (default: ${NODE_CAP_ENV} or {DEFAULT_NODE_CAP})')
    flags.add_argument('--max-iterations', type=int, default=None,
                       help='Scalarized problems before giving up (default: 10 * (k + max n_i))')
    flags.add_argument('--rel-tol', type=float, default=REL_TOL,
                       help=f'Relative tolerance for real-valued data (default: {REL_TOL})')
    flags.add_argument('--product-cap', type=int, default=DEFAULT_PRODUCT_CAP,
                       help=f'Largest |X| brute force will enumerate (default: {DEFAULT_PRODUCT_CAP})')
    return flags


def build_parser():
    top = argparse.ArgumentParser(
        description='Multiple-choice knapsack solvers: BISSA, baselines and benchmarks',
        prog='mckp'
    )
    top.add_argument('--debug', action='store_true', help='Enable debug logging')
    subparsers = top.add_subparsers(dest='command')
    solver_flags = _solver_flags()

    # gen subcommand
    gen_parser = subparsers.add_parser('gen', help='Generate random instance files')
    gen_parser.add_argument('--kind', choices=[k.value for k in GenKind], required=True,
                            help='unc: uncorrelated, wco: weakly correlated')
    gen_parser.add_argument('--k', type=int, required=True, help='Number of groups')
    gen_parser.add_argument('--n', type=int, required=True, help='Items per group')
    gen_parser.add_argument('--R', type=int, default=DEFAULT_R,
                            help=f'Values are drawn from [1, R] (default: {DEFAULT_R})')
    gen_parser.add_argument('--seed', type=int, default=0, help='Seed of the first instance')
    gen_parser.add_argument('--count', type=int, default=DEFAULT_COUNT,
                            help=f'Number of instances, seeds seed..seed+count-1 (default: {DEFAULT_COUNT})')
    gen_parser.add_argument('--halfwidth', type=int, default=DEFAULT_WCO_HALFWIDTH,
                            help=f'wco profit spread around the cost (default: {DEFAULT_WCO_HALFWIDTH})')
    gen_parser.add_argument('--out', required=True, help='Output directory')

    # solve subcommand
    solve_parser = subparsers.add_parser('solve', parents=[solver_flags], help='Solve one instance file')
    solve_parser.add_argument('--algo', choices=ALGOS, default='bissa', help='Solver (default: bissa)')
    solve_parser.add_argument('--in', dest='in_file', required=True, help='Instance file')
    solve_parser.add_argument('--format', choices=['json', 'csv'], default='json',
                              help='Report format (default: json)')
    solve_parser.add_argument('-o', '--output', help='Output file (default: stdout)')

    # bench subcommand
    bench_parser = subparsers.add_parser('bench', parents=[solver_flags],
                                         help='Run solvers over a directory of instances')
    bench_parser.add_argument('--set', required=True, help='Directory of .mckp files')
    bench_parser.add_argument('--algos', default=DEFAULT_BENCH_ALGOS,
                              help=f'Comma-separated solvers (default: {DEFAULT_BENCH_ALGOS})')
    bench_parser.add_argument('-o', '--out', dest='output', help='Output file (default: stdout)')

    # pareto subcommand
    pareto_parser = subparsers.add_parser('pareto', help='Brute-force Pareto front of a small instance')
    pareto_parser.add_argument('--in', dest='in_file', required=True, help='Instance file')
    pareto_parser.add_argument('--product-cap', type=int, default=DEFAULT_PRODUCT_CAP,
                               help=f'Largest |X| to enumerate (default: {DEFAULT_PRODUCT_CAP})')
    pareto_parser.add_argument('-o', '--output', help='Output file (default: stdout)')

    return top


def main(argv=None):
    top = build_parser()
    args = top.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.WARNING,
        format='[%(levelname)s]: %(message)s',
    )

    commands = {
        'gen': run_gen,
        'solve': run_solve,
        'bench': run_bench,
        'pareto': run_pareto,
    }
    if args.command not in commands:
        top.print_help()
        return EXIT_ERROR

    try:
        return commands[args.command](args)
    except InfeasibleInstance as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as e:
        # MckpError is a ValueError too
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
