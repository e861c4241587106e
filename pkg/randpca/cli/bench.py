# randpca/cli/bench.py

import argparse
from typing import List, get_args

from randpca.bench.runner import BenchPlan, run_sweep
from randpca.core.config import settings
from randpca.core.exceptions import ConfigError
from randpca.core.logging_config import logger
from randpca.core.models import Method, Suite
from randpca.linalg.testgen import split_shape


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "bench",
        help="Run a timed accuracy sweep and write CSV and plot data.",
        description="Runs every parameter tuple for every trial, appending one "
        "record per run to the CSV. Failed runs are recorded as error markers.",
    )
    parser.add_argument("--suite", choices=get_args(Suite), default="dense")
    parser.add_argument("--methods", default="rsvd", help="Comma list of rsvd,rpca,reig,nystrom.")
    parser.add_argument("--dists", default="1,2,3,4,5", help="Comma list of distributions.")
    parser.add_argument("--sizes", default="1000x1000", help="Comma list of MxN (or N).")
    parser.add_argument("--k-list", default="", help="Comma list of ranks.")
    parser.add_argument("--oversample-list", default="", help="Comma list of l - k.")
    parser.add_argument("--its-list", default="", help="Comma list of iteration counts.")
    parser.add_argument("--trials", type=int, default=10)
    parser.add_argument("--seed-base", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--input-dir", help="Directory of .mtx files (sparse suite).")
    parser.add_argument("--snorm-its", type=int, default=settings.SNORM_MAX_ITS,
                        help="Cap on power-method steps for err.")
    parser.add_argument("--snorm-tol", type=float, default=settings.SNORM_TOL,
                        help="Relative-change stop for err; 0 runs exactly --snorm-its steps.")
    parser.add_argument("--workers", type=int, default=settings.N_WORKERS)
    parser.add_argument("--csv", required=True, help="Output CSV path.")
    parser.add_argument("--plotdata", help="Directory for the two-column plot files.")
    parser.set_defaults(func=run)


def _split(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _int_list(text: str, flag: str) -> List[int]:
    try:
        return [int(item) for item in _split(text)]
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated integers, got '{text}'")


def plan_from_args(args: argparse.Namespace) -> BenchPlan:
    methods = _split(args.methods)
    unknown = [m for m in methods if m not in get_args(Method)]
    if unknown or not methods:
        raise ConfigError(f"unknown method(s) {unknown}; choose from {list(get_args(Method))}")
    if args.trials < 1:
        raise ConfigError(f"--trials must be at least 1, got {args.trials}")

    return BenchPlan(
        suite=args.suite,
        methods=methods,
        dists=_split(args.dists),
        sizes=[split_shape(s) for s in _split(args.sizes)],
        k_list=_int_list(args.k_list, "--k-list"),
        oversample_list=_int_list(args.oversample_list, "--oversample-list"),
        its_list=_int_list(args.its_list, "--its-list"),
        trials=args.trials,
        seed_base=args.seed_base,
        input_dir=args.input_dir,
        snorm_its=args.snorm_its,
        snorm_tol=args.snorm_tol,
        workers=args.workers,
    )


def run(args: argparse.Namespace) -> int:
    plan = plan_from_args(args)
    frame = run_sweep(plan, args.csv, plotdata_dir=args.plotdata)
    failed = int(frame["method"].str.contains("!").sum()) if not frame.empty else 0
    if failed:
        logger.warning(f"{failed} of {len(frame)} runs failed; see the error markers in '{args.csv}'.")
    print(f"records={len(frame)} failed={failed} csv={args.csv}")
    return 0
