# randpca/cli/gen.py

import argparse
import os

from randpca.core.config import settings
from randpca.core.logging_config import logger
from randpca.linalg import testgen
from randpca.storage.factor_store import write_vector
from randpca.storage.matrix_market import write_matrix_market


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "gen",
        help="Write a test matrix in Matrix Market format.",
        description="Generates one of the test matrices; for matrices with a "
        "known spectrum a '<out>.sigma' file lists the exact singular values.",
    )
    parser.add_argument("--dist", required=True, help="1-6, hard30, hard100 or signflip.")
    parser.add_argument("--m", type=int, help="Rows (default: --n).")
    parser.add_argument("--n", type=int, default=0, help="Columns.")
    parser.add_argument("--k", type=int, default=10, help="Head length of distributions 2-5.")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument(
        "--psd", action="store_true", help="Self-adjoint V diag(sigma) V^H (square only)."
    )
    parser.add_argument("--out", required=True, help="Output .mtx path.")
    parser.set_defaults(func=run)


def sigma_path(out: str) -> str:
    return f"{out}.sigma"


def run(args: argparse.Namespace) -> int:
    n = args.n
    m = args.m if args.m is not None else n
    generated = testgen.generate(args.dist, m, n, args.k, args.seed, psd=args.psd)

    directory = os.path.dirname(args.out)
    if directory:
        os.makedirs(directory, exist_ok=True)
    write_matrix_market(
        args.out, generated.op, comment=f"randpca gen {generated.label} seed={args.seed}"
    )
    if generated.sigma is not None:
        write_vector(sigma_path(args.out), generated.sigma)

    rows, cols = generated.op.shape
    logger.info(f"Generated {generated.label} {rows}x{cols} into '{args.out}'.")
    print(f"wrote={args.out} dist={generated.label} m={rows} n={cols}")
    return 0
