# randpca/cli/diffsnorm.py

import argparse

from randpca.core.config import settings
from randpca.core.exceptions import FactorFileError, ShapeError
from randpca.core.models import EigenApprox
from randpca.linalg import specnorm
from randpca.storage.factor_store import read_factors
from randpca.storage.matrix_market import read_matrix_market


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "diffsnorm",
        help="Estimate ||A - U diag(S) V^H|| for stored factors.",
    )
    parser.add_argument("--input", required=True, help="Matrix Market file holding A.")
    parser.add_argument("--factors", required=True, help="Prefix given to 'svd --out-prefix'.")
    parser.add_argument("--its", type=int, default=settings.SNORM_ITS)
    parser.add_argument("--tol", type=float, default=0.0,
                        help="Relative-change stop; --its then acts as a cap.")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    op = read_matrix_market(args.input)
    f = read_factors(args.factors)
    try:
        if isinstance(f, EigenApprox):
            err = specnorm.diffsnorm_eig(op, f, its=args.its, seed=args.seed, tol=args.tol)
        else:
            err = specnorm.diffsnorm(op, f, its=args.its, seed=args.seed, tol=args.tol)
    except ShapeError as e:
        raise FactorFileError(f"factors '{args.factors}' do not fit '{args.input}': {e.detail}")
    print(f"diffsnorm={err.value:.17g}")
    return 0
