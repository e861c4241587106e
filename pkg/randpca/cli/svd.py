# randpca/cli/svd.py

import argparse
import time

from randpca.core.config import settings
from randpca.core.exceptions import ConfigError
from randpca.core.logging_config import logger
from randpca.core.models import SketchConfig
from randpca.core.rng import child_seed
from randpca.linalg import drivers, nystrom, specnorm, testgen
from randpca.storage.factor_store import write_factors
from randpca.storage.matrix_market import read_matrix_market

MODES = ("svd", "eig", "nystrom")


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "svd",
        help="Factor a matrix file or a generated test matrix.",
        description="Computes a randomized rank-k factorization, writes the "
        "factors and prints the spectral-norm discrepancy and runtime.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="Matrix Market file to factor.")
    source.add_argument("--gen", help="Generate the input: 1-6, hard30, hard100 or signflip.")
    parser.add_argument("--m", type=int, help="Rows of the generated matrix (default: --n).")
    parser.add_argument("--n", type=int, default=0, help="Columns of the generated matrix.")
    parser.add_argument("--k", type=int, required=True, help="Target rank.")
    parser.add_argument("--oversample", type=int, default=settings.DEFAULT_OVERSAMPLE)
    parser.add_argument("--its", type=int, default=settings.DEFAULT_ITS)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--center", action="store_true", help="Center columns (PCA).")
    parser.add_argument("--mode", choices=MODES, default="svd")
    parser.add_argument("--pivoting", action="store_true", help="Column-pivoted final QR.")
    parser.add_argument("--direct", action="store_true", help="Allow the dense shortcut.")
    parser.add_argument("--snorm-its", type=int, default=settings.SNORM_MAX_ITS,
                        help="Cap on power-method steps for err.")
    parser.add_argument("--snorm-tol", type=float, default=settings.SNORM_TOL,
                        help="Relative-change stop for err; 0 runs exactly --snorm-its steps.")
    parser.add_argument("--out-prefix", required=True, help="Prefix of the factor files.")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    if args.center and args.mode != "svd":
        raise ConfigError("--center applies to --mode svd only")

    cfg = SketchConfig(
        k=args.k,
        l=args.k + args.oversample,
        its=args.its,
        seed=args.seed,
        pivoting=args.pivoting,
        direct=args.direct,
    )

    if args.input:
        op = read_matrix_market(args.input)
    else:
        n = args.n
        m = args.m if args.m is not None else n
        op = testgen.generate(
            args.gen, m, n, args.k, args.seed, psd=args.mode != "svd"
        ).op
    logger.info(f"Factoring {op!r} with k={cfg.k}, l={cfg.l}, its={cfg.its}, mode={args.mode}.")

    start = time.perf_counter()
    if args.mode == "eig":
        f = drivers.reig(op, cfg)
    elif args.mode == "nystrom":
        f = nystrom.nystrom(op, cfg)
    elif args.center:
        f = drivers.rpca(op, cfg, center=True)
    else:
        f = drivers.rsvd(op, cfg)
    runtime = time.perf_counter() - start

    write_factors(args.out_prefix, f)

    snorm_seed = child_seed(args.seed, 3)
    if args.mode == "svd":
        err = specnorm.diffsnorm(
            op, f, its=args.snorm_its, seed=snorm_seed, tol=args.snorm_tol
        )
    else:
        err = specnorm.diffsnorm_eig(
            op, f, its=args.snorm_its, seed=snorm_seed, tol=args.snorm_tol
        )

    print(
        f"diffsnorm={err.value:.17g} runtime_sec={runtime:.6f} "
        f"k={cfg.k} l={cfg.l} its={cfg.its} mode={args.mode}"
    )
    return 0
