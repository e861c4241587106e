# randpca/main.py

import argparse
import os
import sys
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import ValidationError

from randpca.cli import bench, diffsnorm, gen, svd
from randpca.core.exceptions import RandPCAError
from randpca.core.logging_config import logger

load_dotenv(os.path.join(os.getcwd(), ".env"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randpca",
        description="Randomized low-rank factorizations, test matrices and accuracy sweeps.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (svd, gen, diffsnorm, bench):
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Runs one subcommand and returns its exit status: 0 on success, 2 for
    usage and configuration errors, 1 for everything else.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        return args.func(args)
    except RandPCAError as e:
        logger.warning(f"'{args.command}' failed: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (OSError, np.linalg.LinAlgError) as e:
        logger.error(f"'{args.command}' failed: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
