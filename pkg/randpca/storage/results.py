# randpca/storage/results.py

import os
import threading
from typing import Dict, Iterable, List

import pandas as pd

from randpca.core.logging_config import logger
from randpca.core.models import CSV_COLUMNS, BenchRecord

FLOAT_FORMAT = "%.17g"


class CsvAppender:
    """
    Serialized appender for benchmark rows. The header is written once
    when the file is created; every row is flushed as it arrives.
    """

    def __init__(self, path: str):
        self.path = path
        self._lock = threading.Lock()
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as out:
            out.write(",".join(CSV_COLUMNS) + "\n")
        logger.info(f"Writing benchmark records to '{path}'.")

    def append(self, records: Iterable[BenchRecord]) -> None:
        frame = pd.DataFrame([r.model_dump() for r in records], columns=CSV_COLUMNS)
        if frame.empty:
            return
        with self._lock:
            frame.to_csv(
                self.path,
                mode="a",
                header=False,
                index=False,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
            )


def read_records(path: str) -> pd.DataFrame:
    """Loads a benchmark CSV."""
    return pd.read_csv(path)


def write_plot_data(directory: str, curves: Dict[str, pd.DataFrame]) -> List[str]:
    """
    Writes one two-column (runtime_sec, err) file per curve.

    Args:
    - directory (str): output directory, created if needed.
    - curves (Dict[str, DataFrame]): file stem -> frame with
      `runtime_sec` and `err` columns, already in plotting order.

    Returns:
    - List[str]: the paths written.
    """
    os.makedirs(directory, exist_ok=True)
    written = []
    for stem, frame in sorted(curves.items()):
        path = os.path.join(directory, f"{stem}.dat")
        with open(path, "w", encoding="utf-8", newline="") as out:
            out.write("# runtime_sec err\n")
            frame[["runtime_sec", "err"]].to_csv(
                out,
                sep=" ",
                header=False,
                index=False,
                float_format=FLOAT_FORMAT,
                lineterminator="\n",
            )
        written.append(path)
    logger.info(f"Wrote {len(written)} plot-data files to '{directory}'.")
    return written
