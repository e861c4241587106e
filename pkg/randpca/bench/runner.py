# randpca/bench/runner.py

"""
Benchmark sweeps: for every parameter tuple and trial, build or load the
matrix, time the factorization alone, measure the spectral-norm
discrepancy with the power method and append one record.
"""

import glob
import math
import multiprocessing
import os
import time
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from randpca.core.config import settings
from randpca.core.exceptions import ConfigError
from randpca.core.logging_config import logger
from randpca.core.models import BenchRecord, Method, SketchConfig, SparsityScore, Suite
from randpca.core.rng import child_seed
from randpca.linalg import drivers, nystrom, specnorm, testgen
from randpca.linalg.matop import LinearOperator, nnz
from randpca.storage.matrix_market import read_matrix_market
from randpca.storage.results import CsvAppender, write_plot_data

SUITE_DEFAULTS = {
    "dense": {"k": [10], "oversample": [2, 4, 8, 16, 32], "its": [2]},
    "signflip": {"k": [4], "oversample": [2], "its": [0, 2, 4]},
    "sparse": {"k": [10], "oversample": [2], "its": [2, 5, 8]},
}


class BenchPlan(BaseModel):
    """Everything a sweep needs; list fields left empty take suite defaults."""

    suite: Suite
    methods: List[Method] = Field(default_factory=lambda: ["rsvd"])
    dists: List[str] = Field(default_factory=lambda: ["1", "2", "3", "4", "5"])
    sizes: List[Tuple[int, int]] = Field(default_factory=lambda: [(1000, 1000)])
    k_list: List[int] = Field(default_factory=list)
    oversample_list: List[int] = Field(default_factory=list)
    its_list: List[int] = Field(default_factory=list)
    trials: int = Field(10, ge=1)
    seed_base: int = 0
    input_dir: Optional[str] = None
    snorm_its: int = Field(default_factory=lambda: settings.SNORM_MAX_ITS, ge=1)
    snorm_tol: float = Field(default_factory=lambda: settings.SNORM_TOL, ge=0.0)
    workers: int = Field(default_factory=lambda: settings.N_WORKERS)

    def resolved(self, key: str, values: List[int]) -> List[int]:
        return values or SUITE_DEFAULTS[self.suite][key]


class BenchTask(BaseModel):
    """One (matrix, parameters, trial) tuple of a sweep."""

    suite: Suite
    method: Method
    source: str
    m: int = 0
    n: int = 0
    k: int
    l: int
    its: int
    trial: int
    seed: int
    snorm_its: int
    snorm_tol: float = 0.0


def sparsity_score(op: LinearOperator, k: int) -> SparsityScore:
    """alpha = (nnz / (m n)) (k / max(m, n))."""
    m, n = op.shape
    return SparsityScore(alpha=(nnz(op) / (m * n)) * (k / max(m, n)))


def build_tasks(plan: BenchPlan) -> List[BenchTask]:
    """
    Expands a plan into tasks. Loops that change the matrix are outermost
    so consecutive tasks reuse the cached matrix.
    """
    k_list = plan.resolved("k", plan.k_list)
    os_list = plan.resolved("oversample", plan.oversample_list)
    its_list = plan.resolved("its", plan.its_list)

    if plan.suite == "sparse":
        if not plan.input_dir or not os.path.isdir(plan.input_dir):
            raise ConfigError(f"sparse suite needs an input directory, got {plan.input_dir!r}")
        sources = sorted(glob.glob(os.path.join(plan.input_dir, "*.mtx")))
        if not sources:
            raise ConfigError(f"no .mtx files in '{plan.input_dir}'")
        shapes = [(0, 0)]
    elif plan.suite == "signflip":
        sources = ["signflip"]
        shapes = plan.sizes
    else:
        sources = plan.dists
        shapes = plan.sizes

    tasks = []
    for source in sources:
        for m, n in shapes:
            for k in k_list:
                for trial in range(plan.trials):
                    for over in os_list:
                        for its in its_list:
                            for method in plan.methods:
                                tasks.append(
                                    BenchTask(
                                        suite=plan.suite,
                                        method=method,
                                        source=source,
                                        m=m,
                                        n=n,
                                        k=k,
                                        l=k + over,
                                        its=its,
                                        trial=trial,
                                        seed=plan.seed_base + trial,
                                        snorm_its=plan.snorm_its,
                                        snorm_tol=plan.snorm_tol,
                                    )
                                )
    logger.info(f"Bench plan '{plan.suite}' expanded to {len(tasks)} tasks.")
    return tasks


@lru_cache(maxsize=4)
def _load_matrix(
    suite: str, source: str, m: int, n: int, k: int, seed: int, psd: bool
) -> Tuple[LinearOperator, Optional[np.ndarray]]:
    if suite == "sparse":
        return read_matrix_market(source), None
    generated = testgen.generate(source, m, n, k, seed, psd=psd)
    return generated.op, generated.sigma


def _factor(method: str, op: LinearOperator, cfg: SketchConfig):
    if method == "rsvd":
        return drivers.rsvd(op, cfg)
    if method == "rpca":
        return drivers.rpca(op, cfg, center=True)
    if method == "reig":
        return drivers.reig(op, cfg)
    return nystrom.nystrom(op, cfg)


def run_task(task: BenchTask) -> BenchRecord:
    """
    Runs one tuple. Runtime covers the factorization only; the error is
    the power-method estimate of the spectral-norm discrepancy, iterated
    until it stops changing (task.snorm_tol) or hits task.snorm_its.
    """
    selfadjoint = task.method in ("reig", "nystrom")
    op, _ = _load_matrix(
        task.suite, task.source, task.m, task.n, task.k, task.seed, selfadjoint
    )
    m, n = op.shape
    cfg = SketchConfig(k=task.k, l=task.l, its=task.its, seed=task.seed)

    start = time.perf_counter()
    f = _factor(task.method, op, cfg)
    runtime = time.perf_counter() - start

    snorm_seed = child_seed(task.seed, 3)
    if selfadjoint:
        err = specnorm.diffsnorm_eig(
            op, f, its=task.snorm_its, seed=snorm_seed, tol=task.snorm_tol
        )
    else:
        err = specnorm.diffsnorm(
            op, f, its=task.snorm_its, seed=snorm_seed, tol=task.snorm_tol
        )
    alpha = sparsity_score(op, task.k).alpha if task.suite == "sparse" else None

    return BenchRecord(
        method=task.method,
        dist=_label(task),
        m=m,
        n=n,
        k=task.k,
        l=task.l,
        its=task.its,
        trial=task.trial,
        seed=task.seed,
        err=err.value,
        fro_err=specnorm.fro_discrepancy(op, f),
        runtime_sec=runtime,
        alpha=alpha,
    )


def _label(task: BenchTask) -> str:
    if task.suite == "sparse":
        return os.path.basename(task.source)
    if task.suite == "signflip":
        return "signflip"
    return str(task.source)


def _task_shape(task: BenchTask) -> Tuple[Optional[int], Optional[int]]:
    """Shape for an error-marker row; None when the input itself cannot be read."""
    if task.suite != "sparse":
        return task.m, task.n
    try:
        op, _ = _load_matrix(
            task.suite, task.source, task.m, task.n, task.k, task.seed,
            task.method in ("reig", "nystrom"),
        )
    except Exception:
        return None, None
    return op.shape


def run_task_safe(task: BenchTask) -> BenchRecord:
    """
    Like `run_task`, but a failure becomes an error-marker record
    (method suffixed with '!<ErrorClass>', empty measurements).
    """
    try:
        return run_task(task)
    except Exception as e:
        logger.error(
            f"Bench task {task.method} on '{task.source}' "
            f"(k={task.k}, l={task.l}, its={task.its}, trial={task.trial}) failed: {e}",
            exc_info=True,
        )
        m, n = _task_shape(task)
        return BenchRecord(
            method=f"{task.method}!{type(e).__name__}",
            dist=_label(task),
            m=m,
            n=n,
            k=task.k,
            l=task.l,
            its=task.its,
            trial=task.trial,
            seed=task.seed,
            err=math.nan,
            fro_err=math.nan,
            runtime_sec=math.nan,
        )


def plot_curves(suite: str, frame: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    """
    Averages records over trials and groups them into error-vs-runtime
    curves: one per method/distribution/size/k with l swept (dense), one
    per method/its/k with n swept (signflip), and one per method/alpha
    decade/k/its with one point per matrix (sparse).
    """
    ok = frame[~frame["method"].str.contains("!") & frame["err"].notna()]
    if ok.empty:
        return {}
    curves = {}

    if suite == "dense":
        keys, sweep = ["method", "dist", "m", "n", "k"], "l"
    elif suite == "signflip":
        keys, sweep = ["method", "its", "k"], "n"
    else:
        ok = ok.assign(
            bin=[SparsityScore(alpha=a).decade for a in ok["alpha"].fillna(0.0)]
        )
        keys, sweep = ["method", "bin", "k", "its"], "dist"

    means = (
        ok.groupby(keys + [sweep], sort=True)[["runtime_sec", "err"]]
        .mean()
        .reset_index()
    )
    for key, group in means.groupby(keys, sort=True):
        key = dict(zip(keys, key))
        if suite == "dense":
            stem = f"dense_{key['method']}_{key['dist']}_{key['m']}x{key['n']}_k{key['k']}"
        elif suite == "signflip":
            stem = f"signflip_{key['method']}_its{key['its']}_k{key['k']}"
        else:
            stem = f"sparse_{key['method']}_{key['bin']}_k{key['k']}_its{key['its']}"
        curves[stem] = group.sort_values(sweep)[["runtime_sec", "err"]]
    return curves


def run_sweep(
    plan: BenchPlan, csv_path: str, plotdata_dir: Optional[str] = None
) -> pd.DataFrame:
    """
    Runs every task of `plan`, appending records to `csv_path` in task
    order. With plan.workers > 1 tasks run in a process pool; the parent
    stays the only writer, so the CSV does not depend on scheduling.

    Returns:
    - DataFrame: all records, error markers included.
    """
    tasks = build_tasks(plan)
    appender = CsvAppender(csv_path)
    records: List[BenchRecord] = []

    if plan.workers > 1:
        logger.info(f"Running {len(tasks)} tasks on {plan.workers} workers.")
        with multiprocessing.Pool(plan.workers) as pool:
            for record in pool.imap(run_task_safe, tasks):
                appender.append([record])
                records.append(record)
    else:
        for number, task in enumerate(tasks, start=1):
            logger.info(
                f"Task {number}/{len(tasks)}: {task.method} on '{task.source}' "
                f"k={task.k} l={task.l} its={task.its} trial={task.trial}"
            )
            record = run_task_safe(task)
            appender.append([record])
            records.append(record)

    frame = pd.DataFrame([r.model_dump() for r in records])
    if plan.suite == "sparse" and not frame.empty:
        for path, alpha in frame.groupby("dist")["alpha"].first().items():
            if alpha == alpha:
                logger.info(
                    f"alpha({path}) = {alpha:.3e} in bin {SparsityScore(alpha=alpha).decade}"
                )
    if plotdata_dir:
        write_plot_data(plotdata_dir, plot_curves(plan.suite, frame))
    return frame
