"""Wall-clock comparison of gradient methods across circuit depth and width.

Each benchmark cell trains for a fixed number of iterations on the same
classification dataset and records the wall time of the bare loop —
forward, gradient, and parameter update only.  Dataset generation,
encoding, and parameter initialization happen outside the timed region,
one warm-up iteration is discarded, and every cell is repeated with the
median reported.  Cells run strictly sequentially.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .baselines import finite_difference_grad, spsa_grad
from .circuit import AnsatzSpec
from .datasets import Dataset
from .heads import ClassificationHead
from .trainer import GRADIENT_METHODS, CircuitObjective, TrainConfig, initial_theta


@dataclass(frozen=True)
class BenchmarkRecord:
    method: str
    n_qubits: int
    depth_l: int
    n_params: int
    seconds_per_100_iterations: float
    error: str | None = None


def _time_cell(
    method: str, n: int, l: int, dataset: Dataset, cfg: TrainConfig, repeats: int
) -> float:
    spec = AnsatzSpec(n_qubits=n, depth_l=l, feature_dim=dataset.feature_dim)
    head = ClassificationHead(gamma=cfg.gamma)
    objective = CircuitObjective(dataset, spec, head)
    theta0 = initial_theta(spec, cfg)
    lr = cfg.learning_rate
    spsa_cfg = cfg.spsa_config()

    if method == "backprop":
        step = lambda theta, k: objective.grad_backprop(theta)
    elif method == "finite_difference":
        step = lambda theta, k: finite_difference_grad(objective.loss, theta, cfg.fd_step)
    else:
        step = lambda theta, k: spsa_grad(objective.loss, theta, k, spsa_cfg)

    times = []
    for _ in range(repeats):
        _ = theta0 - lr * step(theta0, 0)  # warm-up iteration, untimed
        theta = theta0
        start = time.perf_counter()
        for k in range(cfg.iterations):
            theta = theta - lr * step(theta, k)
        times.append(time.perf_counter() - start)
    return statistics.median(times) * (100.0 / cfg.iterations)


def run_benchmark(
    methods,
    depth_sweep,
    qubit_sweep,
    dataset: Dataset,
    cfg: TrainConfig,
    fixed_n: int = 4,
    fixed_l: int = 10,
    repeats: int = 3,
) -> list[BenchmarkRecord]:
    """One record per (method, cell), depth cells first then qubit cells.

    A cell that fails numerically is recorded with ``error`` set and a NaN
    time instead of aborting the whole run.
    """
    methods = list(methods)
    depth_sweep = list(depth_sweep)
    qubit_sweep = list(qubit_sweep)
    if not methods or (not depth_sweep and not qubit_sweep):
        raise ValueError("need at least one method and one sweep cell")
    for m in methods:
        if m not in GRADIENT_METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {GRADIENT_METHODS}")
    if dataset.task != "classification":
        raise ValueError("benchmarks run on a classification dataset")
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")

    cells = [(fixed_n, l) for l in depth_sweep] + [(n, fixed_l) for n in qubit_sweep]
    records = []
    for method in methods:
        for n, l in cells:
            try:
                seconds = _time_cell(method, n, l, dataset, cfg, repeats)
                error = None
            except (ArithmeticError, ValueError) as exc:
                seconds = float("nan")
                error = str(exc)
            records.append(
                BenchmarkRecord(
                    method=method,
                    n_qubits=n,
                    depth_l=l,
                    n_params=2 * n * (l + 1),
                    seconds_per_100_iterations=seconds,
                    error=error,
                )
            )
    return records
