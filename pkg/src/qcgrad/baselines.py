"""Baseline gradient estimators: central finite differences and SPSA.

Both take an opaque loss evaluator ``f(theta) -> float`` so their evaluation
counts are exactly what they appear to be: 2 * len(theta) calls for finite
differences, 2 calls for one SPSA estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

LossFunction = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class SpsaConfig:
    """SPSA constants following Spall's practical guidelines.

    ``a``/``A``/``alpha`` parameterize the classic step-size schedule
    a_k = a / (A + k + 1)^alpha; the trainer here applies SPSA estimates
    with its own plain learning rate so that timing comparisons isolate
    gradient-computation cost, but the schedule constants are kept for
    standalone use.  ``c``/``gamma_exp`` set the perturbation decay
    c_k = c / (k + 1)^gamma_exp.
    """

    a: float = 0.1
    c: float = 0.1
    A: float = 20.0
    alpha: float = 0.602
    gamma_exp: float = 0.101
    seed: int = 0

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError("a and c must be > 0")
        if not (0 < self.alpha <= 1 and 0 < self.gamma_exp <= 1):
            raise ValueError("alpha and gamma_exp must lie in (0, 1]")

    def perturbation_size(self, k: int) -> float:
        """c_k = c / (k + 1)^gamma_exp, monotonically decaying in k."""
        return self.c / (k + 1) ** self.gamma_exp


def _check_value(value: float, where: str) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ArithmeticError(f"loss evaluated to a non-finite value at {where}")
    return value


def finite_difference_grad(f: LossFunction, theta: np.ndarray, h: float) -> np.ndarray:
    """Central finite differences: (f(theta + h e_m) - f(theta - h e_m)) / 2h.

    Calls ``f`` exactly ``2 * len(theta)`` times.
    """
    if h <= 0:
        raise ValueError(f"step size must be > 0, got {h}")
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    probe = theta.copy()
    for m in range(theta.size):
        probe[m] = theta[m] + h
        f_plus = _check_value(f(probe), f"coordinate {m}, +h")
        probe[m] = theta[m] - h
        f_minus = _check_value(f(probe), f"coordinate {m}, -h")
        probe[m] = theta[m]
        grad[m] = (f_plus - f_minus) / (2.0 * h)
    return grad


def spsa_grad(f: LossFunction, theta: np.ndarray, k: int, cfg: SpsaConfig) -> np.ndarray:
    """One simultaneous-perturbation estimate at iteration k; 2 calls to ``f``.

    The Rademacher direction is drawn from a generator seeded by
    (cfg.seed, k), so estimates are reproducible and independent across
    iterations.
    """
    if k < 0:
        raise ValueError(f"iteration index must be >= 0, got {k}")
    theta = np.asarray(theta, dtype=float)
    rng = np.random.default_rng([cfg.seed, k])
    delta = rng.integers(0, 2, size=theta.size) * 2.0 - 1.0
    ck = cfg.perturbation_size(k)
    f_plus = _check_value(f(theta + ck * delta), f"iteration {k}, +c_k")
    f_minus = _check_value(f(theta - ck * delta), f"iteration {k}, -c_k")
    # 1/delta == delta componentwise for +/-1 entries
    return ((f_plus - f_minus) / (2.0 * ck)) * delta
