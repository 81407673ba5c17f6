"""Full-batch gradient descent over any of the supported gradient methods.

The heavy lifting happens in :class:`CircuitObjective`, which encodes the
dataset once and evaluates losses/gradients for the whole batch with
vectorized kernels.  Per-sample quantities are reduced in fixed order, so a
fixed seed reproduces every history bit for bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .autodiff import backward_batch
from .baselines import SpsaConfig, finite_difference_grad, spsa_grad
from .circuit import AnsatzSpec, BatchTape, check_theta, encode_batch, run_variational
from .datasets import Dataset
from .heads import ClassificationHead, RegressionHead, classification_batch, regression_batch
from .state import z_sign_vector

GRADIENT_METHODS = ("backprop", "finite_difference", "spsa")


class TrainingDivergedError(ArithmeticError):
    """Raised when the loss or gradient turns non-finite during training."""

    def __init__(self, iteration: int, message: str):
        super().__init__(f"iteration {iteration}: {message}")
        self.iteration = iteration


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    iterations: int = 200
    gamma: float = 1.0
    init_seed: int = 0
    init_range: tuple[float, float] = (0.0, 2.0 * math.pi)
    gradient_method: str = "backprop"
    fd_step: float = 1e-4
    spsa: SpsaConfig | None = None

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.gradient_method not in GRADIENT_METHODS:
            raise ValueError(
                f"unknown gradient_method {self.gradient_method!r}; "
                f"expected one of {GRADIENT_METHODS}"
            )

    def spsa_config(self) -> SpsaConfig:
        """The SPSA constants to use; A defaults to 0.1 * iterations."""
        if self.spsa is not None:
            return self.spsa
        return SpsaConfig(A=max(1.0, 0.1 * self.iterations), seed=self.init_seed)


@dataclass(frozen=True)
class TrainResult:
    final_theta: np.ndarray
    loss_history: np.ndarray
    metric_history: np.ndarray
    wall_time_seconds: float


def r_squared(predictions: np.ndarray, targets: np.ndarray) -> float:
    """Coefficient of determination, 1 - SS_res / SS_tot."""
    predictions = np.asarray(predictions, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if predictions.shape != targets.shape or predictions.size == 0:
        raise ValueError("predictions and targets must be equal-length and non-empty")
    ss_tot = float(np.sum((targets - targets.mean()) ** 2))
    if ss_tot == 0.0:
        raise ValueError("targets have zero variance; R^2 is undefined")
    ss_res = float(np.sum((targets - predictions) ** 2))
    return 1.0 - ss_res / ss_tot


def accuracy(predicted_labels: np.ndarray, true_labels: np.ndarray) -> float:
    """Fraction of matching 0/1 labels."""
    predicted_labels = np.asarray(predicted_labels)
    true_labels = np.asarray(true_labels)
    if predicted_labels.shape != true_labels.shape:
        raise ValueError("label vectors must have equal length")
    return float(np.mean(predicted_labels == true_labels))


class CircuitObjective:
    """Batched loss/gradient evaluations for one (dataset, circuit, head).

    The encoded input states depend only on the data, so they are computed
    once and shared by every evaluation.
    """

    def __init__(self, dataset: Dataset, spec: AnsatzSpec, head):
        if dataset.feature_dim != spec.feature_dim:
            raise ValueError(
                f"dataset is {dataset.feature_dim}-D but the circuit encodes "
                f"{spec.feature_dim}-D inputs"
            )
        if isinstance(head, RegressionHead):
            if dataset.task != "regression":
                raise ValueError(f"regression head on a {dataset.task} dataset")
        elif isinstance(head, ClassificationHead):
            if dataset.task != "classification":
                raise ValueError(f"classification head on a {dataset.task} dataset")
        else:
            raise TypeError(f"unsupported head {type(head).__name__}")
        self.spec = spec
        self.head = head
        self.targets = np.asarray(dataset.targets, dtype=float)
        self.encoded = encode_batch(dataset.x, spec)

    def _head_batch(self, probs: np.ndarray):
        if isinstance(self.head, RegressionHead):
            return regression_batch(probs, self.targets, self.head, self.spec.n_qubits)
        return classification_batch(probs, self.targets, self.head, self.spec.n_qubits)

    def loss(self, theta: np.ndarray) -> float:
        """Mean loss over the batch; the opaque evaluator handed to FD/SPSA."""
        final = run_variational(self.encoded, theta, self.spec, record=False)
        losses, _, _ = self._head_batch(np.abs(final) ** 2)
        return float(losses.mean())

    def evaluate(self, theta: np.ndarray) -> tuple[float, float, np.ndarray]:
        """(mean loss, metric, per-sample outputs) at theta.

        The metric is R^2 for regression and 0/1 accuracy (label 1 iff
        y1 > 0.5) for classification; outputs are predictions or y1.
        """
        final = run_variational(self.encoded, theta, self.spec, record=False)
        losses, outputs, _ = self._head_batch(np.abs(final) ** 2)
        return float(losses.mean()), self._metric(outputs), outputs

    def _metric(self, outputs: np.ndarray) -> float:
        if isinstance(self.head, RegressionHead):
            return r_squared(outputs, self.targets)
        return accuracy((outputs > 0.5).astype(int), self.targets.astype(int))

    def loss_and_grad_backprop(self, theta: np.ndarray) -> tuple[float, float, np.ndarray]:
        """(mean loss, metric, mean gradient) via one forward and one backward."""
        tape = forward_batch_from_encoded(self.encoded, theta, self.spec)
        losses, outputs, dL_dp = self._head_batch(np.abs(tape.final) ** 2)
        grads = backward_batch(tape, dL_dp, self.spec)
        return float(losses.mean()), self._metric(outputs), grads.mean(axis=0)

    def grad_backprop(self, theta: np.ndarray) -> np.ndarray:
        """Mean gradient only (no metric bookkeeping); used by benchmarks."""
        tape = forward_batch_from_encoded(self.encoded, theta, self.spec)
        _, _, dL_dp = self._head_batch(np.abs(tape.final) ** 2)
        return backward_batch(tape, dL_dp, self.spec).mean(axis=0)


def forward_batch_from_encoded(encoded: np.ndarray, theta: np.ndarray, spec: AnsatzSpec) -> BatchTape:
    """Batch tape starting from already-encoded amplitudes."""
    theta = check_theta(theta, spec)
    posts = run_variational(encoded, theta, spec, record=True)
    return BatchTape(spec=spec, theta=theta, encoded=encoded, posts=posts)


def initial_theta(spec: AnsatzSpec, cfg: TrainConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.init_seed)
    low, high = cfg.init_range
    return rng.uniform(low, high, size=spec.param_count)


def train(dataset: Dataset, spec: AnsatzSpec, head, cfg: TrainConfig) -> TrainResult:
    """Plain full-batch gradient descent: theta <- theta - lr * mean gradient.

    The loss/metric histories are recorded at the pre-update parameters of
    each iteration.  Raises :class:`TrainingDivergedError` (with the
    iteration index) if anything turns non-finite.
    """
    objective = CircuitObjective(dataset, spec, head)
    theta = initial_theta(spec, cfg)
    losses = np.empty(cfg.iterations)
    metrics = np.empty(cfg.iterations)
    spsa_cfg = cfg.spsa_config() if cfg.gradient_method == "spsa" else None
    start = time.perf_counter()
    for it in range(cfg.iterations):
        try:
            if cfg.gradient_method == "backprop":
                loss, metric, grad = objective.loss_and_grad_backprop(theta)
            elif cfg.gradient_method == "finite_difference":
                loss, metric, _ = objective.evaluate(theta)
                grad = finite_difference_grad(objective.loss, theta, cfg.fd_step)
            else:
                loss, metric, _ = objective.evaluate(theta)
                grad = spsa_grad(objective.loss, theta, it, spsa_cfg)
        except ArithmeticError as exc:
            raise TrainingDivergedError(it, str(exc)) from exc
        if not math.isfinite(loss) or not np.all(np.isfinite(grad)):
            raise TrainingDivergedError(it, "non-finite loss or gradient")
        losses[it] = loss
        metrics[it] = metric
        theta = theta - cfg.learning_rate * grad
    wall = time.perf_counter() - start
    return TrainResult(
        final_theta=theta, loss_history=losses, metric_history=metrics, wall_time_seconds=wall
    )


def predict_regression(xs: np.ndarray, theta: np.ndarray, spec: AnsatzSpec, head: RegressionHead) -> np.ndarray:
    """Model outputs for arbitrary inputs of shape (B, d)."""
    final = run_variational(encode_batch(xs, spec), theta, spec, record=False)
    probs = np.abs(final) ** 2
    return head.output_scale * (probs @ z_sign_vector(spec.n_qubits, head.measured_qubit))


def predict_classification(xs: np.ndarray, theta: np.ndarray, spec: AnsatzSpec, head: ClassificationHead) -> np.ndarray:
    """Class-1 probabilities y1 for arbitrary inputs of shape (B, d)."""
    final = run_variational(encode_batch(xs, spec), theta, spec, record=False)
    probs = np.abs(final) ** 2
    _, y1, _ = classification_batch(probs, np.zeros(len(xs)), head, spec.n_qubits)
    return y1
