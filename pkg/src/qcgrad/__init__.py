"""Statevector simulation of layered parameterized quantum circuits with
exact reverse-mode gradients, baseline gradient estimators, gradient-descent
trainers for synthetic regression/classification tasks, and a wall-clock
benchmark of the gradient methods.
"""

__version__ = "0.1.0"

from .autodiff import backward, backward_batch, seed_amplitude_cotangent
from .baselines import SpsaConfig, finite_difference_grad, spsa_grad
from .bench import BenchmarkRecord, run_benchmark
from .circuit import (
    AnsatzSpec,
    ForwardTape,
    encode_input,
    entangler_layer,
    forward,
    forward_batch,
)
from .datasets import Dataset, Sample, gen_circles, gen_function_dataset, gen_moons
from .gates import CZ, d_ry, d_rz, ry, rz
from .heads import (
    ClassificationHead,
    RegressionHead,
    classification_cotangent,
    cross_entropy_loss,
    mse_loss,
    regression_cotangent,
    regression_output,
    softmax_gamma,
)
from .state import (
    QuantumState,
    apply_cz,
    apply_single_qubit,
    basis_state,
    marginal,
    probabilities,
    z_expectation,
)
from .trainer import (
    TrainConfig,
    TrainingDivergedError,
    TrainResult,
    accuracy,
    r_squared,
    train,
)

__all__ = [
    "__version__",
    "AnsatzSpec",
    "BenchmarkRecord",
    "ClassificationHead",
    "CZ",
    "Dataset",
    "ForwardTape",
    "QuantumState",
    "RegressionHead",
    "Sample",
    "SpsaConfig",
    "TrainConfig",
    "TrainResult",
    "TrainingDivergedError",
    "accuracy",
    "apply_cz",
    "apply_single_qubit",
    "backward",
    "backward_batch",
    "basis_state",
    "classification_cotangent",
    "cross_entropy_loss",
    "d_ry",
    "d_rz",
    "encode_input",
    "entangler_layer",
    "finite_difference_grad",
    "forward",
    "forward_batch",
    "gen_circles",
    "gen_function_dataset",
    "gen_moons",
    "marginal",
    "mse_loss",
    "probabilities",
    "r_squared",
    "regression_cotangent",
    "regression_output",
    "run_benchmark",
    "ry",
    "rz",
    "seed_amplitude_cotangent",
    "softmax_gamma",
    "spsa_grad",
    "train",
    "z_expectation",
]
