"""Seeded synthetic datasets: 1-D regression targets and 2-D two-class shapes.

All coordinates are guaranteed to lie in [-1, 1] (a hard requirement of the
input encoding).  Randomness comes from numpy's seeded PCG64 generator
(ziggurat normals), so a given seed reproduces a dataset byte for byte on
any machine running the same numpy; cross-language reproduction is not a
goal.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

REGRESSION_KINDS = ("linear", "square", "sine")


@dataclass(frozen=True)
class Sample:
    x: np.ndarray
    target: float


@dataclass(frozen=True)
class Dataset:
    """Columnar dataset: inputs (count, dim) and targets/labels (count,)."""

    x: np.ndarray
    targets: np.ndarray
    task: str  # 'regression' | 'classification'
    seed: int

    def __post_init__(self):
        if self.task not in ("regression", "classification"):
            raise ValueError(f"unknown task {self.task!r}")
        if len(self.x) == 0:
            raise ValueError("dataset must not be empty")

    def __len__(self) -> int:
        return len(self.x)

    @property
    def feature_dim(self) -> int:
        return self.x.shape[1]

    @property
    def samples(self) -> list[Sample]:
        return [Sample(xi, float(t)) for xi, t in zip(self.x, self.targets)]

    def to_csv(self, path) -> None:
        headers = ["x1", "target"] if self.feature_dim == 1 else ["x1", "x2", "target"]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(headers)
            for xi, t in zip(self.x, self.targets):
                row = [repr(float(v)) for v in xi]
                row.append(repr(int(t)) if self.task == "classification" else repr(float(t)))
                writer.writerow(row)


def _target_fn(kind: str, x: np.ndarray) -> np.ndarray:
    if kind == "linear":
        return x
    if kind == "square":
        return x**2
    if kind == "sine":
        return np.sin(x)
    raise ValueError(f"unknown target kind {kind!r}; expected one of {REGRESSION_KINDS}")


def gen_function_dataset(
    kind: str, count: int = 100, noise_sigma: float = 0.015, seed: int = 0
) -> Dataset:
    """1-D regression data: x ~ U[-1, 1], target = f(x) + noise_sigma * N(0, 1)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=count)
    targets = _target_fn(kind, x) + noise_sigma * rng.standard_normal(count)
    return Dataset(x=x[:, None], targets=targets, task="regression", seed=seed)


def _rescale_to_unit(coords: np.ndarray) -> np.ndarray:
    """Per-coordinate affine map onto [-1, 1], applied only when needed.

    Noise-free shapes that already fit in the box are left untouched so
    their geometry (e.g. exact circle radii) is preserved.
    """
    if np.abs(coords).max() <= 1.0:
        return coords
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    return -1.0 + 2.0 * (coords - lo) / (hi - lo)


def gen_circles(
    count: int = 200, noise_sigma: float = 0.0, inner_factor: float = 0.5, seed: int = 0
) -> Dataset:
    """Two concentric circles: outer (radius 1) labeled 0, inner labeled 1.

    Points sit at evenly spaced angles, half on each circle, with optional
    Gaussian jitter of scale ``noise_sigma`` before the range rescale.
    """
    if count % 2 != 0:
        raise ValueError(f"count must be even, got {count}")
    if not 0.0 < inner_factor < 1.0:
        raise ValueError(f"inner_factor must lie in (0, 1), got {inner_factor}")
    half = count // 2
    angles = np.linspace(0.0, 2.0 * np.pi, half, endpoint=False)
    outer = np.column_stack([np.cos(angles), np.sin(angles)])
    inner = inner_factor * outer
    coords = np.concatenate([outer, inner])
    labels = np.concatenate([np.zeros(half), np.ones(half)])
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        coords = coords + noise_sigma * rng.standard_normal(coords.shape)
    coords = _rescale_to_unit(coords)
    return Dataset(x=coords, targets=labels, task="classification", seed=seed)


def gen_moons(count: int = 200, noise_sigma: float = 0.0, seed: int = 0) -> Dataset:
    """Two interleaving half circles: upper arc labeled 0, shifted lower arc 1.

    Arc A is (cos t, sin t) and arc B is (1 - cos t, 0.5 - sin t) for t
    evenly spaced in [0, pi]; both coordinates are then affinely rescaled
    into [-1, 1].
    """
    if count % 2 != 0:
        raise ValueError(f"count must be even, got {count}")
    half = count // 2
    t = np.linspace(0.0, np.pi, half)
    arc_a = np.column_stack([np.cos(t), np.sin(t)])
    arc_b = np.column_stack([1.0 - np.cos(t), 0.5 - np.sin(t)])
    coords = np.concatenate([arc_a, arc_b])
    labels = np.concatenate([np.zeros(half), np.ones(half)])
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        coords = coords + noise_sigma * rng.standard_normal(coords.shape)
    coords = _rescale_to_unit(coords)
    return Dataset(x=coords, targets=labels, task="classification", seed=seed)


def shuffle_split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded shuffle of the samples followed by a fractional split."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(dataset))
    cut = int(round(train_fraction * len(dataset)))
    if cut == 0 or cut == len(dataset):
        raise ValueError("split leaves one side empty")
    first, second = order[:cut], order[cut:]
    make = lambda idx: Dataset(
        x=dataset.x[idx], targets=dataset.targets[idx], task=dataset.task, seed=seed
    )
    return make(first), make(second)
