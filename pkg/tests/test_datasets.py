import numpy as np
import pytest

from qcgrad.datasets import (
    Dataset,
    gen_circles,
    gen_function_dataset,
    gen_moons,
    shuffle_split,
)


def test_function_dataset_shapes_and_range():
    ds = gen_function_dataset("square", count=100, noise_sigma=0.015, seed=0)
    assert ds.x.shape == (100, 1) and ds.targets.shape == (100,)
    assert ds.task == "regression"
    assert np.all(np.abs(ds.x) <= 1.0)


def test_function_dataset_noise_free_targets():
    for kind, fn in (("linear", lambda x: x), ("square", np.square), ("sine", np.sin)):
        ds = gen_function_dataset(kind, count=50, noise_sigma=0.0, seed=3)
        assert np.array_equal(ds.targets, fn(ds.x[:, 0]))


def test_function_dataset_deterministic():
    a = gen_function_dataset("sine", 64, 0.015, seed=9)
    b = gen_function_dataset("sine", 64, 0.015, seed=9)
    assert a.x.tobytes() == b.x.tobytes()
    assert a.targets.tobytes() == b.targets.tobytes()
    c = gen_function_dataset("sine", 64, 0.015, seed=10)
    assert a.targets.tobytes() != c.targets.tobytes()


def test_function_dataset_validation():
    with pytest.raises(ValueError):
        gen_function_dataset("cube", 10, 0.0, 0)
    with pytest.raises(ValueError):
        gen_function_dataset("sine", 0, 0.0, 0)
    with pytest.raises(ValueError):
        gen_function_dataset("sine", 10, -0.1, 0)


def test_circles_structure():
    ds = gen_circles(count=200, noise_sigma=0.0, inner_factor=0.5, seed=0)
    assert len(ds) == 200 and ds.task == "classification"
    labels = ds.targets.astype(int)
    assert (labels == 0).sum() == 100 and (labels == 1).sum() == 100
    radii = np.linalg.norm(ds.x, axis=1)
    assert np.allclose(radii[labels == 0], 1.0, atol=1e-12)
    assert np.allclose(radii[labels == 1], 0.5, atol=1e-12)
    assert np.all(np.abs(ds.x) <= 1.0)


def test_circles_radius_threshold_oracle():
    ds = gen_circles(count=200, noise_sigma=0.0, inner_factor=0.5, seed=1)
    predicted = (np.linalg.norm(ds.x, axis=1) < 0.75).astype(int)
    assert np.array_equal(predicted, ds.targets.astype(int))


def test_circles_noise_keeps_range_and_determinism():
    a = gen_circles(count=60, noise_sigma=0.1, seed=5)
    b = gen_circles(count=60, noise_sigma=0.1, seed=5)
    assert np.all(np.abs(a.x) <= 1.0)
    assert a.x.tobytes() == b.x.tobytes()


def test_circles_validation():
    with pytest.raises(ValueError):
        gen_circles(count=7)
    with pytest.raises(ValueError):
        gen_circles(count=10, inner_factor=1.0)


def test_moons_structure():
    ds = gen_moons(count=200, noise_sigma=0.0, seed=0)
    labels = ds.targets.astype(int)
    assert (labels == 0).sum() == 100 and (labels == 1).sum() == 100
    assert np.all(np.abs(ds.x) <= 1.0)
    # independent reconstruction: arc A = (cos t, sin t), arc B shifted and
    # flipped, both affinely rescaled per coordinate into [-1, 1]
    t = np.linspace(0.0, np.pi, 100)
    raw = np.concatenate(
        [np.column_stack([np.cos(t), np.sin(t)]),
         np.column_stack([1.0 - np.cos(t), 0.5 - np.sin(t)])]
    )
    lo, hi = raw.min(axis=0), raw.max(axis=0)
    expected = -1.0 + 2.0 * (raw - lo) / (hi - lo)
    assert np.allclose(ds.x, expected, atol=1e-12)
    # first arc-A point is (cos 0, sin 0) = (1, 0) before the rescale
    assert raw[0, 0] == 1.0 and raw[0, 1] == 0.0


def test_moons_deterministic():
    a = gen_moons(count=80, noise_sigma=0.05, seed=2)
    b = gen_moons(count=80, noise_sigma=0.05, seed=2)
    assert a.x.tobytes() == b.x.tobytes()
    assert np.all(np.abs(a.x) <= 1.0)


def test_moons_validation():
    with pytest.raises(ValueError):
        gen_moons(count=11)


def test_dataset_samples_view():
    ds = gen_function_dataset("linear", 5, 0.0, 0)
    samples = ds.samples
    assert len(samples) == 5
    assert samples[2].target == ds.targets[2]
    assert np.array_equal(samples[2].x, ds.x[2])


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(x=np.zeros((3, 1)), targets=np.zeros(3), task="clustering", seed=0)
    with pytest.raises(ValueError):
        Dataset(x=np.zeros((0, 1)), targets=np.zeros(0), task="regression", seed=0)


def test_csv_export(tmp_path):
    ds = gen_circles(count=10, seed=0)
    path = tmp_path / "points.csv"
    ds.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2,target"
    assert len(lines) == 11
    first = lines[1].split(",")
    assert float(first[0]) == ds.x[0, 0]
    assert first[2] == "0"

    ds1 = gen_function_dataset("sine", 4, 0.0, 0)
    path1 = tmp_path / "reg.csv"
    ds1.to_csv(path1)
    lines1 = path1.read_text().splitlines()
    assert lines1[0] == "x1,target"
    assert len(lines1) == 5


def test_shuffle_split():
    ds = gen_moons(count=40, seed=0)
    train, test = shuffle_split(ds, 0.75, seed=4)
    assert len(train) == 30 and len(test) == 10
    merged = np.sort(np.concatenate([train.x[:, 0], test.x[:, 0]]))
    assert np.array_equal(merged, np.sort(ds.x[:, 0]))
    train2, _ = shuffle_split(ds, 0.75, seed=4)
    assert train.x.tobytes() == train2.x.tobytes()
    with pytest.raises(ValueError):
        shuffle_split(ds, 1.0, seed=0)
