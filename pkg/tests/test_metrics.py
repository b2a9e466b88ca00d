import numpy as np
import pytest
from scipy.integrate import quad
from scipy.spatial.distance import directed_hausdorff as scipy_directed

from algset.metrics import PointCloud, hausdorff, pk_distance, pk_record, tail_bound


def test_hausdorff_examples():
    a = np.array([[0.0, 0.0], [1.0, 2.0]])
    assert hausdorff(a, a) == 0.0
    assert hausdorff([[0.0]], [[3.0]]) == 3.0
    assert hausdorff([[0.0], [1.0]], [[0.0]]) == 1.0
    with pytest.raises(ValueError):
        hausdorff(np.empty((0, 2)), a)


def test_hausdorff_matches_scipy(rng):
    a, b = rng.normal(size=(1500, 2)), rng.normal(size=(700, 2)) + 0.3
    ref = max(scipy_directed(a, b)[0], scipy_directed(b, a)[0])
    assert hausdorff(a, b) == pytest.approx(ref, rel=1e-12)


def test_point_cloud_validation():
    with pytest.raises(ValueError):
        PointCloud([[np.nan, 0.0]])
    assert len(PointCloud(np.zeros((3, 2)), "x")) == 3


def _line_pair_integral(T):
    def f(t):
        if t < 0.5:
            return 2 * t * np.exp(-t)
        s = np.sqrt(t * t - 0.25)
        return np.sqrt((t - s) ** 2 + 0.25) * np.exp(-t)
    return quad(f, 0, 0.5)[0] + quad(f, 0.5, T, limit=200)[0]


def test_pk_against_refined_oracle():
    x = np.linspace(-5, 5, 4001)
    a = np.column_stack([x, np.zeros_like(x)])
    b = np.column_stack([x, np.full_like(x, 0.5)])
    value = pk_distance(a, b, T=5.0, nodes=256)
    assert value == pytest.approx(_line_pair_integral(5.0), rel=0.01)


def test_pk_identity_and_empty():
    a = np.random.default_rng(0).normal(size=(50, 2))
    assert pk_distance(a, a) == 0.0
    assert pk_distance(np.empty((0, 2)), np.empty((0, 2))) == 0.0
    t = np.linspace(0, 5, 256)
    cap = np.trapezoid(2 * t * np.exp(-t), t)
    with_origin = np.vstack([[0.0, 0.0], a])
    assert pk_distance(with_origin, np.empty((0, 2)), 5.0, 256) == pytest.approx(cap)
    # before the first point enters the ball both sides are empty
    assert pk_distance(a, np.empty((0, 2)), 5.0, 256) < cap


def test_pk_monotone_in_T(rng):
    a, b = rng.normal(size=(80, 2)), 1.5 * rng.normal(size=(60, 2))
    values = [pk_distance(a, b, T, 400) for T in (1.0, 2.0, 4.0, 8.0)]
    assert values == sorted(values)


def test_pk_cap(rng):
    for _ in range(5):
        a, b = 3 * rng.normal(size=(40, 2)), rng.normal(size=(30, 2)) + 4
        assert pk_distance(a, b, 5.0, 256) <= 2 * (1 - 6 * np.exp(-5)) + tail_bound(5.0) + 1e-9


def test_pk_rejects_bad_parameters():
    with pytest.raises(ValueError):
        pk_distance([[0.0, 0.0]], [[1.0, 1.0]], T=0.0)
    with pytest.raises(ValueError):
        pk_distance([[0.0, 0.0]], [[1.0, 1.0]], nodes=4)


def test_pk_record():
    rec = pk_record([[0.0, 0.0]], [[0.0, 1.0]], 5.0, 64)
    assert set(rec) >= {"metric", "value", "T", "nodes", "tail_bound"}
    assert rec["tail_bound"] == pytest.approx(12 * np.exp(-5))
