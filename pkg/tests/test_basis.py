import itertools
from math import comb

import numpy as np
import pytest

from algset.basis import build_basis, multinomial_weights, order_key, veronese, monomials


def test_circle_order():
    b = build_basis(2, 2)
    assert len(b) == 6
    assert b.to_list() == [[0, 0], [1, 0], [0, 1], [1, 1], [2, 0], [0, 2]]


@pytest.mark.parametrize("d,g,kappa", [(2, 2, 6), (3, 2, 10), (1, 3, 4)])
def test_sizes(d, g, kappa):
    assert len(build_basis(d, g)) == kappa


def test_univariate_order():
    assert build_basis(1, 3).to_list() == [[0], [1], [2], [3]]


def test_exhaustive_counts():
    for d in range(1, 5):
        for g in range(1, 6):
            b = build_basis(d, g)
            assert len(b) == comb(d + g, d)
            assert len(set(b.elements)) == len(b)
            assert all(sum(e) == g for e in b.elements)


def test_order_is_strict_and_total():
    b = build_basis(3, 3)
    keys = [order_key(e[1:]) for e in b.elements]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for i, j in itertools.combinations(range(len(keys)), 2):
        assert keys[i] < keys[j]


def test_rank_unrank_roundtrip():
    b = build_basis(3, 4)
    for pos in range(len(b)):
        e = b.unrank(pos)
        assert b.rank(e) == pos
        assert b.rank(e[1:]) == pos


@pytest.mark.parametrize("d,g", [(0, 2), (2, 0)])
def test_rejects_degenerate(d, g):
    with pytest.raises(ValueError):
        build_basis(d, g)


def test_veronese_values():
    b = build_basis(2, 2)
    np.testing.assert_array_equal(veronese(b, [2.0, 3.0]), [1, 2, 3, 6, 4, 9])
    np.testing.assert_array_equal(veronese(b, [0.0, 0.0]), [1, 0, 0, 0, 0, 0])


def test_veronese_dimension_mismatch():
    with pytest.raises(ValueError):
        veronese(build_basis(2, 2), [1.0, 2.0, 3.0])


def test_monomials_match_direct_power(rng):
    b = build_basis(3, 3)
    x = rng.normal(size=(5, 3))
    direct = np.prod(x[:, None, :] ** b.exponents[None, :, :], axis=2)
    np.testing.assert_allclose(monomials(x, b.exponents), direct, rtol=1e-14)


@pytest.mark.parametrize("d,g", [(2, 2), (2, 4), (3, 3), (1, 5)])
def test_kernel_identity(d, g, rng):
    b = build_basis(d, g)
    w = multinomial_weights(b)
    for _ in range(5):
        x, y = rng.normal(size=d), rng.normal(size=d)
        lhs = np.sum(w * veronese(b, x) * veronese(b, y))
        assert lhs == pytest.approx((1 + x @ y) ** g, rel=1e-10, abs=1e-10)
