import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from algset.estimators.roots import EVERYWHERE_ZERO, real_roots_univariate, sturm_chain, sign_changes


def test_examples():
    np.testing.assert_allclose(real_roots_univariate([-1, 0, 1], (-2, 2)), [-1, 1], atol=1e-12)
    assert real_roots_univariate([1, 0, 1], (-2, 2)).size == 0
    np.testing.assert_allclose(real_roots_univariate([0.25, -1, 1], (0, 1)), [0.5], atol=1e-7)


def test_zero_polynomial():
    assert real_roots_univariate([0, 0, 0], (-1, 1)) is EVERYWHERE_ZERO


def test_vanishing_leading_terms():
    np.testing.assert_allclose(real_roots_univariate([-1, 2, 0, 0], (-5, 5)), [0.5])
    assert real_roots_univariate([3.0, 0, 0], (-5, 5)).size == 0


def test_roots_at_endpoints():
    np.testing.assert_allclose(real_roots_univariate([-1, 0, 1], (-1, 1)), [-1, 1])
    np.testing.assert_allclose(real_roots_univariate([-1, 0, 1], (1, 1)), [1])
    with pytest.raises(ValueError):
        real_roots_univariate([1, 1], (1, 0))


def test_close_and_many_roots():
    roots = np.array([-0.9, -0.2, 0.1, 0.1001, 0.5, 0.77])
    c = P.polyfromroots(roots)
    np.testing.assert_allclose(real_roots_univariate(c, (-1, 1)), roots, atol=1e-9)


def test_triple_root():
    c = P.polyfromroots([0.3, 0.3, 0.3, -0.5])
    out = real_roots_univariate(c, (-1, 1))
    assert len(out) == 2
    assert out[0] == pytest.approx(-0.5, abs=1e-9)
    assert out[1] == pytest.approx(0.3, abs=1e-4)


def test_residual_tolerance(rng):
    for _ in range(50):
        c = rng.normal(size=rng.integers(2, 8))
        out = real_roots_univariate(c, (-3, 3), tol=1e-10)
        scale = np.max(np.abs(c))
        assert np.all(np.abs(P.polyval(out, c)) <= 1e-10 * scale)
        ref = np.roots(c[::-1])
        ref = np.sort(ref[(np.abs(ref.imag) < 1e-9) & (np.abs(ref.real) <= 3)].real)
        if ref.size and np.min(np.diff(np.concatenate([[-9], ref]))) > 1e-6:
            np.testing.assert_allclose(out, ref, atol=1e-8)


def test_sturm_count():
    c = P.polyfromroots([-1.5, 0.0, 2.0])
    chain = sturm_chain(c)
    assert sign_changes(chain, -3) - sign_changes(chain, 3) == 3
    assert sign_changes(chain, -1) - sign_changes(chain, 1) == 1
