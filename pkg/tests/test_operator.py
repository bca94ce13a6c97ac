import numpy as np
import pytest

from funkgeo.operator import (TransformOperator, kernel_analysis, least_squares_invert,
                              rank_revealing_spectrum)


def test_spectrum_examples(rng):
    np.testing.assert_allclose(rank_revealing_spectrum(np.eye(5)), np.ones(5))
    u, v = rng.standard_normal(7), rng.standard_normal(4)
    s = rank_revealing_spectrum(np.outer(u, v))
    assert s[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-13)
    assert np.all(s[1:] < 1e-13 * s[0])


def test_spectrum_matches_gram_eigenvalues(rng):
    A = rng.standard_normal((50, 36))
    s = rank_revealing_spectrum(A)
    oracle = np.sqrt(np.linalg.eigvalsh(A.T @ A))[::-1]
    assert s[-1] > 0
    np.testing.assert_allclose(s, oracle, atol=1e-9)
    assert np.all(np.diff(s) <= 0)


def test_spectrum_rejects_nonfinite():
    with pytest.raises(ValueError):
        rank_revealing_spectrum(np.array([[1.0, np.nan]]))
    assert rank_revealing_spectrum(np.zeros((0, 3))).size == 0


def test_kernel_analysis_known_rank(rng):
    A = rng.standard_normal((30, 4)) @ rng.standard_normal((4, 10))
    ka = kernel_analysis(TransformOperator(A))
    assert ka.rank == 4 and ka.kernel_dim == 6 and ka.n_cols == 10
    assert np.abs(A @ ka.kernel).max() < 1e-10
    np.testing.assert_allclose(ka.kernel.T @ ka.kernel, np.eye(6), atol=1e-12)
    assert ka.separated and ka.gap > 1e10


def test_kernel_analysis_wide_and_zero(rng):
    ka = kernel_analysis(rng.standard_normal((3, 5)))
    assert ka.rank == 3 and ka.kernel_dim == 2 and ka.gap == np.inf
    z = kernel_analysis(np.zeros((4, 3)))
    assert z.rank == 0 and z.kernel_dim == 3


def test_kernel_analysis_flags_small_gap():
    A = np.diag([1.0, 1e-7, 1e-9])
    ka = kernel_analysis(A)
    assert ka.rank == 2 and ka.gap == pytest.approx(100.0) and not ka.separated


def test_full_rank_gap_uses_threshold():
    ka = kernel_analysis(np.diag([1.0, 0.5]))
    assert ka.gap == pytest.approx(0.5 / 1e-8)


def test_least_squares_round_trip(rng):
    A = rng.standard_normal((80, 20)) + 1j * rng.standard_normal((80, 20))
    x0 = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    x = least_squares_invert(TransformOperator(A), A @ x0)
    assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)
    np.testing.assert_array_equal(least_squares_invert(A, np.zeros(80)), 0)


def test_least_squares_noisy(rng):
    A = rng.standard_normal((100, 20))
    for seed in range(20):
        r = np.random.default_rng(seed)
        x0 = r.standard_normal(20)
        data = A @ x0 + 1e-3 * r.standard_normal(100)
        x = least_squares_invert(A, data, reg=1e-6)
        assert np.linalg.norm(A @ x - data) <= 1e-3 * np.sqrt(100) * 2


def test_least_squares_errors(rng):
    A = rng.standard_normal((5, 3))
    with pytest.raises(ValueError):
        least_squares_invert(A, np.zeros(4))
    with pytest.raises(ValueError):
        least_squares_invert(A, np.zeros(5), reg=-1)
