import numpy as np
import pytest

from funkgeo import cpn, lab
from funkgeo.cpn import Ball, ProjPoint, geodesic_integral, sample_geodesics
from funkgeo.lab import (assemble_cp_operator, ball_points, build_cp_basis,
                         injectivity_experiment, rank_experiment, sphere_moment,
                         support_experiment)
from funkgeo.operator import least_squares_invert, rank_revealing_spectrum


def e0(n):
    v = np.zeros(n + 1, dtype=complex)
    v[0] = 1
    return ProjPoint(v)


@pytest.mark.parametrize("n,D,size", [(2, 0, 1), (2, 1, 9), (2, 2, 36), (1, 3, 16), (3, 1, 16)])
def test_basis_size(n, D, size):
    assert build_cp_basis(n, D).size == size


def test_basis_limits():
    with pytest.raises(ValueError):
        build_cp_basis(0, 1)
    with pytest.raises(ValueError):
        build_cp_basis(2, -1)
    with pytest.raises(ValueError):
        build_cp_basis(3, 6)        # C(9,3)^2 = 7056 > cap


def test_moment_formula_monte_carlo():
    rng = np.random.default_rng(5)
    z = cpn.sample_points(2, 10 ** 6, rng)
    cases = [((1, 0, 0), (1, 0, 0)), ((1, 1, 0), (1, 1, 0)), ((2, 0, 1), (2, 0, 1)),
             ((1, 0, 0), (0, 1, 0)), ((2, 0, 0), (1, 1, 0))]
    for c, cp in cases:
        vals = np.prod(z ** np.array(c), axis=1) * np.prod(z.conj() ** np.array(cp), axis=1)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        exact = sphere_moment(2, c, cp)
        assert abs(vals.mean().real - exact) <= 3 * se
        assert abs(vals.mean().imag) <= 3 * se


def test_gram_orthonormal_quadrature_free():
    for n, D in [(1, 2), (2, 1), (2, 2), (3, 1)]:
        B = build_cp_basis(n, D)
        np.testing.assert_allclose(B.transform.T @ B.gram @ B.transform, np.eye(B.size), atol=1e-10)


def test_basis_orthonormal_monte_carlo():
    B = build_cp_basis(2, 1)
    z = cpn.sample_points(2, 200_000, np.random.default_rng(8))
    V = B.evaluate(z)
    G = V.conj().T @ V / len(z)
    assert np.abs(G - np.eye(9)).max() < 0.03


def test_basis_phase_invariant(rng):
    B = build_cp_basis(2, 2)
    z = cpn.sample_points(2, 20, rng)
    ph = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(20, 1)))
    np.testing.assert_allclose(B.evaluate(z * ph), B.evaluate(z), atol=1e-12)


def test_constant_column(rng):
    for n, D in [(2, 0), (2, 1), (2, 2), (1, 2)]:
        B = build_cp_basis(n, D)
        c = B.constant_coefficients()
        z = cpn.sample_points(n, 10, rng)
        np.testing.assert_allclose(B.evaluate(z) @ c, 1.0, atol=1e-10)
        op = assemble_cp_operator(B, sample_geodesics(n, 15, rng))
        np.testing.assert_allclose(op.apply(c), 2 * np.pi, atol=1e-10)
    op0 = assemble_cp_operator(build_cp_basis(2, 0), sample_geodesics(2, 4, rng))
    np.testing.assert_allclose(op0.matrix, 2 * np.pi, atol=1e-12)


def test_operator_entries_match_geodesic_integrals(rng):
    B = build_cp_basis(2, 2)
    geos = sample_geodesics(2, 6, rng)
    op = assemble_cp_operator(B, geos + [geos[0]])
    for i, g in enumerate(geos):
        for j in (0, 7, 35):
            val = geodesic_integral(lambda x: B.evaluate(x)[:, j].real, g, 256) + \
                1j * geodesic_integral(lambda x: B.evaluate(x)[:, j].imag, g, 256)
            assert op.matrix[i, j] == pytest.approx(val, abs=1e-12)
    np.testing.assert_array_equal(op.matrix[0], op.matrix[-1])
    assert op.provenance["D"] == 2 and op.provenance["n_geo"] == 7


def test_operator_quadrature_floor(rng):
    with pytest.raises(ValueError):
        assemble_cp_operator(build_cp_basis(2, 2), sample_geodesics(2, 3, rng), K=16)


def test_unitary_equivariance(rng):
    B = build_cp_basis(2, 2)
    geos = sample_geodesics(2, 120, rng)
    U = cpn.random_unitary(3, rng)
    s1 = rank_revealing_spectrum(assemble_cp_operator(B, geos))
    s2 = rank_revealing_spectrum(assemble_cp_operator(B, [g.transform(U) for g in geos]))
    np.testing.assert_allclose(s1, s2, atol=1e-9)


@pytest.mark.parametrize("D,n_geo", [(1, 50), (2, 200)])
def test_injectivity_examples(D, n_geo):
    res = injectivity_experiment(2, D, n_geo, seed=7)
    assert res.full_rank and res.rank == res.basis_dim
    assert res.condition_ratio > 1e-6 and res.separated
    assert res.near_kernel is None


def test_injectivity_preconditions():
    with pytest.raises(ValueError):
        injectivity_experiment(1, 2, 100, 0)
    with pytest.raises(ValueError):
        injectivity_experiment(2, 1, 17, 0)


def test_cp1_has_odd_kernel():
    # CP^1 = S^2; degree D covers harmonics of degree <= D, odd ones are lost
    res = rank_experiment(1, 3, 80, seed=1)
    assert res.basis_dim == 16 and res.kernel_dim == 3 + 7
    assert res.near_kernel is not None and res.separated


def test_least_squares_recovers_band_limited(rng):
    B = build_cp_basis(2, 2)
    op = assemble_cp_operator(B, sample_geodesics(2, 200, rng))
    x0 = rng.standard_normal(36) + 1j * rng.standard_normal(36)
    x = least_squares_invert(op, op.apply(x0))
    assert np.linalg.norm(x - x0) <= 1e-8 * np.linalg.norm(x0)


def test_ball_points_inside(rng):
    c = ProjPoint(cpn.sample_points(2, 1, rng)[0])
    pts = ball_points(c, 0.4, 500, rng)
    d = 2 * np.arccos(np.clip(np.abs(pts @ c.rep.conj()), 0, 1))
    assert d.max() <= 0.4 + 1e-12
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1, atol=1e-14)


def test_support_experiment_shape_and_determinism():
    ball = Ball(e0(2), 0.5)
    a = support_experiment(2, 1, ball, 45, seed=3)
    b = support_experiment(2, 1, ball, 45, seed=3)
    assert a.to_json_dict() == b.to_json_dict()
    assert a.n_avoiding_geodesics == 45
    assert a.vacuous == (a.kernel_dim == 0)
    assert a.kernel_dim == 0          # band-limited functions are determined
    assert a.concentrated()


def test_support_small_ball_matches_full_data():
    ball = Ball(e0(2), 1e-3)
    rep = support_experiment(2, 2, ball, 200, seed=4)
    full = injectivity_experiment(2, 2, 200, seed=4)
    assert rep.kernel_dim == full.kernel_dim == 0


def test_support_underdetermined_kernel_is_reported():
    rep = support_experiment(2, 1, Ball(e0(2), 0.5), 6, seed=0)
    assert rep.kernel_dim == 9 - 6
    assert len(rep.outside_sup) == len(rep.inside_sup) == rep.kernel_dim


def test_support_rejects_bad_input():
    with pytest.raises(ValueError):
        support_experiment(2, 1, Ball(e0(2), 0.5), 4, seed=0)
    with pytest.raises(ValueError):
        support_experiment(1, 1, Ball(e0(1), 0.5), 10, seed=0)
    with pytest.raises(ValueError):
        support_experiment(3, 1, Ball(e0(2), 0.5), 10, seed=0)
