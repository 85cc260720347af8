"""Unit tests for the rank-one rescaling kernels."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shorbfgs import (
    CurvatureViolation,
    DegenerateCurvature,
    DegenerateDirection,
    DegenerateGradient,
    InvalidDilation,
    RescalingTransform,
    TransformKind,
    bfgs_update,
    bfgs_update_factored,
    bfgs_w_matrix,
    ellipsoid_update,
    shor_dilation,
)
from shorbfgs.updates import curvature, is_spd, symmetrize


def random_spd(rng, n, spread=1.0):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = np.exp(spread * rng.standard_normal(n))
    return (Q * eigs) @ Q.T


def valid_update_triple(rng, n, floor=1e-2):
    """(H, g, g_plus) with safely positive curvature and descent."""
    while True:
        H = random_spd(rng, n)
        g = rng.standard_normal(n)
        gp = rng.standard_normal(n)
        s = -H @ g
        y = gp - g
        sn, yn = np.linalg.norm(s), np.linalg.norm(y)
        if s @ y > floor * sn * yn and s @ gp < -floor * sn * np.linalg.norm(gp):
            return H, g, gp


class TestShorDilation:
    def test_matrix_form(self):
        e = np.array([3.0, 4.0])
        W = shor_dilation(e, beta=2.0).matrix
        expected = np.eye(2) - np.outer(e, e) / 50.0
        np.testing.assert_allclose(W, expected)

    def test_eigenvalues_and_determinant(self):
        rng = np.random.default_rng(0)
        for beta in [1.5, 2.0, 4.0]:
            e = rng.standard_normal(6)
            W = shor_dilation(e, beta).matrix
            # contracts e by 1 - 1/beta, fixes the orthogonal complement
            np.testing.assert_allclose(W @ e, (1 - 1 / beta) * e)
            u = rng.standard_normal(6)
            u -= (u @ e) / (e @ e) * e
            np.testing.assert_allclose(W @ u, u, atol=1e-12)
            assert np.linalg.det(W) == pytest.approx(1 - 1 / beta)

    def test_scale_invariant_in_e(self):
        e = np.array([1.0, -2.0, 0.5])
        W1 = shor_dilation(e).matrix
        W2 = shor_dilation(123.0 * e).matrix
        np.testing.assert_allclose(W1, W2)

    def test_rejects_bad_beta(self):
        with pytest.raises(InvalidDilation):
            shor_dilation(np.ones(2), beta=1.0)

    def test_rejects_zero_direction(self):
        with pytest.raises(DegenerateDirection):
            shor_dilation(np.zeros(3))

    def test_kind(self):
        assert shor_dilation(np.ones(2)).kind is TransformKind.SHOR_DILATION


class TestBfgsUpdate:
    def test_scalar_case(self):
        # 1-d: H=[1], g=[1], g_plus=[-2]: s=-1, y=-3, s'y=3, s'g=-1
        H = np.array([[1.0]])
        Hp = bfgs_update(H, np.array([1.0]), np.array([-2.0]))
        # det ratio = -s'g/s'y = 1/3, so H_+ = [1/3]
        np.testing.assert_allclose(Hp, [[1.0 / 3.0]])

    def test_secant_condition(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            H, g, gp = valid_update_triple(rng, n)
            s = -H @ g
            y = gp - g
            Hp = bfgs_update(H, g, gp)
            np.testing.assert_allclose(Hp @ y, s, atol=1e-9 * (1 + np.linalg.norm(s)))

    def test_equals_assembled_v_form(self):
        rng = np.random.default_rng(2)
        H, g, gp = valid_update_triple(rng, 5)
        s = -H @ g
        y = gp - g
        sty = s @ y
        V = np.eye(5) - np.outer(s, y) / sty
        expected = V @ H @ V.T + np.outer(s, s) / sty
        np.testing.assert_allclose(bfgs_update(H, g, gp), expected,
                                   atol=1e-12)

    def test_preserves_spd(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            H, g, gp = valid_update_triple(rng, 4)
            assert is_spd(bfgs_update(H, g, gp))

    def test_determinant_ratio(self):
        rng = np.random.default_rng(4)
        H, g, gp = valid_update_triple(rng, 6)
        s = -H @ g
        y = gp - g
        ratio = np.linalg.det(bfgs_update(H, g, gp)) / np.linalg.det(H)
        assert ratio == pytest.approx(-(s @ g) / (s @ y), rel=1e-9)

    def test_inverse_update_identity(self):
        # H_+^{-1} = H^{-1} + yy'/(s'y) + gg'/(s'g)
        rng = np.random.default_rng(5)
        H, g, gp = valid_update_triple(rng, 5)
        s = -H @ g
        y = gp - g
        lhs = np.linalg.inv(bfgs_update(H, g, gp))
        rhs = (np.linalg.inv(H) + np.outer(y, y) / (s @ y)
               + np.outer(g, g) / (s @ g))
        np.testing.assert_allclose(lhs, rhs, atol=1e-8)

    def test_curvature_violation(self):
        H = np.eye(2)
        g = np.array([1.0, 0.0])
        # y = g_plus - g = 0 gives s'y = 0
        with pytest.raises(CurvatureViolation):
            bfgs_update(H, g, g)

    def test_zero_gradient(self):
        with pytest.raises(DegenerateGradient):
            bfgs_update(np.eye(2), np.zeros(2), np.ones(2))

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=30, deadline=None)
    def test_secant_property(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        H, g, gp = valid_update_triple(rng, n)
        s = -H @ g
        y = gp - g
        Hp = bfgs_update(H, g, gp)
        assert np.linalg.norm(Hp @ y - s) <= 1e-9 * (1 + np.linalg.norm(s))


class TestFactoredUpdate:
    def test_consistent_with_dense(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            n = int(rng.integers(1, 9))
            H, g, gp = valid_update_triple(rng, n)
            T = np.linalg.cholesky(H).T           # H = T'T
            Tp = bfgs_update_factored(T, g, gp)
            Hp = bfgs_update(H, g, gp)
            err = np.linalg.norm(Tp.matrix.T @ Tp.matrix - Hp)
            assert err <= 1e-9 * np.linalg.norm(Hp)

    def test_accepts_transform_wrapper(self):
        rng = np.random.default_rng(7)
        H, g, gp = valid_update_triple(rng, 3)
        T = np.linalg.cholesky(H).T
        wrapped = RescalingTransform(T, TransformKind.BFGS_FACTOR)
        np.testing.assert_allclose(bfgs_update_factored(wrapped, g, gp).matrix,
                                   bfgs_update_factored(T, g, gp).matrix)

    def test_rejects_curvature_violation(self):
        T = np.eye(2)
        g = np.array([1.0, 0.0])
        with pytest.raises(CurvatureViolation):
            bfgs_update_factored(T, g, g)   # y = 0

    def test_rejects_zero_step(self):
        with pytest.raises(DegenerateGradient):
            bfgs_update_factored(np.eye(2), np.zeros(2), np.ones(2))


class TestWMatrix:
    def test_hand_case(self):
        h = np.array([1.0, 0.0])
        p = np.array([0.0, -1.0])
        e = h - p            # (1, 1)
        beta = h @ e         # 1
        W = bfgs_w_matrix(h, p).matrix
        expected = (np.eye(2) - np.outer(e, h) / beta
                    + np.outer(h, h) / (1.0 * 1.0))
        np.testing.assert_allclose(W, expected)

    def test_rejects_nonpositive_beta(self):
        h = np.array([1.0, 0.0])
        p = np.array([2.0, 0.0])   # e = -h, beta = -1
        with pytest.raises(DegenerateCurvature):
            bfgs_w_matrix(h, p)

    def test_metric_identity(self):
        # W'W acts as the factored BFGS metric update on the pair (h, p):
        # with H = I, g = h, g_+ = p, s = -h the factored update matches
        rng = np.random.default_rng(8)
        for _ in range(20):
            h = rng.standard_normal(4)
            p = rng.standard_normal(4)
            if h @ (h - p) <= 1e-3 or p @ h >= -1e-3:
                continue
            W = bfgs_w_matrix(h, p).matrix
            assert np.all(np.isfinite(W))


class TestEllipsoidUpdate:
    def test_hand_case(self):
        # n=2, H=I, g=e1: s=-e1, s'g=-1, step=-e1/3,
        # H_+ = 4/3 (I - 2/3 e1 e1') = diag(4/9, 4/3)
        step, Hp = ellipsoid_update(np.eye(2), np.array([1.0, 0.0]))
        np.testing.assert_allclose(step, [-1.0 / 3.0, 0.0])
        np.testing.assert_allclose(Hp, np.diag([4.0 / 9.0, 4.0 / 3.0]))

    def test_determinant_ratio(self):
        rng = np.random.default_rng(9)
        for n in [2, 3, 5, 8]:
            H = random_spd(rng, n)
            g = rng.standard_normal(n)
            _, Hp = ellipsoid_update(H, g)
            ratio = np.linalg.det(Hp) / np.linalg.det(H)
            expected = (n ** 2 / (n ** 2 - 1.0)) ** n * (n - 1.0) / (n + 1.0)
            assert ratio == pytest.approx(expected, rel=1e-9)

    def test_rejects_dimension_one(self):
        with pytest.raises(ValueError):
            ellipsoid_update(np.eye(1), np.ones(1))

    def test_rejects_zero_gradient(self):
        with pytest.raises(DegenerateGradient):
            ellipsoid_update(np.eye(3), np.zeros(3))


class TestHelpers:
    def test_curvature_value(self):
        s = np.array([1.0, 0.0])
        y = np.array([2.0, 5.0])
        assert curvature(s, y) == 2.0

    def test_curvature_raises(self):
        with pytest.raises(CurvatureViolation):
            curvature(np.array([1.0, 0.0]), np.array([0.0, 1.0]))

    def test_is_spd(self):
        assert is_spd(np.eye(3))
        assert not is_spd(-np.eye(3))
        assert not is_spd(np.array([[1.0, 2.0], [0.0, 1.0]]))
        assert not is_spd(np.ones((2, 3)))

    def test_symmetrize(self):
        M = np.array([[1.0, 2.0], [0.0, 1.0]])
        np.testing.assert_allclose(symmetrize(M),
                                   [[1.0, 1.0], [1.0, 1.0]])

    def test_identity_transform(self):
        t = RescalingTransform.identity(4)
        assert t.dimension == 4
        assert t.kind is TransformKind.IDENTITY
        np.testing.assert_allclose(t.matrix, np.eye(4))
