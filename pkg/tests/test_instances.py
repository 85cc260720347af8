"""Unit tests for instance generators, the optimum oracle, and analytics."""
import numpy as np
import pytest

from shorbfgs.instances import (
    InstanceSpec,
    detect_cycle,
    failure_instance,
    from_spec,
    gen_ellipsoid,
    gen_max_quadratics,
    gen_quadratic,
    gen_simplex,
    lagged_autocorrelation,
    linear_rate_fit,
    loglog_slope,
    min_norm_in_hull,
    random_spd,
    random_unit,
    reference_optimum,
    simplex_weights,
)
from shorbfgs.oracles import FiniteSetOracle, MaxQuadSubdiff


class TestSimplex:
    def test_geometry(self):
        eps = 1e-2
        o = gen_simplex(eps)
        pts = o.points
        assert pts.shape == (6, 5)
        w = simplex_weights()
        assert w.sum() == pytest.approx(1.0)
        assert np.all(w > 0)
        # the weighted combination of the first five points is -eps * p,
        # where -p is the sixth point
        a_rows = pts[:5]
        p = -pts[5]
        np.testing.assert_allclose(w @ a_rows, -eps * p, atol=1e-10)
        # the origin lies outside the hull, at distance proportional to eps
        _, dist = min_norm_in_hull(pts)
        assert 0.0 < dist < eps * np.linalg.norm(p)
        _, dist10 = min_norm_in_hull(gen_simplex(10 * eps).points)
        assert dist10 == pytest.approx(10 * dist, rel=1e-6)

    def test_rejects_bad_eps(self):
        with pytest.raises(ValueError):
            gen_simplex(0.0)


class TestEllipsoid:
    def test_shapes_and_margin(self):
        A, c, u = gen_ellipsoid([0, 1, 2], d=0.5, seed=3)
        assert A.shape == (3, 3)
        np.testing.assert_allclose(np.diag(A), [1.0, 10.0, 100.0])
        assert np.linalg.norm(u) == pytest.approx(1.0)
        np.testing.assert_allclose(c, 1.5 * A @ u)
        # 0 is outside the translated ellipsoid {Aw - c : |w| <= 1}:
        # |A^{-1} c| = 1 + d > 1
        assert np.linalg.norm(np.linalg.solve(A, c)) == pytest.approx(1.5)

    def test_rejects_bad_offset(self):
        with pytest.raises(ValueError):
            gen_ellipsoid([0, 1], d=0.0)

    def test_deterministic_in_seed(self):
        _, c1, _ = gen_ellipsoid([0, 1, 2], d=1.0, seed=7)
        _, c2, _ = gen_ellipsoid([0, 1, 2], d=1.0, seed=7)
        np.testing.assert_array_equal(c1, c2)


class TestFailureInstance:
    def test_constants(self):
        A, c, start = failure_instance()
        np.testing.assert_allclose(A, np.diag([1.0, 10.0]))
        v = -np.array([10.0, 39.0])
        np.testing.assert_allclose(c, 1.01 * A @ (v / np.linalg.norm(v)))
        assert np.linalg.norm(start) == pytest.approx(1.0)
        # 0 lies just outside the translated ellipsoid
        assert np.linalg.norm(np.linalg.solve(A, c)) == pytest.approx(1.01)


class TestGenerators:
    def test_maxquad_pieces_convex(self):
        f = gen_max_quadratics(4, 3, seed=0)
        assert f.dimension == 4
        assert len(f.quadratics) == 3
        for P, _, _ in f.quadratics:
            assert np.all(np.linalg.eigvalsh(P) >= 1.0 - 1e-12)

    def test_quadratic_condition_number(self):
        f = gen_quadratic(6, seed=1, cond=1e4)
        P = f.R.T @ f.R
        assert np.linalg.cond(P) == pytest.approx(1e4, rel=1e-9)

    def test_random_spd(self):
        rng = np.random.default_rng(2)
        H = random_spd(rng, 5, spread=2.0)
        np.testing.assert_allclose(H, H.T)
        assert np.all(np.linalg.eigvalsh(H) > 0)

    def test_random_unit(self):
        rng = np.random.default_rng(3)
        u = random_unit(rng, 7)
        assert np.linalg.norm(u) == pytest.approx(1.0)


class TestMinNormInHull:
    def test_interior_origin(self):
        pts = np.array([[1.0, 0.0], [-1.0, 1.0], [-1.0, -1.0]])
        point, dist = min_norm_in_hull(pts)
        assert dist == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(point, [0.0, 0.0], atol=1e-9)

    def test_nearest_facet(self):
        pts = np.array([[1.0, 1.0], [1.0, -1.0], [3.0, 0.0]])
        point, dist = min_norm_in_hull(pts)
        np.testing.assert_allclose(point, [1.0, 0.0], atol=1e-12)
        assert dist == pytest.approx(1.0)

    def test_single_point(self):
        point, dist = min_norm_in_hull([[3.0, 4.0]])
        assert dist == pytest.approx(5.0)
        np.testing.assert_allclose(point, [3.0, 4.0])

    def test_matches_solver(self):
        import cvxpy as cp
        rng = np.random.default_rng(4)
        for _ in range(10):
            pts = rng.standard_normal((6, 4)) + 0.3
            _, dist = min_norm_in_hull(pts)
            lam = cp.Variable(6, nonneg=True)
            prob = cp.Problem(cp.Minimize(cp.sum_squares(pts.T @ lam)),
                              [cp.sum(lam) == 1])
            prob.solve(solver=cp.CLARABEL)
            assert dist == pytest.approx(np.sqrt(max(prob.value, 0.0)),
                                         abs=1e-7)

    def test_rejects_large_sets(self):
        with pytest.raises(ValueError):
            min_norm_in_hull(np.zeros((17, 2)))


class TestReferenceOptimum:
    def test_hand_instance(self):
        # max(|x|^2/2 + x1, |x|^2/2 - x1): minimum at 0 with value 0
        P = np.eye(2)
        f = MaxQuadSubdiff([(P, np.array([1.0, 0.0]), 0.0),
                            (P, np.array([-1.0, 0.0]), 0.0)])
        f_star, x_star = reference_optimum(f)
        assert f_star == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(x_star, [0.0, 0.0], atol=1e-6)

    def test_is_lower_bound(self):
        f = gen_max_quadratics(5, 4, seed=5)
        f_star, x_star = reference_optimum(f)
        assert f.value(x_star) == pytest.approx(f_star, abs=1e-7)
        rng = np.random.default_rng(6)
        for _ in range(50):
            assert f.value(x_star + 1e-3 * rng.standard_normal(5)) >= f_star


class TestSpecs:
    def test_round_trip(self, tmp_path):
        spec = InstanceSpec("simplex", {"eps": 0.01}, seed=3)
        p = tmp_path / "spec.json"
        spec.save(p)
        loaded = InstanceSpec.load(p)
        assert loaded == spec

    def test_from_spec_families(self):
        o = from_spec(InstanceSpec("simplex", {"eps": 0.1}))
        assert isinstance(o, FiniteSetOracle) and len(o) == 6
        o = from_spec(InstanceSpec("finite-set",
                                   {"points": [[1.0, 2.0], [3.0, 4.0]]}))
        assert isinstance(o, FiniteSetOracle) and len(o) == 2
        A, c, start = from_spec(InstanceSpec("ellipsoid", {"d": 1.0}, seed=1))
        assert A.shape == (5, 5)
        assert np.linalg.norm(start) == pytest.approx(1.0)
        A, c, start = from_spec(InstanceSpec("failure-r2"))
        np.testing.assert_allclose(A, np.diag([1.0, 10.0]))
        f = from_spec(InstanceSpec("maxquad", {"n": 3, "m": 2}, seed=2))
        assert isinstance(f, MaxQuadSubdiff) and f.dimension == 3
        q = from_spec(InstanceSpec("quad", {"n": 4, "cond": 10.0}))
        assert q.R.shape == (4, 4)
        cseg, dseg = from_spec(InstanceSpec("segment",
                                            {"c": [1.0, 0.0], "d": [0.0, 1.0]}))
        np.testing.assert_allclose(cseg, [1.0, 0.0])
        g0, n = from_spec(InstanceSpec("ball", {"n": 6}, seed=3))
        assert n == 6 and np.linalg.norm(g0) == pytest.approx(1.0)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            from_spec(InstanceSpec("nope"))


class TestAnalytics:
    def test_lagged_autocorrelation_periodic(self):
        x = np.tile([1.0, -2.0, 0.5, 3.0, -1.0], 40)
        # biased estimator: (N - lag) / N for an exactly periodic series
        assert lagged_autocorrelation(x, 5) == pytest.approx(0.975, abs=1e-12)
        assert lagged_autocorrelation(x, 3) < 0.5

    def test_detect_cycle(self):
        x = np.concatenate([np.linspace(5, 0, 20),
                            np.tile([1.0, -2.0, 0.5, 3.0, -1.0], 40)])
        lag, score = detect_cycle(x, burn_in=20)
        assert lag == 5
        assert score > 0.95

    def test_linear_rate_fit(self):
        ks = np.arange(50)
        gaps = 3.0 * np.exp(-0.2 * ks)
        slope, r2 = linear_rate_fit(ks, gaps)
        assert slope == pytest.approx(-0.2, abs=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)

    def test_linear_rate_fit_drops_nonpositive(self):
        ks = np.arange(10)
        gaps = np.exp(-ks.astype(float))
        gaps[3] = 0.0
        slope, _ = linear_rate_fit(ks, gaps)
        assert slope == pytest.approx(-1.0, abs=1e-10)

    def test_linear_rate_fit_too_short(self):
        slope, r2 = linear_rate_fit([0, 1], [1.0, 0.5])
        assert np.isnan(slope) and np.isnan(r2)

    def test_loglog_slope(self):
        xs = np.array([2.0, 4.0, 8.0, 16.0])
        ys = 5.0 * xs ** 1.7
        assert loglog_slope(xs, ys) == pytest.approx(1.7, abs=1e-12)
