import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hartogs_quant import hartogs
from hartogs_quant.errors import NumericalDegeneracyError, ParameterError, SingularityError
from hartogs_quant.grid import parameter_grid
from hartogs_quant.hartogs import HartogsPoint, PointPair, make_params
from hartogs_quant.reports import SamplerConfig, block_rng


def P(z, w):
    return HartogsPoint(np.atleast_1d(np.asarray(z, dtype=complex)), complex(w))


def disk(mu):
    return make_params("I:1,1", mu)


GRID = parameter_grid()
DISTINCT = list({(p.base.label, p.mu): (label, p) for label, p in GRID}.values())


class TestParams:
    def test_mu0(self):
        assert make_params("I:2,3", 1).mu0 == pytest.approx(5 / 7)
        assert make_params("III:5", 2).einstein_defect == pytest.approx(2 * 11 - 8)

    @pytest.mark.parametrize("mu", [0, -1, Fraction(1, 2)])
    def test_rejects_bad_mu(self, mu):
        with pytest.raises(ParameterError):
            make_params("I:2,2", mu)

    def test_grid_size(self):
        assert len(GRID) >= 25
        assert all(p.mu > 0 for _, p in GRID)


class TestContains:
    @pytest.mark.parametrize(
        "mu, z, w, expected",
        [(1, 0, 0, True), (1, 0.6, 0.8, False), (2, 0.5, 0.5, True), (2, 0.5, 0.76, False)],
    )
    def test_disk_examples(self, mu, z, w, expected):
        assert bool(hartogs.hartogs_contains(disk(mu), P(z, w))) is expected

    def test_outside_base(self):
        assert not bool(hartogs.hartogs_contains(disk(1), P(1.2, 0)))


class TestPotential:
    def test_origin(self):
        assert complex(hartogs.potential_ext(disk(1), P(0, 0), P(0, 0))) == 0

    def test_disk_diagonal(self):
        val = complex(hartogs.potential_ext(disk(1), P(0, 0.5), P(0, 0.5)))
        assert val == pytest.approx(0.2876820724517809, abs=1e-15)

    def test_disk_off_diagonal(self):
        val = complex(hartogs.potential_ext(disk(1), P(0, 0.5), P(0, 0.5j)))
        assert val == pytest.approx(-np.log(1 + 0.25j), abs=1e-15)

    def test_singular(self):
        with pytest.raises(SingularityError):
            hartogs.potential_ext(disk(1), P(0, 1), P(0, 1))

    @pytest.mark.parametrize("label, params", DISTINCT[::3])
    def test_extension_restricts_to_potential(self, label, params):
        pts = hartogs.sample_points(params, 200, block_rng(3, 0), stress_fraction=0.3)
        ext = hartogs.potential_ext(params, pts, pts)
        assert np.allclose(ext, hartogs.potential(params, pts), rtol=1e-12, atol=1e-12)


class TestDiastasis:
    def test_diagonal_zero(self):
        params = make_params("II:2", 2)
        pts = hartogs.sample_points(params, 50, block_rng(0, 0))
        assert np.all(hartogs.diastasis(params, PointPair(pts, pts)) == 0)

    def test_disk_example(self):
        val = float(hartogs.diastasis(disk(1), PointPair(P(0, 0), P(0, 0.5))))
        assert val == pytest.approx(-math.log(0.75), abs=1e-15)

    @pytest.mark.parametrize("label, params", DISTINCT, ids=[lab for lab, _ in DISTINCT])
    def test_symmetric_and_nonnegative(self, label, params):
        pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=2000, seed=1))
        d_xy = hartogs.diastasis(params, pairs)
        d_yx = hartogs.diastasis(params, pairs.swapped())
        assert np.array_equal(d_xy, d_yx)
        assert np.all(d_xy >= -1e-12)

    def test_ball_closed_form(self):
        # D = log(N_x^mu-|w_x|^2) ... for the ball with mu=1: -log of the hyperbolic form
        params = disk(1)
        rng = block_rng(4, 0)
        x = hartogs.sample_points(params, 100, rng)
        y = hartogs.sample_points(params, 100, rng)
        inner = lambda a, b: 1 - a.z[:, 0] * np.conj(b.z[:, 0]) - a.w * np.conj(b.w)
        expected = np.log(np.abs(inner(x, y)) ** 2 / (inner(x, x).real * inner(y, y).real))
        assert np.allclose(hartogs.diastasis(params, PointPair(x, y)), expected, atol=1e-12)


class TestConditionA:
    def test_disk_report(self):
        rep = hartogs.exp_minus_diastasis_report(disk(1), SamplerConfig(n_samples=10_000, seed=42))
        assert rep.passed
        assert rep.details["violations"] == 0
        assert rep.details["max_exp_minus_D_separated"] < 1
        assert rep.details["diagonal_max_abs_D"] == 0

    @pytest.mark.parametrize("label, params", DISTINCT, ids=[lab for lab, _ in DISTINCT])
    def test_grid(self, label, params):
        assert hartogs.exp_minus_diastasis_report(params, SamplerConfig(n_samples=3000, seed=7)).passed

    def test_stress_points_reach_boundary(self):
        params = make_params("IV:3", 1)
        pts = hartogs.sample_points(params, 2000, block_rng(0, 0), stress_fraction=1.0)
        ratio = np.abs(pts.w) ** 2 / hartogs.boundary_defect(params, HartogsPoint(pts.z, np.zeros(2000)))
        assert ratio.min() >= 0.9 and ratio.max() < 0.999


class TestSampling:
    def test_pairs_deterministic(self):
        cfg = SamplerConfig(n_samples=5000, seed=3)
        a = hartogs.sample_pairs(make_params("I:2,2", 2), cfg)
        b = hartogs.sample_pairs(make_params("I:2,2", 2), cfg)
        assert np.array_equal(a.x.coords, b.x.coords) and np.array_equal(a.y.coords, b.y.coords)

    def test_pairs_include_near_diagonal(self):
        pairs = hartogs.sample_pairs(disk(1), SamplerConfig(n_samples=1000, seed=3))
        dist = np.linalg.norm(pairs.x.coords - pairs.y.coords, axis=1)
        assert np.sum(dist < 0.01) > 50


class TestMetric:
    @pytest.mark.parametrize("mu", [1, 2, Fraction(1, 3), 1.7])
    def test_disk_origin(self, mu):
        g = hartogs.metric_tensor(disk(mu), P(0, 0))
        assert np.allclose(g, np.diag([float(mu), 1.0]), atol=1e-9)

    def test_ball_closed_form(self):
        # mu = 1: complex hyperbolic metric (I - v v*)^{-1}/(1-|v|^2) + ... in C^2
        v = np.array([0.3 + 0.1j, -0.2 + 0.25j])
        g = hartogs.metric_tensor(disk(1), P(v[0], v[1]))
        s = 1 - np.vdot(v, v).real
        expected = np.eye(2) / s + np.outer(np.conj(v), v) / s**2
        assert np.allclose(g, expected, atol=1e-9)

    @pytest.mark.parametrize("text, mu", [("I:2,2", 2), ("II:2", 1), ("IV:3", 1.7)])
    def test_hermitian_and_positive(self, text, mu):
        params = make_params(text, mu)
        pts = hartogs.sample_points(params, 5, block_rng(2, 0), rmax=0.6, wmax=0.6)
        for i in range(5):
            g = hartogs.metric_tensor(params, pts[i])
            assert np.max(np.abs(g - g.conj().T)) < 1e-9
            assert np.linalg.eigvalsh(g)[0] > 0

    def test_margin(self):
        with pytest.raises(ParameterError):
            hartogs.metric_tensor(disk(1), P(0, math.sqrt(1 - 1e-5)))

    def test_degenerate(self):
        with pytest.raises((NumericalDegeneracyError, ParameterError)):
            hartogs.metric_tensor(disk(1), P(0.5, 0.5), step=0.2)


class TestDetIdentity:
    @pytest.mark.parametrize("mu, c", [(1, 1.0), (2, 2.0)])
    def test_disk_constant(self, mu, c):
        params = disk(mu)
        pts = hartogs.sample_points(params, 10, block_rng(0, 0), rmax=0.7, wmax=0.7)
        rep = hartogs.det_identity_residual(params, pts)
        assert rep.passed
        assert rep.details["c_fit"] == pytest.approx(c, rel=1e-6)

    @pytest.mark.parametrize("label, params", DISTINCT[1::2], ids=[lab for lab, _ in DISTINCT[1::2]])
    def test_grid_constant_matches_closed_form(self, label, params):
        pts = hartogs.sample_points(params, 5, block_rng(0, 0), rmax=0.7, wmax=0.7)
        rep = hartogs.det_identity_residual(params, pts)
        assert rep.passed
        assert rep.details["c_fit"] == pytest.approx(rep.details["c_exact"], rel=1e-5)

    def test_needs_points(self):
        with pytest.raises(ParameterError):
            hartogs.det_identity_residual(disk(1), [P(0, 0)])


class TestCurvature:
    def test_ball_origin(self):
        curv = hartogs.curvature(disk(1), P(0, 0))
        assert curv.scalar == pytest.approx(-6, abs=1e-6)
        assert np.allclose(curv.ricci, -3 * np.eye(2), atol=1e-6)

    def test_ball_einstein_anywhere(self):
        p = P(0.4 - 0.2j, 0.3j)
        g = hartogs.metric_tensor(disk(1), p)
        for method in ("semi_analytic", "direct"):
            ric = hartogs.curvature(disk(1), p, method=method).ricci
            assert np.max(np.abs(ric + 3 * g)) < 1e-4
            assert np.max(np.abs(ric - ric.conj().T)) < 1e-8

    @pytest.mark.parametrize("text, mu", [("I:1,2", 1), ("II:2", 2), ("IV:3", Fraction(3, 4))])
    def test_methods_agree(self, text, mu):
        params = make_params(text, mu)
        p = hartogs.sample_points(params, 1, block_rng(5, 0), rmax=0.5, wmax=0.5)[0]
        semi = hartogs.curvature(params, p)
        direct = hartogs.curvature(params, p, method="direct")
        assert np.max(np.abs(semi.ricci - direct.ricci)) < 5e-4

    @pytest.mark.parametrize("text", ["I:1,1", "I:1,2"])
    def test_einstein_at_mu0(self, text):
        base = make_params(text, 1)
        params = make_params(text, Fraction(base.base.genus, base.d + 1))
        pts = hartogs.sample_points(params, 4, block_rng(1, 0), rmax=0.7, wmax=0.7)
        rep = hartogs.kahler_einstein_report(params, [pts[i] for i in range(4)])
        assert rep.passed and rep.details["method"] == "direct"

    def test_not_einstein_away_from_mu0(self):
        params = disk(2)
        p = P(0.5, 0.3)
        assert not hartogs.kahler_einstein_report(params, [p]).passed

    def test_unknown_method(self):
        with pytest.raises(ParameterError):
            hartogs.curvature(disk(1), P(0, 0), method="spectral")


class TestJson:
    @given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
    @settings(max_examples=40)
    def test_round_trip(self, a, b, c, e):
        params = disk(1)
        p = P(complex(a, b), complex(c, e))
        q = hartogs.point_from_json(params, hartogs.point_to_json(p))
        assert np.array_equal(q.coords, p.coords)

    def test_bad_shape(self):
        with pytest.raises(ParameterError):
            hartogs.point_from_json(disk(1), [[0, 0]])
