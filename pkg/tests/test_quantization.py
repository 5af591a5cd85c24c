import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from hartogs_quant import hartogs, quantization as q
from hartogs_quant.errors import ParameterError
from hartogs_quant.grid import parameter_grid
from hartogs_quant.hartogs import HartogsPoint, PointPair, make_params
from hartogs_quant.reports import SamplerConfig, block_rng

GRID = parameter_grid()
DISTINCT = list({(p.base.label, p.mu): (label, p) for label, p in GRID}.values())
IDS = [lab for lab, _ in DISTINCT]


def origin_pair(params):
    o = HartogsPoint.origin(params)
    return PointPair(o, o)


def disk(mu):
    return make_params("I:1,1", mu)


def gamma_ratio_chi(params, x):
    """The product of Gamma ratios, valid where every argument is positive."""
    b = params.base
    mu = float(params.mu)
    out = 0.0
    for i in range(1, b.r + 1):
        lo = mu * x - b.genus + 1 + (i - 1) * b.a / 2
        out += gammaln(lo + 1 + b.b + (b.r - i) * b.a) - gammaln(lo)
    return math.exp(out)


def log_norm_of_one(params, alpha):
    """log of int (N^mu - |w|^2)^(alpha-d-2) N^(mu(d+1)-genus) dV, up to an alpha-free constant."""
    b = params.base
    s = float(params.mu) * alpha - b.genus
    out = -math.log(alpha - params.d - 1)
    for j in range(1, b.r + 1):
        out += math.lgamma(s + 1 + (b.r - j) * b.a / 2) - math.lgamma(s + b.genus - (j - 1) * b.a / 2)
    return out


class TestChi:
    @pytest.mark.parametrize(
        "text, mu, x, expected",
        [("I:1,1", 1, 1, 0), ("I:1,1", 1, 0, -1), ("I:1,1", 1, 5, 4), ("I:1,1", 2, 1, 1),
         ("I:1,1", 2, 3, 5), ("I:2,2", 1, 4, 12)],
    )
    def test_examples(self, text, mu, x, expected):
        assert q.chi_tilde(make_params(text, mu), x) == expected

    @pytest.mark.parametrize("label, params", DISTINCT, ids=IDS)
    def test_matches_gamma_ratio(self, label, params):
        x = params.d + 12
        assert q.chi_tilde(params, x) == pytest.approx(gamma_ratio_chi(params, x), rel=1e-10)

    @pytest.mark.parametrize("label, params", DISTINCT, ids=IDS)
    def test_degree_is_d(self, label, params):
        # (d+1)-th difference of a degree-d polynomial vanishes
        xs = [Fraction(k) for k in range(params.d + 2)]
        vals = [q._chi_exact(params, x) for x in xs]
        diff = sum((-1) ** j * math.comb(params.d + 1, j) * vals[j] for j in range(params.d + 2))
        assert diff == 0

    @pytest.mark.parametrize(
        "text, mu, k, expected",
        [("I:1,1", 1, 1, 1), ("I:1,1", 2, 1, 2), ("I:1,1", 2, 0, 1), ("I:2,2", 1, 4, 24)],
    )
    def test_differences(self, text, mu, k, expected):
        assert q.dk_chi(make_params(text, mu), k) == expected

    def test_k0_is_chi(self):
        params = make_params("IV:4", Fraction(5, 2))
        assert q.dk_chi(params, 0) == q.chi_tilde(params, params.d)

    def test_k_range(self):
        with pytest.raises(ParameterError):
            q.dk_chi(disk(1), 2)


class TestLeadingIdentities:
    @pytest.mark.parametrize("label, params", GRID, ids=[lab for lab, _ in GRID])
    def test_grid(self, label, params):
        rep = q.leading_identities(params)
        assert rep.passed
        assert rep.statistic == 0.0

    @given(st.sampled_from(["I:1,3", "I:2,3", "II:3", "III:6", "IV:5"]), st.fractions(5, 40, max_denominator=7))
    @settings(max_examples=30, deadline=None)
    def test_random_mu(self, text, mu):
        assert q.leading_identities(make_params(text, mu)).statistic == 0.0


class TestEpsilon:
    def test_worked_value(self):
        assert complex(q.epsilon_eval(disk(2), 4, origin_pair(disk(2)))) == pytest.approx(7, rel=1e-12)

    @pytest.mark.parametrize("alpha", [3, 4, 5, 7.5])
    def test_ball_is_constant(self, alpha):
        params = disk(1)
        pts = hartogs.sample_points(params, 100, block_rng(0, 0), stress_fraction=0.3)
        eps = q.epsilon_eval(params, alpha, PointPair(pts, pts))
        assert np.allclose(eps, (alpha - 1) * (alpha - 2), rtol=1e-10, atol=0)

    @pytest.mark.parametrize("label, params", DISTINCT, ids=IDS)
    def test_origin_against_norm_of_one(self, label, params):
        # K(0, 0) = 1 / ||1||^2 when monomials are orthogonal
        d = params.d
        vals = [complex(q.epsilon_eval(params, a, origin_pair(params))).real * math.exp(log_norm_of_one(params, a))
                for a in (d + 1.5, d + 3, d + 8.25)]
        assert vals == pytest.approx([float(params.mu) ** -d] * 3, rel=1e-11)

    @pytest.mark.parametrize("text, mu", [("I:2,2", 2), ("III:5", 3), ("IV:3", Fraction(3, 4))])
    def test_diagonal_real_positive(self, text, mu):
        params = make_params(text, mu)
        pts = hartogs.sample_points(params, 500, block_rng(1, 0), stress_fraction=0.3)
        eps = q.epsilon_eval(params, params.d + 2.5, PointPair(pts, pts))
        assert np.all(np.abs(eps.imag) <= 1e-10 * np.abs(eps))
        assert np.all(eps.real > 0)

    def test_alpha_threshold(self):
        with pytest.raises(ParameterError):
            q.epsilon_eval(disk(1), 2, origin_pair(disk(1)))

    def test_weighted_kernel_examples(self):
        params = disk(1)
        assert complex(q.weighted_kernel(params, 3, origin_pair(params))) == pytest.approx(2)
        p = HartogsPoint(np.array([0j]), 0.5 + 0j)
        val = complex(q.weighted_kernel(params, 3, PointPair(p, p)))
        assert val == pytest.approx(2 * 0.75**-3, rel=1e-13)

    @pytest.mark.parametrize("text, mu", [("I:1,2", 2), ("II:2", 1)])
    def test_kernel_hermitian(self, text, mu):
        params = make_params(text, mu)
        pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=500, seed=2))
        k_xy = q.weighted_kernel(params, params.d + 3, pairs)
        k_yx = q.weighted_kernel(params, params.d + 3, pairs.swapped())
        assert np.max(np.abs(k_xy - np.conj(k_yx)) / np.abs(k_xy)) < 1e-10


class TestPolynomial:
    def test_worked_coefficients(self):
        poly = q.epsilon_alpha_polynomial(disk(2), origin_pair(disk(2)))
        assert poly.coeffs.ravel().tolist() == [1, -2.5, 1]
        assert complex(poly(4)) == 7

    def test_ball_coefficients(self):
        params = disk(1)
        pts = hartogs.sample_points(params, 20, block_rng(3, 0))
        poly = q.epsilon_alpha_polynomial(params, PointPair(pts, pts))
        assert np.allclose(poly.coeffs, [1, -3, 2], atol=1e-15)

    @pytest.mark.parametrize("label, params", DISTINCT[::2], ids=IDS[::2])
    def test_reconstructs_epsilon(self, label, params):
        pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=200, seed=4))
        poly = q.epsilon_alpha_polynomial(params, pairs)
        assert poly.degree == params.d + 1
        assert np.allclose(poly.coeffs[:, 0], 1)
        for a in (params.d + 2, params.d + 4.5):
            direct = q.epsilon_eval(params, a, pairs)
            assert np.allclose(poly(a), direct, rtol=1e-10)
            split = a ** (params.d + 1) + poly.B * a**params.d + poly.C(a) * a ** (params.d - 1)
            assert np.allclose(split, direct, rtol=1e-10)


class TestCoefficientB:
    def test_worked(self):
        assert complex(q.coefficient_B(disk(2), origin_pair(disk(2)))) == -2.5

    @pytest.mark.parametrize("label, params", GRID, ids=[lab for lab, _ in GRID])
    def test_crosscheck_grid(self, label, params):
        rep = q.b_crosscheck_report(params, SamplerConfig(n_samples=1000, seed=42))
        assert rep.passed
        if rep.details["at_mu0"]:
            assert rep.details["B_spread"] == 0.0

    def test_constant_at_mu0(self):
        params = make_params("IV:3", Fraction(3, 4))
        pairs = hartogs.sample_pairs(params, SamplerConfig(n_samples=300, seed=0))
        assert np.all(q.coefficient_B(params, pairs) == -10)


class TestConditionBPrime:
    @pytest.mark.parametrize("text, mu", [("I:1,1", 1), ("I:1,1", 2), ("II:2", Fraction(1, 2)), ("IV:3", 1)])
    def test_report(self, text, mu):
        params = make_params(text, mu)
        alphas = list(range(params.d + 2, 2 * params.d + 5))
        rep = q.condition_bprime_report(params, alphas, SamplerConfig(n_samples=2000, seed=1))
        assert rep.passed, rep.details["checks"]
        assert rep.statistic <= 2

    def test_needs_enough_alphas(self):
        with pytest.raises(ParameterError):
            q.condition_bprime_report(disk(1), [3, 4, 5])

    def test_limite_trend_bounded(self):
        trend = q.limite_trend(make_params("I:2,2", 2), 42, n_per_level=500)
        assert max(trend["sup"]) <= 2
        assert len(trend["levels"]) == 10


class TestScalarRemark:
    @pytest.mark.parametrize("mu", [1, 2])
    def test_disk(self, mu):
        params = disk(mu)
        pts = hartogs.sample_points(params, 10, block_rng(0, 0), rmax=0.7, wmax=0.7)
        rep = q.scalar_curvature_remark_report(params, [pts[i] for i in range(10)])
        assert rep.passed

    def test_ball_values(self):
        params = disk(1)
        rep = q.scalar_curvature_remark_report(params, [HartogsPoint.origin(params)])
        row = rep.details["values"][0]
        assert row["B"] == -3
        assert row["rho"] == pytest.approx(-6, abs=1e-6)


def test_rising_on_arrays_and_fractions():
    assert q.rising(Fraction(1, 2), 3) == Fraction(15, 8)
    assert np.array_equal(q.rising(np.array([1.0, 2.0]), 2), [2.0, 6.0])
    assert q.rising(5, 0) == 1
