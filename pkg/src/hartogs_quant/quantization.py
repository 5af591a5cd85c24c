"""The epsilon-function of ``(M, alpha g(mu))`` and its expansion in ``alpha``.

    eps = mu^-d * sum_k [D^k chi(d) / k!] X^(d-k) (alpha-d-1)_(k+1)

where ``(x)_n`` is the rising factorial, ``D^k`` the ``k``-th backward
difference and

    chi(x) = prod_{i=1..r} (mu x - genus + 1 + (i-1) a/2)_(1 + b + (r-i) a).

``chi`` and its differences are evaluated in exact rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ParameterError
from .hartogs import (
    CartanHartogsParams,
    HartogsPoint,
    PointPair,
    curvature,
    potential_ext,
    sample_pairs,
    sample_points,
    x_value,
)
from .reports import CheckReport, SamplerConfig, block_rng

__all__ = [
    "rising",
    "chi_tilde",
    "dk_chi",
    "leading_identities",
    "epsilon_coefficients",
    "epsilon_eval",
    "weighted_kernel",
    "EpsilonPolynomial",
    "epsilon_alpha_polynomial",
    "coefficient_B",
    "b_crosscheck_report",
    "condition_bprime_report",
    "limite_trend",
    "scalar_curvature_remark_report",
]


def rising(x, n: int):
    """Rising factorial ``x (x+1) ... (x+n-1)``; works on Fractions and arrays."""
    out = x * 0 + 1
    for j in range(n):
        out = out * (x + j)
    return out


def _exact_mu(params):
    return Fraction(params.mu)


def _chi_exact(params: CartanHartogsParams, x: Fraction) -> Fraction:
    base = params.base
    mu = _exact_mu(params)
    half_a = Fraction(base.a, 2)
    out = Fraction(1)
    for i in range(1, base.r + 1):
        start = mu * x - base.genus + 1 + (i - 1) * half_a
        out *= rising(start, 1 + base.b + (base.r - i) * base.a)
    return out


def chi_tilde(params: CartanHartogsParams, x) -> float:
    """The Gamma-ratio product, realized as a polynomial of degree ``d`` in ``x``."""
    return float(_chi_exact(params, Fraction(x)))


@lru_cache(maxsize=None)
def _dk_chi_exact(params: CartanHartogsParams, k: int) -> Fraction:
    d = params.d
    return sum((math.comb(k, j) * (-1) ** j * _chi_exact(params, Fraction(d - j)) for j in range(k + 1)),
               Fraction(0))


def dk_chi(params: CartanHartogsParams, k: int) -> float:
    """``sum_j C(k, j) (-1)^j chi(d - j)``."""
    if not 0 <= k <= params.d:
        raise ParameterError(f"k must lie in [0, {params.d}], got {k}")
    return float(_dk_chi_exact(params, k))


def leading_identities(params: CartanHartogsParams, *, tol: float = 1e-9) -> CheckReport:
    """Compare the top two normalized differences of ``chi`` with their closed forms."""
    d, genus = params.d, params.base.genus
    mu = _exact_mu(params)
    top = _dk_chi_exact(params, d) / math.factorial(d)
    top_expected = mu**d
    nxt = _dk_chi_exact(params, d - 1) / math.factorial(d - 1)
    nxt_expected = mu ** (d - 1) * d * (mu * (d + 1) - genus) / 2

    def rel(got, want):
        if want == 0:
            return float(abs(got))
        return float(abs(got - want) / abs(want))

    errors = [rel(top, top_expected), rel(nxt, nxt_expected)]
    return CheckReport(
        suite="leading_identities",
        params=params.as_dict(),
        statistic=max(errors),
        bound=tol,
        passed=max(errors) < tol,
        details={
            "top": float(top),
            "top_expected": float(top_expected),
            "top_rel_error": errors[0],
            "next": float(nxt),
            "next_expected": float(nxt_expected),
            "next_rel_error": errors[1],
        },
    )


@lru_cache(maxsize=None)
def epsilon_coefficients(params: CartanHartogsParams) -> tuple[float, ...]:
    """``c_k = D^k chi(d) / (k! mu^d)`` for ``k = 0..d``."""
    mu_d = _exact_mu(params) ** params.d
    return tuple(float(_dk_chi_exact(params, k) / (math.factorial(k) * mu_d)) for k in range(params.d + 1))


def _check_alpha(params, alpha):
    if not alpha > params.d + 1:
        raise ParameterError(f"alpha must exceed d+1 = {params.d + 1}, got {alpha}")


def epsilon_eval(params: CartanHartogsParams, alpha: float, pair: PointPair) -> np.ndarray:
    """Sesquianalytic epsilon-function ``eps(alpha; x, conj y)``."""
    _check_alpha(params, alpha)
    d = params.d
    xv = x_value(params, pair.x, pair.y)
    total = np.zeros_like(xv)
    for k, c in enumerate(epsilon_coefficients(params)):
        if c:
            total = total + c * xv ** (d - k) * rising(alpha - d - 1, k + 1)
    return total


def weighted_kernel(params: CartanHartogsParams, alpha: float, pair: PointPair) -> np.ndarray:
    """Reproducing kernel ``K_alpha(x, conj y) = eps * exp(alpha Phi(x, conj y))``."""
    return epsilon_eval(params, alpha, pair) * np.exp(alpha * potential_ext(params, pair.x, pair.y))


@lru_cache(maxsize=None)
def _rising_poly(params: CartanHartogsParams) -> tuple[tuple[int, ...], ...]:
    """Integer coefficients (highest power first, length d+2) of (alpha-d-1)_(k+1)."""
    d = params.d
    out = []
    for k in range(d + 1):
        poly = [1]
        for i in range(k + 1):
            root = d + 1 - i
            shifted = poly + [0]
            poly = [shifted[j] - root * (poly[j - 1] if j else 0) for j in range(len(shifted))]
        out.append(tuple([0] * (d - k) + poly))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class EpsilonPolynomial:
    """``eps = sum_j coeffs[..., j] alpha^(d+1-j)`` for a fixed pair (or batch)."""

    coeffs: np.ndarray
    pair: PointPair | None = None

    @property
    def degree(self) -> int:
        return self.coeffs.shape[-1] - 1

    @property
    def B(self) -> np.ndarray:
        return self.coeffs[..., 1]

    def __call__(self, alpha) -> np.ndarray:
        out = np.zeros(self.coeffs.shape[:-1], dtype=complex)
        for j in range(self.coeffs.shape[-1]):
            out = out * alpha + self.coeffs[..., j]
        return out

    def C(self, alpha) -> np.ndarray:
        """``sum_{j>=2} coeffs[j] alpha^(2-j)``: the remainder after the two leading terms."""
        out = np.zeros(self.coeffs.shape[:-1], dtype=complex)
        for j in range(2, self.coeffs.shape[-1]):
            out = out + self.coeffs[..., j] * float(alpha) ** (2 - j)
        return out


def _x_poly_coeffs(params: CartanHartogsParams) -> np.ndarray:
    """Matrix ``M[j, p]``: coeffs[j] = sum_p M[j, p] X^p."""
    d = params.d
    mat = np.zeros((d + 2, d + 1))
    for k, (c, poly) in enumerate(zip(epsilon_coefficients(params), _rising_poly(params))):
        mat[:, d - k] += c * np.array(poly, dtype=float)
    return mat


def epsilon_alpha_polynomial(params: CartanHartogsParams, pair: PointPair) -> EpsilonPolynomial:
    """Exact coefficients of ``eps`` as a polynomial in ``alpha``."""
    xv = np.asarray(x_value(params, pair.x, pair.y))
    powers = xv[..., None] ** np.arange(params.d + 1)
    coeffs = powers @ _x_poly_coeffs(params).T.astype(complex)
    return EpsilonPolynomial(coeffs, pair)


def coefficient_B(params: CartanHartogsParams, pair: PointPair) -> np.ndarray:
    """Closed form ``-(d+1)(d+2)/2 + d (mu(d+1) - genus) / (2 mu) * X``."""
    d = params.d
    kappa = d * params.einstein_defect / (2 * float(params.mu))
    return -(d + 1) * (d + 2) / 2 + kappa * x_value(params, pair.x, pair.y)


def b_crosscheck_report(params: CartanHartogsParams, config: SamplerConfig | None = None,
                        *, tol: float = 1e-10) -> CheckReport:
    """Closed-form ``B`` against the extracted ``alpha^d`` coefficient on sampled pairs."""
    config = config or SamplerConfig(n_samples=1000)
    pairs = sample_pairs(params, config)
    poly = epsilon_alpha_polynomial(params, pairs)
    b = coefficient_B(params, pairs)
    err = float(np.max(np.abs(poly.B - b)))
    monic = float(np.max(np.abs(poly.coeffs[..., 0] - 1)))
    spread = float(np.max(np.abs(b - b.flat[0])))
    at_mu0 = params.einstein_defect == 0
    passed = err < tol and monic < tol and (spread == 0.0 if at_mu0 else True)
    return CheckReport(
        suite="B_crosscheck",
        params=params.as_dict(),
        statistic=err,
        bound=tol,
        passed=passed,
        n_samples=config.n_samples,
        seed=config.seed,
        details={"monic_error": monic, "B_spread": spread, "at_mu0": at_mu0},
    )


def _c_majorant(params, alphas, x_bound=2.0):
    mat = np.abs(_x_poly_coeffs(params))
    sup_coeffs = mat @ (x_bound ** np.arange(params.d + 1))
    return max(sum(sup_coeffs[j] * float(a) ** (2 - j) for j in range(2, params.d + 2)) for a in alphas)


def limite_trend(params: CartanHartogsParams, seed: int = 42, *, n_per_level: int = 2000,
                 levels=None) -> dict:
    """Sup of ``|X|`` over pairs pushed to ``|w|^2 = t N^mu`` for increasing ``t``.

    Returns the ladder, the sups and the least-squares slope against ``t``.
    """
    levels = np.linspace(0.5, 0.999, 10) if levels is None else np.asarray(levels)
    sups = []
    for i, t in enumerate(levels):
        rng = block_rng(seed, 10_000 + i)
        x = _push(params, sample_points(params, n_per_level, rng), t)
        y = _push(params, sample_points(params, n_per_level, rng), t)
        sups.append(float(np.max(np.abs(x_value(params, x, y)))))
    sups = np.array(sups)
    slope = float(np.polyfit(levels, sups, 1)[0])
    return {"levels": levels.tolist(), "sup": sups.tolist(), "slope": slope,
            "growth": abs(slope) * float(levels[-1] - levels[0]), "mean": float(sups.mean())}


def _push(params, p, t):
    from .hartogs import boundary_defect

    radius2 = boundary_defect(params, HartogsPoint(p.z, np.zeros_like(p.w)))
    w = np.sqrt(t * radius2) * np.exp(1j * np.angle(p.w))
    return HartogsPoint(p.z, w)


def condition_bprime_report(params: CartanHartogsParams, alphas, config: SamplerConfig | None = None,
                            *, limite_tol: float = 1e-9, degree_tol: float = 1e-9) -> CheckReport:
    """Sampled bounds on ``B``, ``C`` and ``|X|`` supporting the three-term expansion."""
    config = config or SamplerConfig()
    d = params.d
    alphas = [int(a) for a in alphas]
    if len(alphas) < d + 3:
        raise ParameterError(f"need at least d+3 = {d + 3} alpha values")
    for a in alphas:
        _check_alpha(params, a)
    pairs = sample_pairs(params, config)
    xv = x_value(params, pairs.x, pairs.y)
    b = coefficient_B(params, pairs)
    poly = epsilon_alpha_polynomial(params, pairs)

    sup_c = 0.0
    mismatch = 0.0
    for a in alphas:
        eps = epsilon_eval(params, a, pairs)
        c = (eps - a ** (d + 1) - b * a**d) / float(a) ** (d - 1)
        sup_c = max(sup_c, float(np.max(np.abs(c))))
        ref = poly.C(a)
        mismatch = max(mismatch, float(np.max(np.abs(c - ref) / (1 + np.abs(ref)))))
    real_alphas = np.arange(d + 1.25, max(alphas) + 1e-9, 0.25)
    sup_c_real = max(float(np.max(np.abs(poly.C(a)))) for a in real_alphas)

    kappa = abs(d * params.einstein_defect / (2 * float(params.mu)))
    b_bound = (d + 1) * (d + 2) / 2 + 2 * kappa
    c_bound = _c_majorant(params, alphas)
    sup_b = float(np.max(np.abs(b)))
    sup_x = float(np.max(np.abs(xv)))
    trend = limite_trend(params, config.seed)
    checks = {
        "limite": bool(sup_x <= 2 + limite_tol),
        "B_bounded": bool(sup_b <= b_bound),
        "C_bounded": bool(sup_c <= c_bound),
        "C_degree": bool(poly.coeffs.shape[-1] == d + 2 and mismatch < degree_tol),
        "no_boundary_growth": bool(trend["growth"] < 0.5 * trend["mean"]),
    }
    return CheckReport(
        suite="condition_Bprime",
        params={**params.as_dict(), "alphas": alphas},
        statistic=sup_x,
        bound=2 + limite_tol,
        passed=all(checks.values()),
        n_samples=config.n_samples,
        seed=config.seed,
        details={
            "checks": checks,
            "sup_B": sup_b,
            "B_bound": b_bound,
            "sup_C_integer_alpha": sup_c,
            "sup_C_real_alpha": sup_c_real,
            "C_bound": c_bound,
            "C_reconstruction_mismatch": mismatch,
            "n_coeffs": int(poly.coeffs.shape[-1]),
            "limite_trend": trend,
        },
    )


def scalar_curvature_remark_report(params: CartanHartogsParams, points, step: float = 1e-4,
                                   *, tol: float = 1e-3) -> CheckReport:
    """``max |B(x, conj x) - rho(x) / 2|`` with ``rho`` from :func:`curvature`."""
    worst = 0.0
    rows = []
    for p in points:
        b = complex(coefficient_B(params, PointPair(p, p)))
        rho = curvature(params, p, step).scalar
        worst = max(worst, abs(b - rho / 2))
        rows.append({"B": b.real, "rho": rho})
    return CheckReport(
        suite="scalar_curvature_remark",
        params=params.as_dict(),
        statistic=worst,
        bound=tol,
        passed=worst < tol,
        n_samples=len(rows),
        details={"values": rows},
    )
