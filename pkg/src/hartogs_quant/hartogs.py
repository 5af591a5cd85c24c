"""Cartan-Hartogs domains over a classical base.

The domain is ``{(z, w) : z in base, |w|^2 < N(z, z)^mu}`` with Kahler
potential ``Phi = -log(N^mu - |w|^2)``.  Off the diagonal the potential is
written as

    Phi(x, conj y) = -mu * log N(z_x, conj z_y) - log X(x, y),
    X(x, y) = 1 - w_x conj(w_y) N(z_x, conj z_y)^(-mu),

with ``log N`` taken on the branch continuous from the origin.  For interior
points ``|1 - X| < 1`` (Cauchy-Schwarz on the kernel ``N^-mu``), so the
principal logarithm of ``X`` is the right one as well.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import domains
from .domains import CartanDomainSpec
from .errors import NumericalDegeneracyError, ParameterError, SingularityError
from .reports import CheckReport, SamplerConfig, block_rng, block_sizes

__all__ = [
    "CartanHartogsParams",
    "HartogsPoint",
    "PointPair",
    "make_params",
    "hartogs_contains",
    "boundary_defect",
    "x_value",
    "potential",
    "potential_ext",
    "diastasis",
    "sample_points",
    "sample_pairs",
    "exp_minus_diastasis_report",
    "complex_hessian",
    "metric_tensor",
    "log_det_metric_model",
    "det_identity_residual",
    "Curvature",
    "curvature",
    "kahler_einstein_report",
    "point_to_json",
    "point_from_json",
]


@dataclass(frozen=True)
class CartanHartogsParams:
    """A base domain together with the Hartogs exponent ``mu``."""

    base: CartanDomainSpec
    mu: float | Fraction

    def __post_init__(self):
        if not float(self.mu) > 0:
            raise ParameterError(f"mu must be positive, got {self.mu}")
        if not domains.wallach_contains(self.base, self.mu):
            raise ParameterError(f"mu={self.mu} is not in the Wallach set of {self.base.label}")

    @property
    def mu0(self) -> float:
        """Kahler-Einstein exponent ``genus / (d + 1)``."""
        return self.base.genus / (self.base.d + 1)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def einstein_defect(self) -> float:
        """``mu (d + 1) - genus``; zero exactly at ``mu0``."""
        return float(self.mu) * (self.base.d + 1) - self.base.genus

    def as_dict(self) -> dict:
        return {"domain": self.base.label, "mu": float(self.mu), "d": self.base.d, "mu0": self.mu0}


def make_params(domain: str | CartanDomainSpec, mu) -> CartanHartogsParams:
    base = domains.parse_domain(domain) if isinstance(domain, str) else domain
    return CartanHartogsParams(base, mu)


@dataclass(frozen=True, eq=False)
class HartogsPoint:
    """Point ``(z, w)``; ``z`` has shape ``(..., d)`` and ``w`` shape ``(...)``."""

    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.asarray(self.z, dtype=complex))
        object.__setattr__(self, "w", np.asarray(self.w, dtype=complex))

    @classmethod
    def origin(cls, params: CartanHartogsParams) -> "HartogsPoint":
        return cls(np.zeros(params.d), 0.0)

    @classmethod
    def from_coords(cls, coords) -> "HartogsPoint":
        """Split a ``(..., d+1)`` coordinate array into ``(z, w)``."""
        coords = np.asarray(coords, dtype=complex)
        return cls(coords[..., :-1], coords[..., -1])

    @property
    def coords(self) -> np.ndarray:
        z, w = np.broadcast_arrays(self.z, self.w[..., None])
        return np.concatenate([z, w[..., :1]], axis=-1)

    def __len__(self):
        return self.w.shape[0] if self.w.ndim else 1

    def __getitem__(self, item) -> "HartogsPoint":
        return HartogsPoint(self.z[item], self.w[item])


@dataclass(frozen=True, eq=False)
class PointPair:
    x: HartogsPoint
    y: HartogsPoint

    def swapped(self) -> "PointPair":
        return PointPair(self.y, self.x)


def _check(params, p):
    if p.z.shape[-1:] != (params.d,):
        raise ParameterError(f"z needs {params.d} coordinates, got shape {p.z.shape}")


# ---------------------------------------------------------------------------
# membership and potential


def boundary_defect(params: CartanHartogsParams, p: HartogsPoint) -> np.ndarray:
    """``N(z, z)^mu - |w|^2`` (NaN where ``N(z, z) <= 0``)."""
    _check(params, p)
    log_n = domains.log_generic_norm_diag(params.base, p.z)
    return np.exp(float(params.mu) * log_n) - np.abs(p.w) ** 2


def hartogs_contains(params: CartanHartogsParams, p: HartogsPoint) -> np.ndarray:
    """Strict interior membership."""
    _check(params, p)
    inside = domains.domain_contains(params.base, p.z)
    with np.errstate(invalid="ignore"):
        return inside & (boundary_defect(params, p) > 0)


def x_value(params: CartanHartogsParams, x: HartogsPoint, y: HartogsPoint) -> np.ndarray:
    """``X = 1 - w_x conj(w_y) N(z_x, conj z_y)^(-mu)``."""
    _check(params, x)
    _check(params, y)
    log_n = domains.log_generic_norm(params.base, x.z, y.z)
    return 1 - x.w * np.conj(y.w) * np.exp(-float(params.mu) * log_n)


def potential(params: CartanHartogsParams, p: HartogsPoint) -> np.ndarray:
    """Real potential ``-log(N^mu - |w|^2)`` on the diagonal (NaN outside)."""
    with np.errstate(invalid="ignore", divide="ignore"):
        return -np.log(boundary_defect(params, p))


def potential_ext(params: CartanHartogsParams, x: HartogsPoint, y: HartogsPoint) -> np.ndarray:
    """Sesquianalytic extension ``Phi(x, conj y)`` (complex)."""
    log_n = domains.log_generic_norm(params.base, x.z, y.z)
    xv = 1 - x.w * np.conj(y.w) * np.exp(-float(params.mu) * log_n)
    if np.any(~np.isfinite(log_n)) or np.any(np.abs(xv) <= 1e-300):
        raise SingularityError("potential argument vanishes (boundary pair)")
    return -float(params.mu) * log_n - np.log(xv)


def diastasis(params: CartanHartogsParams, pair: PointPair) -> np.ndarray:
    """Calabi diastasis ``D(x, y)``, real and exactly symmetric in ``x, y``."""
    x, y = pair.x, pair.y
    diag = potential_ext(params, x, x) + potential_ext(params, y, y)
    cross = potential_ext(params, x, y) + potential_ext(params, y, x)
    value = diag - cross
    scale = 1 + np.abs(diag) + np.abs(cross)
    # roundoff in log(1 - lambda) near the boundary reaches ~1e-11 relative
    if np.any(np.abs(value.imag) > 1e-9 * scale):
        raise NumericalDegeneracyError("diastasis has a non-negligible imaginary part")
    return value.real


# ---------------------------------------------------------------------------
# sampling


def sample_points(params: CartanHartogsParams, n: int, rng: np.random.Generator, *,
                  rmax: float = 1.0, wmax: float = 1.0, stress_fraction: float = 0.0,
                  stress_max: float = 0.999, method: str = "radial") -> HartogsPoint:
    """Interior points; ``|w|^2 <= wmax * N^mu`` except for stress points.

    Stress points have ``|w|^2`` uniform in ``[0.9, stress_max] * N^mu``.
    """
    z = domains.sample_base(params.base, n, rng, method=method, rmax=rmax)
    log_n = domains.log_generic_norm_diag(params.base, z)
    radius2 = np.exp(float(params.mu) * log_n)
    frac = wmax * rng.random(n)
    stress = rng.random(n) < stress_fraction
    frac = np.where(stress, 0.9 + (stress_max - 0.9) * rng.random(n), frac)
    w = np.sqrt(frac * radius2) * np.exp(2j * np.pi * rng.random(n))
    return HartogsPoint(z, w)


def sample_pairs(params: CartanHartogsParams, config: SamplerConfig, *,
                 near_fraction: float = 0.2) -> PointPair:
    """Deterministic batch of pairs for the property suites.

    A ``near_fraction`` of pairs have ``y`` a small interior perturbation of
    ``x`` so that the near-diagonal regime is exercised.
    """
    xs, ys = [], []
    for block, size in enumerate(block_sizes(config.n_samples)):
        rng = block_rng(config.seed, block)
        kw = dict(stress_fraction=config.stress_fraction, stress_max=config.stress_max,
                  method=config.method)
        x = sample_points(params, size, rng, **kw)
        y = sample_points(params, size, rng, **kw)
        near = rng.random(size) < near_fraction
        t = 10.0 ** rng.uniform(-3, -1, size)
        yz = np.where(near[:, None], x.z * (1 - t[:, None]), y.z)
        yw = np.where(near, x.w * (1 - t) * np.exp(1j * t), y.w)
        xs.append(x.coords)
        ys.append(HartogsPoint(yz, yw).coords)
    return PointPair(HartogsPoint.from_coords(np.concatenate(xs)),
                     HartogsPoint.from_coords(np.concatenate(ys)))


def exp_minus_diastasis_report(params: CartanHartogsParams, config: SamplerConfig | None = None,
                               *, tol: float = 1e-12, separation: float = 0.01) -> CheckReport:
    """Sampled check of ``exp(-D) <= 1`` with equality only on the diagonal."""
    config = config or SamplerConfig()
    pairs = sample_pairs(params, config)
    inside = hartogs_contains(params, pairs.x) & hartogs_contains(params, pairs.y)
    if not np.all(inside):
        raise AssertionError("sampler produced exterior points")
    e = np.exp(-diastasis(params, pairs))
    dist = np.linalg.norm(pairs.x.coords - pairs.y.coords, axis=-1)
    off = dist > 0
    sep = dist > separation
    violations = int(np.sum(e > 1 + tol))
    sep_max = float(np.max(e[sep])) if np.any(sep) else float("nan")
    diag = exp_minus_diastasis_diagonal(params, pairs.x)
    passed = violations == 0 and sep_max < 1 and diag == 0.0
    return CheckReport(
        suite="condition_A",
        params=params.as_dict(),
        statistic=float(np.max(e[off])),
        bound=1 + tol,
        passed=passed,
        n_samples=config.n_samples,
        seed=config.seed,
        details={
            "violations": violations,
            "max_exp_minus_D_separated": sep_max,
            "min_gap_separated": 1 - sep_max,
            "n_separated": int(np.sum(sep)),
            "separation": separation,
            "diagonal_max_abs_D": diag,
        },
    )


def exp_minus_diastasis_diagonal(params, points: HartogsPoint) -> float:
    """Largest ``|D(x, x)|`` over ``points`` (zero by construction)."""
    return float(np.max(np.abs(diastasis(params, PointPair(points, points)))))


# ---------------------------------------------------------------------------
# finite-difference geometry


def _real_hessian(f, x0, step, levels=1):
    """Central-difference Hessian of ``f`` at real vector ``x0`` with ``levels`` Richardson steps."""
    m = x0.size
    eye = np.eye(m)
    iu, ju = np.triu_indices(m, 1)

    def stencil(h):
        pts = [x0[None, :]]
        pts.append(x0 + h * eye)
        pts.append(x0 - h * eye)
        pp = eye[iu] + eye[ju]
        pm = eye[iu] - eye[ju]
        pts += [x0 + h * pp, x0 + h * pm, x0 - h * pm, x0 - h * pp]
        return np.concatenate(pts)

    def assemble(vals, h):
        k = len(iu)
        f0 = vals[0]
        fp, fm = vals[1:1 + m], vals[1 + m:1 + 2 * m]
        rest = vals[1 + 2 * m:]
        fpp, fpm, fmp, fmm = rest[:k], rest[k:2 * k], rest[2 * k:3 * k], rest[3 * k:]
        hess = np.zeros((m, m))
        hess[np.arange(m), np.arange(m)] = (fp - 2 * f0 + fm) / h**2
        off = (fpp - fpm - fmp + fmm) / (4 * h**2)
        hess[iu, ju] = off
        hess[ju, iu] = off
        return hess

    steps = [step * 2**k for k in range(levels + 1)]
    vals = f(np.concatenate([stencil(h) for h in steps]))
    table = [assemble(v, h) for v, h in zip(np.split(vals, len(steps)), steps)]
    for k in range(1, levels + 1):
        w = 4**k
        table = [(w * fine - coarse) / (w - 1) for fine, coarse in zip(table, table[1:])]
    return table[0]


def complex_hessian(f: Callable[[np.ndarray], np.ndarray], point, step: float = 1e-4,
                    levels: int = 1) -> np.ndarray:
    """Matrix ``d^2 f / dzeta_i dconj(zeta_j)`` of a real function of complex coordinates.

    ``f`` maps an array of complex coordinates ``(..., n)`` to real values.
    The result is Hermitian by construction.
    """
    point = np.asarray(point, dtype=complex)
    n = point.size
    x0 = np.concatenate([point.real, point.imag])

    def g(real_pts):
        return f(real_pts[:, :n] + 1j * real_pts[:, n:])

    h = _real_hessian(g, x0, step, levels)
    hxx, hyy = h[:n, :n], h[n:, n:]
    hxy = h[:n, n:]
    return 0.25 * (hxx + hyy + 1j * (hxy - hxy.T))


def _margin_check(params, p, step):
    defect = float(boundary_defect(params, p))
    if not defect > 4 * step:
        raise ParameterError(f"point too close to the boundary: N^mu - |w|^2 = {defect:.3g}")


def metric_tensor(params: CartanHartogsParams, p: HartogsPoint, step: float = 1e-4,
                  levels: int = 1) -> np.ndarray:
    """Kahler metric ``g_{i jbar} = d_i dbar_j Phi`` over ``(z_1..z_d, w)``."""
    _margin_check(params, p, step * 2 ** (levels - 1))

    def phi(coords):
        return potential(params, HartogsPoint.from_coords(coords))

    g = complex_hessian(phi, p.coords, step, levels)
    if not np.all(np.isfinite(g)):
        raise NumericalDegeneracyError("finite-difference stencil left the domain")
    if np.linalg.eigvalsh(g)[0] <= 0:
        raise NumericalDegeneracyError("metric is not positive definite; reduce step")
    return g


def log_det_metric_model(params: CartanHartogsParams, p: HartogsPoint) -> np.ndarray:
    """``(mu(d+1) - genus) log N - (d+2) log(N^mu - |w|^2)``: log det g up to a constant."""
    log_n = domains.log_generic_norm_diag(params.base, p.z)
    return params.einstein_defect * log_n - (params.d + 2) * np.log(boundary_defect(params, p))


def det_identity_residual(params: CartanHartogsParams, points: Sequence[HartogsPoint] | HartogsPoint,
                          step: float = 1e-4, *, tol: float = 1e-5) -> CheckReport:
    """Check that ``log det g - log_det_metric_model`` is constant over ``points``."""
    if isinstance(points, HartogsPoint):
        points = [points[i] for i in range(len(points))]
    if len(points) < 3:
        raise ParameterError("need at least 3 points")
    s = np.array([np.linalg.slogdet(metric_tensor(params, p, step))[1] - log_det_metric_model(params, p)
                  for p in points])
    c_fit = float(np.exp(np.mean(s)))
    c_origin = float(np.linalg.det(metric_tensor(params, HartogsPoint.origin(params), step)).real)
    c_exact = float(params.mu) ** params.d * _packing_factor(params.base)
    spread = float(np.max(s) - np.min(s))
    rel = abs(c_fit / c_origin - 1)
    return CheckReport(
        suite="det_identity",
        params=params.as_dict(),
        statistic=spread,
        bound=tol,
        passed=spread < tol and rel < tol,
        n_samples=len(points),
        details={
            "c_fit": c_fit,
            "c_origin": c_origin,
            "c_exact": c_exact,
            "rel_c_fit_vs_origin": rel,
            "exponent_on_N": params.einstein_defect,
            "step": step,
        },
    )


def _packing_factor(spec):
    # det of the Hessian of -log N at the origin in packed coordinates
    t = spec.dtype
    if isinstance(t, domains.TypeII):
        return 2 ** (t.n * (t.n - 1) // 2)
    if isinstance(t, domains.TypeIV):
        return 2**t.n
    return 1


@dataclass(frozen=True)
class Curvature:
    ricci: np.ndarray
    scalar: float


def curvature(params: CartanHartogsParams, p: HartogsPoint, step: float = 1e-4, *,
              method: str = "semi_analytic", inner_step: float = 1e-3,
              outer_step: float = 5e-3) -> Curvature:
    """Ricci form ``-d dbar log det g`` and scalar curvature ``tr(g^-1 Ric)``.

    ``"semi_analytic"`` relies on the determinant identity:
    ``Ric = -(mu(d+1) - genus) d dbar log N - (d+2) g``.
    ``"direct"`` differentiates ``log det g`` numerically with nested
    two-level Richardson stencils (``inner_step`` for ``g``, ``outer_step``
    for the log-determinant); accurate to a few 1e-5 away from the boundary.
    """
    if method == "semi_analytic":
        g = metric_tensor(params, p, step)

        def log_n(coords):
            return domains.log_generic_norm_diag(params.base, coords[..., :-1])

        hess_log_n = complex_hessian(log_n, p.coords, step)
        ricci = -params.einstein_defect * hess_log_n - (params.d + 2) * g
    elif method == "direct":
        _margin_check(params, p, 6 * outer_step)
        g = metric_tensor(params, p, inner_step, levels=2)

        def log_det(coords):
            return np.array([np.linalg.slogdet(metric_tensor(params, HartogsPoint.from_coords(c),
                                                             inner_step, levels=2))[1]
                             for c in coords])

        ricci = -complex_hessian(log_det, p.coords, outer_step, levels=2)
    else:
        raise ParameterError(f"unknown curvature method {method!r}")
    if np.linalg.cond(g) > 1e12:
        raise NumericalDegeneracyError("metric inverse is ill-conditioned")
    scalar = float(np.trace(np.linalg.solve(g, ricci)).real)
    return Curvature(ricci, scalar)


def kahler_einstein_report(params: CartanHartogsParams, points: Sequence[HartogsPoint],
                           step: float = 1e-4, *, tol: float = 1e-4, method: str = "auto") -> CheckReport:
    """``max |Ric + (d+2) g|`` over ``points``; meaningful at ``mu = mu0``.

    ``method="auto"`` uses the direct Ricci form (independent of the
    determinant identity) for ``d <= 3`` and the semi-analytic one above,
    where nested stencils get expensive.  The semi-analytic residual is
    always reported.
    """
    if method == "auto":
        method = "direct" if params.d <= 3 else "semi_analytic"
    if method not in ("direct", "semi_analytic"):
        raise ParameterError(f"unknown curvature method {method!r}")
    worst = semi = 0.0
    for p in points:
        g = metric_tensor(params, p, step)
        ric = curvature(params, p, step).ricci
        semi = max(semi, float(np.max(np.abs(ric + (params.d + 2) * g))))
        if method == "direct":
            ric = curvature(params, p, method="direct").ricci
            g = metric_tensor(params, p, 1e-3, levels=2)
            worst = max(worst, float(np.max(np.abs(ric + (params.d + 2) * g))))
    if method == "semi_analytic":
        worst = semi
    return CheckReport(
        suite="kahler_einstein",
        params=params.as_dict(),
        statistic=worst,
        bound=tol,
        passed=worst < tol,
        n_samples=len(points),
        details={"is_mu0": math.isclose(float(params.mu), params.mu0, rel_tol=1e-12),
                 "method": method, "semi_analytic_residual": semi},
    )


# ---------------------------------------------------------------------------
# serialization


def point_to_json(p: HartogsPoint) -> list:
    """``[[re, im], ...]`` with the ``d`` base coordinates followed by ``w``."""
    return [[float(c.real), float(c.imag)] for c in np.ravel(p.coords)]


def point_from_json(params: CartanHartogsParams, data) -> HartogsPoint:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParameterError("points are JSON arrays of [re, im] pairs") from exc
    if arr.shape != (params.d + 1, 2):
        raise ParameterError(f"point needs {params.d + 1} [re, im] pairs, got shape {arr.shape}")
    return HartogsPoint.from_coords(arr[:, 0] + 1j * arr[:, 1])
