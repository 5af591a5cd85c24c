"""Weighted norm of the constant function on a Cartan-Hartogs domain.

    I(alpha) = integral over M of (N^mu - |w|^2)^(alpha - d - 2) dV,

with ``dV`` Lebesgue measure on ``C^(d+1)`` in packed coordinates.  The
fiber integral is ``pi N^(mu (alpha-d-1)) / (alpha-d-1)``; over the unit
ball the base integral is ``pi^d Gamma(s+1) / Gamma(s+d+1)``,
``s = mu (alpha-d-1)``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import domains
from .errors import DivergenceError, ParameterError, SamplingError, UnsupportedBaseError
from .hartogs import CartanHartogsParams
from .reports import block_rng, block_sizes

__all__ = [
    "IntegralEstimate",
    "weighted_norm_integral_mc",
    "weighted_norm_integral_closed",
    "worker_count",
]


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int
    acceptance: float = float("nan")

    def as_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "n_samples": self.n_samples,
                "seed": self.seed, "acceptance": self.acceptance}


def _check_convergence(params, alpha):
    d = params.d
    if not alpha > d + 1:
        raise DivergenceError(f"integral diverges for alpha <= d+1 = {d + 1} (alpha={alpha})")
    # base-integral condition; implied by the fiber condition for mu > 0
    if not float(params.mu) * (alpha - d - 1) > -1:
        raise DivergenceError("base integral diverges: mu (alpha-d-1) <= -1")


def worker_count(shards: int) -> int:
    cap = os.environ.get("HARTOGS_QUANT_THREADS")
    if cap:
        try:
            return max(1, min(shards, int(cap)))
        except ValueError as exc:
            raise ParameterError("HARTOGS_QUANT_THREADS must be an integer") from exc
    return shards


def _unit_disk(rng, shape):
    return np.sqrt(rng.random(shape)) * np.exp(2j * np.pi * rng.random(shape))


def _block_sums(params, alpha, seed, block, size):
    rng = block_rng(seed, block)
    d = params.d
    z = _unit_disk(rng, (size, d))
    w = _unit_disk(rng, size)
    inside = domains.domain_contains(params.base, z)
    log_n = np.where(inside, domains.log_generic_norm_diag(params.base, np.where(inside[:, None], z, 0)), 0.0)
    defect = np.exp(float(params.mu) * log_n) - np.abs(w) ** 2
    inside &= defect > 0
    vals = np.zeros(size)
    vals[inside] = defect[inside] ** (alpha - d - 2)
    return float(vals.sum()), float(np.sum(vals * vals)), int(inside.sum())


def weighted_norm_integral_mc(params: CartanHartogsParams, alpha: float, n_samples: int = 1_000_000,
                              seed: int = 42, shards: int = 1) -> IntegralEstimate:
    """Monte Carlo estimate by rejection from the unit polydisc in ``C^(d+1)``.

    Samples are generated in fixed blocks with per-block substreams and
    combined in block order, so the result is independent of ``shards``.
    """
    _check_convergence(params, alpha)
    if n_samples < 1000:
        raise ParameterError("n_samples must be at least 1000")
    sizes = block_sizes(n_samples)
    jobs = [(params, alpha, seed, i, s) for i, s in enumerate(sizes)]
    workers = worker_count(shards)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _block_sums(*job), jobs))
    else:
        parts = [_block_sums(*job) for job in jobs]
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    accepted = sum(p[2] for p in parts)
    acceptance = accepted / n_samples
    if acceptance < 0.001:
        raise SamplingError(f"acceptance {acceptance:.2e} below 0.1% for {params.base.label}")
    box = math.pi ** (params.d + 1)
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return IntegralEstimate(box * mean, box * math.sqrt(var / (n_samples - 1)), n_samples, seed, acceptance)


def weighted_norm_integral_closed(params: CartanHartogsParams, alpha: float) -> float:
    """Exact value of the integral for a ball base."""
    if not params.base.is_ball:
        raise UnsupportedBaseError(f"closed form available for ball bases only, got {params.base.label}")
    _check_convergence(params, alpha)
    d = params.d
    s = float(params.mu) * (alpha - d - 1)
    base = math.exp(d * math.log(math.pi) + math.lgamma(s + 1) - math.lgamma(s + d + 1))
    return math.pi / (alpha - d - 1) * base

