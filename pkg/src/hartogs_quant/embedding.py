"""Truncated projective embedding of Hartogs domains over the unit ball.

For the ball base ``N = 1 - |z|^2`` and

    (N^mu - |w|^2)^(-alpha) = sum_{m, q} |f_{m,q}(z, w)|^2,
    f_{m,q} = sqrt(A_m B_{s_m}(q)) w^m z^q,  s_m = mu (alpha + m),

with ``A_m = Gamma(m + alpha) / (Gamma(alpha) m!)`` and
``B_s(q) = Gamma(s + |q|) / (Gamma(s) q!)``.  The map ``[f_{m,q}]`` into
projective space pulls the Fubini-Study potential back to ``alpha * Phi``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import HyperplaneAtInfinityError, ParameterError, UnsupportedBaseError
from .hartogs import CartanHartogsParams, HartogsPoint, PointPair, diastasis

__all__ = [
    "EmbeddingVector",
    "embed_truncated",
    "fs_diastasis",
    "pullback_residual",
    "degree_coefficients",
    "series_majorant",
]


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """Affine representative ``(1, f_1, f_2, ...)`` truncated at total degree ``order``.

    ``index[j] = (m, q)`` labels component ``j`` by its ``w``-degree and
    ``z`` multi-index.
    """

    components: np.ndarray
    index: tuple
    order: int
    tail_bound: float

    @property
    def squared_norm(self) -> float:
        return float(np.sum(np.abs(self.components) ** 2))


def _require_ball(params):
    if not params.base.is_ball:
        raise UnsupportedBaseError(f"embedding implemented for ball bases only, got {params.base.label}")


@lru_cache(maxsize=64)
def _log_coefficients(d: int, mu: float, alpha: float, order: int):
    index = []
    logs = []
    for total in range(order + 1):
        for m in range(total + 1):
            s = mu * (alpha + m)
            for q in _compositions(total - m, d):
                log_a = gammaln(m + alpha) - gammaln(alpha) - gammaln(m + 1)
                log_b = gammaln(s + sum(q)) - gammaln(s) - sum(gammaln(qi + 1) for qi in q)
                index.append((m, q))
                logs.append(log_a + log_b)
    return tuple(index), np.array(logs)


def _compositions(n, parts):
    """All ``parts``-tuples of nonnegative integers summing to ``n``."""
    for cuts in itertools.combinations(range(n + parts - 1), parts - 1):
        prev = -1
        out = []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(n + parts - 1 - prev - 1)
        yield tuple(out)


def degree_coefficients(mu: float, alpha: float, n_max: int) -> np.ndarray:
    """Coefficients ``c_n`` of ``((1 - t)^mu - t)^(-alpha) = sum c_n t^n``.

    ``c_n`` is the sum over total degree ``n`` of all squared embedding
    coefficients (multinomial-collapsed), so ``sum_{n} c_n tau^n`` with
    ``tau = max(|z|^2, |w|^2)`` majorizes the squared-norm series term by term.
    """
    out = np.zeros(n_max + 1)
    for n in range(n_max + 1):
        m = np.arange(n + 1)
        s = mu * (alpha + m)
        k = n - m
        logs = (gammaln(m + alpha) - gammaln(alpha) - gammaln(m + 1)
                + gammaln(s + k) - gammaln(s) - gammaln(k + 1))
        out[n] = np.exp(logs).sum()
    return out


def series_majorant(mu: float, alpha: float, order: int, tau: float) -> float:
    """Bound on the squared-norm tail beyond total degree ``order``."""
    if not (1 - tau) ** mu > tau:
        return math.inf
    full = ((1 - tau) ** mu - tau) ** (-alpha)
    head = float(np.polynomial.polynomial.polyval(tau, degree_coefficients(mu, alpha, order)))
    return max(full - head, 0.0) + 8 * np.finfo(float).eps * full


def embed_truncated(params: CartanHartogsParams, alpha: float, p: HartogsPoint, order: int) -> EmbeddingVector:
    """Components of the embedding at ``p`` up to total degree ``order``."""
    _require_ball(params)
    if not alpha > params.d + 1:
        raise ParameterError(f"alpha must exceed d+1 = {params.d + 1}")
    if order < 1:
        raise ParameterError("order must be a positive integer")
    mu = float(params.mu)
    index, logs = _log_coefficients(params.d, mu, float(alpha), int(order))
    z = np.asarray(p.z, dtype=complex).reshape(params.d)
    w = complex(p.w)
    ms = np.array([m for m, _ in index])
    qs = np.array([q for _, q in index]).reshape(len(index), params.d)
    monomial = w**ms * np.prod(z[None, :] ** qs, axis=1)
    comps = np.sqrt(np.exp(logs)) * monomial
    tau = max(float(np.sum(np.abs(z) ** 2)), abs(w) ** 2)
    return EmbeddingVector(comps, index, int(order), series_majorant(mu, float(alpha), int(order), tau))


def fs_diastasis(u, v) -> float:
    """Fubini-Study diastasis ``log(|u|^2 |v|^2 / |<u, v>|^2)``."""
    u = np.asarray(getattr(u, "components", u), dtype=complex)
    v = np.asarray(getattr(v, "components", v), dtype=complex)
    if u.shape != v.shape:
        raise ParameterError("vectors must have equal length")
    inner = np.vdot(v, u)
    if abs(inner) == 0:
        raise HyperplaneAtInfinityError("orthogonal representatives")
    nu = np.vdot(u, u).real
    nv = np.vdot(v, v).real
    return float(math.log(nu) + math.log(nv) - 2 * math.log(abs(inner)))


def pullback_residual(params: CartanHartogsParams, alpha: float, pair: PointPair, order: int) -> float:
    """``|D_FS(f(x), f(y)) - alpha D(x, y)|``."""
    _require_ball(params)
    fx = embed_truncated(params, alpha, pair.x, order)
    fy = embed_truncated(params, alpha, pair.y, order)
    return abs(fs_diastasis(fx, fy) - alpha * float(diastasis(params, pair)))
