"""Classical Cartan domains: invariants, generic norms and Bergman kernels.

Points of a base domain are complex vectors of length ``d`` (possibly with
leading batch axes).  Matrix-valued types are packed as follows:

* Type I(m, n): row-major ``m x n`` matrix.
* Type II(n): upper triangle (diagonal included) of a symmetric ``n x n``
  matrix, row by row.
* Type III(n): strict upper triangle of a skew-symmetric ``n x n`` matrix,
  row by row.
* Type IV(n): the vector itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from .errors import ParameterError, SingularityError

__all__ = [
    "TypeI",
    "TypeII",
    "TypeIII",
    "TypeIV",
    "DomainType",
    "CartanDomainSpec",
    "make_domain_spec",
    "parse_domain",
    "as_matrix",
    "pack",
    "generic_norm",
    "log_generic_norm",
    "log_generic_norm_diag",
    "domain_contains",
    "minkowski_norm",
    "bergman_kernel",
    "wallach_contains",
    "wallach_points",
    "sample_base",
    "pfaffian",
]


def _positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class TypeI:
    """Rectangular matrices ``m x n`` with ``m <= n``."""

    m: int
    n: int

    def __post_init__(self):
        m = _positive_int(self.m, "m")
        n = _positive_int(self.n, "n")
        if not 1 <= m <= n:
            raise ParameterError(f"TypeI needs 1 <= m <= n, got m={m}, n={n}")

    @property
    def label(self):
        return f"I:{self.m},{self.n}"


@dataclass(frozen=True)
class TypeII:
    """Symmetric ``n x n`` matrices, ``n >= 2``."""

    n: int

    def __post_init__(self):
        if _positive_int(self.n, "n") < 2:
            raise ParameterError(f"TypeII needs n >= 2, got {self.n}")

    @property
    def label(self):
        return f"II:{self.n}"


@dataclass(frozen=True)
class TypeIII:
    """Skew-symmetric ``n x n`` matrices, ``n >= 5``."""

    n: int

    def __post_init__(self):
        if _positive_int(self.n, "n") < 5:
            raise ParameterError(f"TypeIII needs n >= 5, got {self.n}")

    @property
    def label(self):
        return f"III:{self.n}"


@dataclass(frozen=True)
class TypeIV:
    """Lie ball in ``C^n``, ``n >= 3``."""

    n: int

    def __post_init__(self):
        if _positive_int(self.n, "n") < 3:
            raise ParameterError(f"TypeIV needs n >= 3, got {self.n}")

    @property
    def label(self):
        return f"IV:{self.n}"


DomainType = Union[TypeI, TypeII, TypeIII, TypeIV]


@dataclass(frozen=True)
class CartanDomainSpec:
    """Invariants of a classical Cartan domain.

    ``volume`` is the Euclidean volume in the packed coordinates described in
    the module docstring, so that ``bergman_kernel(0, 0) == 1 / volume``.
    """

    dtype: DomainType
    d: int
    r: int
    a: int
    b: int
    genus: int
    volume: float

    @property
    def label(self) -> str:
        return self.dtype.label

    @property
    def is_ball(self) -> bool:
        return isinstance(self.dtype, TypeI) and self.dtype.m == 1

    def as_dict(self) -> dict:
        return {
            "domain": self.label,
            "d": self.d,
            "r": self.r,
            "a": self.a,
            "b": self.b,
            "genus": self.genus,
            "volume": self.volume,
        }


def _invariants(dtype):
    """Return (d, r, a, b, genus, packing_factor) for a domain type.

    ``packing_factor`` is the determinant at the origin of the complex
    Hessian of ``-log N(z, z)`` in packed coordinates.
    """
    if isinstance(dtype, TypeI):
        m, n = dtype.m, dtype.n
        return m * n, m, 2, n - m, m + n, 1
    if isinstance(dtype, TypeII):
        n = dtype.n
        return n * (n + 1) // 2, n, 1, 0, n + 1, 2 ** (n * (n - 1) // 2)
    if isinstance(dtype, TypeIII):
        n = dtype.n
        return n * (n - 1) // 2, n // 2, 4, 0 if n % 2 == 0 else 2, 2 * (n - 1), 1
    if isinstance(dtype, TypeIV):
        n = dtype.n
        return n, 2, n - 2, 0, n, 2**n
    raise ParameterError(f"unknown domain type {dtype!r}")


def _euclidean_volume(d, r, a, genus, packing_factor):
    # Normalized-trace-form volume pi^d prod Gamma(1+(r-j)a/2)/Gamma(genus-(j-1)a/2),
    # rescaled to packed Lebesgue measure.
    log_v = d * math.log(math.pi)
    for j in range(1, r + 1):
        log_v += math.lgamma(1 + (r - j) * a / 2) - math.lgamma(genus - (j - 1) * a / 2)
    return math.exp(log_v) / packing_factor


def make_domain_spec(dtype: DomainType) -> CartanDomainSpec:
    """Build the invariant record for ``dtype``."""
    if not isinstance(dtype, (TypeI, TypeII, TypeIII, TypeIV)):
        raise ParameterError(f"not a classical domain type: {dtype!r}")
    d, r, a, b, genus, packing = _invariants(dtype)
    if d != r * (r - 1) * a // 2 + r * b + r or genus != (r - 1) * a + b + 2:
        raise AssertionError(f"inconsistent invariants for {dtype!r}")
    return CartanDomainSpec(dtype, d, r, a, b, genus, _euclidean_volume(d, r, a, genus, packing))


def parse_domain(text: str) -> CartanDomainSpec:
    """Parse ``"I:m,n" | "II:n" | "III:n" | "IV:n"``."""
    try:
        kind, _, args = text.strip().partition(":")
        values = [int(v) for v in args.split(",")]
    except ValueError as exc:
        raise ParameterError(f"bad domain specifier {text!r}") from exc
    ctor = {"I": TypeI, "II": TypeII, "III": TypeIII, "IV": TypeIV}.get(kind.strip().upper())
    if ctor is None:
        raise ParameterError(f"bad domain specifier {text!r}")
    try:
        return make_domain_spec(ctor(*values))
    except TypeError as exc:
        raise ParameterError(f"bad domain specifier {text!r}") from exc


# ---------------------------------------------------------------------------
# packing


def _check_shape(spec, z):
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0 or z.shape[-1] != spec.d:
        raise ParameterError(f"{spec.label} points need {spec.d} coordinates, got shape {z.shape}")
    return z


def as_matrix(spec: CartanDomainSpec, z) -> np.ndarray:
    """Unpack coordinates into the matrix realization (Type IV: the vector)."""
    z = _check_shape(spec, z)
    t = spec.dtype
    batch = z.shape[:-1]
    if isinstance(t, TypeI):
        return z.reshape(batch + (t.m, t.n))
    if isinstance(t, TypeII):
        rows, cols = np.triu_indices(t.n)
        out = np.zeros(batch + (t.n, t.n), dtype=complex)
        out[..., rows, cols] = z
        out[..., cols, rows] = z
        return out
    if isinstance(t, TypeIII):
        rows, cols = np.triu_indices(t.n, 1)
        out = np.zeros(batch + (t.n, t.n), dtype=complex)
        out[..., rows, cols] = z
        out[..., cols, rows] = -z
        return out
    return z


def pack(spec: CartanDomainSpec, mat) -> np.ndarray:
    """Inverse of :func:`as_matrix` (no symmetry check)."""
    mat = np.asarray(mat, dtype=complex)
    t = spec.dtype
    if isinstance(t, TypeI):
        return mat.reshape(mat.shape[:-2] + (spec.d,))
    if isinstance(t, TypeII):
        rows, cols = np.triu_indices(t.n)
        return mat[..., rows, cols]
    if isinstance(t, TypeIII):
        rows, cols = np.triu_indices(t.n, 1)
        return mat[..., rows, cols]
    return _check_shape(spec, mat)


def _adjoint(mat):
    return np.conj(np.swapaxes(mat, -1, -2))


# ---------------------------------------------------------------------------
# generic norm


def pfaffian(a) -> np.ndarray:
    """Pfaffian of a (batch of) skew-symmetric matrices of even size.

    Parlett-Reid elimination with partial pivoting, vectorized over the
    leading axes.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[-1]
    batch = a.shape[:-2]
    if n % 2:
        return np.zeros(batch, dtype=complex)
    a = a.reshape((-1, n, n))
    nb = a.shape[0]
    out = np.ones(nb, dtype=complex)
    rows = np.arange(nb)
    for k in range(0, n - 1, 2):
        kp = k + 1 + np.argmax(np.abs(a[:, k + 1:, k]), axis=1)
        perm = np.tile(np.arange(n), (nb, 1))
        perm[rows, k + 1] = kp
        perm[rows, kp] = k + 1
        a = a[rows[:, None, None], perm[:, :, None], perm[:, None, :]]
        out[kp != k + 1] *= -1
        piv = a[:, k, k + 1]
        out *= piv
        if k + 2 < n:
            safe = np.where(piv == 0, 1.0, piv)
            tau = a[:, k, k + 2:] / safe[:, None]
            col = a[:, k + 2:, k + 1]
            a[:, k + 2:, k + 2:] += tau[:, :, None] * col[:, None, :] - col[:, :, None] * tau[:, None, :]
    return out.reshape(batch)


def generic_norm(spec: CartanDomainSpec, z, zeta) -> np.ndarray:
    """Sesquianalytic generic norm ``N(z, conj(zeta))``.

    Polynomial in ``z`` and ``conj(zeta)``; no interior condition needed.
    """
    z = _check_shape(spec, z)
    zeta = _check_shape(spec, zeta)
    t = spec.dtype
    if isinstance(t, TypeIV):
        inner = np.sum(z * np.conj(zeta), axis=-1)
        return 1 - 2 * inner + np.sum(z * z, axis=-1) * np.conj(np.sum(zeta * zeta, axis=-1))
    zm, km = np.broadcast_arrays(as_matrix(spec, z), as_matrix(spec, zeta))
    if isinstance(t, TypeIII):
        # det(I - Z K*) = Pf([[Z, I], [-I, conj K]])^2; sign fixed by N(0, 0) = 1
        n = t.n
        eye = np.broadcast_to(np.eye(n), zm.shape)
        big = np.block([[zm, eye], [-eye, np.conj(km)]])
        return (-1) ** (n * (n - 1) // 2) * pfaffian(big)
    return np.linalg.det(np.eye(zm.shape[-2]) - zm @ _adjoint(km))


def _spectral_values(spec, z, zeta):
    """Values ``lam`` with ``N(z, conj(zeta)) = prod(1 - lam)`` (III: squared)."""
    t = spec.dtype
    if isinstance(t, TypeIV):
        s = np.sum(z * np.conj(zeta), axis=-1)
        p = np.sum(z * z, axis=-1) * np.conj(np.sum(zeta * zeta, axis=-1))
        disc = np.sqrt(s * s - p)
        return np.stack([s + disc, s - disc], axis=-1)
    if spec.is_ball:
        return np.sum(z * np.conj(zeta), axis=-1)[..., None]
    zm, km = np.broadcast_arrays(as_matrix(spec, z), as_matrix(spec, zeta))
    return np.linalg.eigvals(zm @ _adjoint(km))


def log_generic_norm(spec: CartanDomainSpec, z, zeta) -> np.ndarray:
    """Logarithm of ``N(z, conj(zeta))`` on the branch continuous from ``N(0, 0) = 1``.

    For interior ``z, zeta`` every spectral value lies in the unit disk, so
    summing principal logarithms of ``1 - lam`` gives the sesquianalytic
    logarithm without branch ambiguity.
    """
    z = _check_shape(spec, z)
    zeta = _check_shape(spec, zeta)
    lam = _spectral_values(spec, z, zeta)
    total = np.sum(np.log(1 - lam), axis=-1)
    if isinstance(spec.dtype, TypeIII):
        total = total / 2
    return total


def log_generic_norm_diag(spec: CartanDomainSpec, z) -> np.ndarray:
    """Real ``log N(z, conj(z))``; NaN where ``N(z, z) <= 0``."""
    z = _check_shape(spec, z)
    t = spec.dtype
    with np.errstate(invalid="ignore", divide="ignore"):
        if isinstance(t, TypeIV):
            s = np.sum(np.abs(z) ** 2, axis=-1)
            q = np.abs(np.sum(z * z, axis=-1)) ** 2
            val = 1 - 2 * s + q
            return np.where(val > 0, np.log(np.where(val > 0, val, 1.0)), np.nan)
        if spec.is_ball:
            s = np.sum(np.abs(z) ** 2, axis=-1)
            return np.where(s < 1, np.log1p(-np.minimum(s, 1.0)), np.nan)
        zm = as_matrix(spec, z)
        ev = np.linalg.eigvalsh(np.eye(zm.shape[-2]) - zm @ _adjoint(zm))
        out = np.sum(np.log(ev), axis=-1)
    if isinstance(t, TypeIII):
        out = out / 2
    return out


def minkowski_norm(spec: CartanDomainSpec, z) -> np.ndarray:
    """Norm whose open unit ball is the domain (spectral norm / Lie norm)."""
    z = _check_shape(spec, z)
    if isinstance(spec.dtype, TypeIV):
        s = np.sum(np.abs(z) ** 2, axis=-1)
        q = np.abs(np.sum(z * z, axis=-1))
        return np.sqrt(s + np.sqrt(np.maximum(s * s - q * q, 0.0)))
    if spec.is_ball:
        return np.linalg.norm(z, axis=-1)
    return np.linalg.svd(as_matrix(spec, z), compute_uv=False)[..., 0]


def domain_contains(spec: CartanDomainSpec, z) -> np.ndarray:
    """Interior membership test (boundary excluded)."""
    z = _check_shape(spec, z)
    if isinstance(spec.dtype, TypeIV):
        s = np.sum(np.abs(z) ** 2, axis=-1)
        q = np.abs(np.sum(z * z, axis=-1))
        return (q < 1) & (1 - 2 * s + q * q > 0)
    return minkowski_norm(spec, z) < 1


def bergman_kernel(spec: CartanDomainSpec, z, zeta) -> np.ndarray:
    """``K(z, conj(zeta)) = N(z, conj(zeta))**(-genus) / volume``."""
    n = generic_norm(spec, z, zeta)
    if np.any(np.abs(n) == 0):
        raise SingularityError("generic norm vanishes: boundary pair")
    return n ** (-spec.genus) / spec.volume


# ---------------------------------------------------------------------------
# Wallach set


def wallach_points(spec: CartanDomainSpec) -> list[Fraction]:
    """Discrete part ``{0, a/2, ..., (r-1)a/2}`` as exact fractions."""
    return [Fraction(k * spec.a, 2) for k in range(spec.r)]


def wallach_contains(spec: CartanDomainSpec, mu) -> bool:
    """Membership of ``mu`` in the Wallach set of ``spec``."""
    threshold = Fraction((spec.r - 1) * spec.a, 2)
    if isinstance(mu, Rational):
        mu = Fraction(mu)
        return mu > threshold or mu in wallach_points(spec)
    mu = float(mu)
    if not math.isfinite(mu):
        return False
    if any(abs(mu - float(p)) <= 1e-12 for p in wallach_points(spec)):
        return True
    return mu > float(threshold)


# ---------------------------------------------------------------------------
# sampling


def _unit_disk(rng, shape):
    radius = np.sqrt(rng.random(shape))
    angle = 2 * np.pi * rng.random(shape)
    return radius * np.exp(1j * angle)


def sample_base(spec: CartanDomainSpec, n: int, rng: np.random.Generator,
                method: str = "radial", rmax: float = 1.0) -> np.ndarray:
    """Draw ``n`` interior points of the base domain.

    ``"radial"`` rescales a Gaussian direction to Minkowski radius
    ``rmax * U**(1/(2d))``; it never rejects and reaches the boundary in
    every direction.  ``"polydisc"`` is uniform on the domain by rejection
    from the unit polydisc in packed coordinates.
    """
    d = spec.d
    if method == "radial":
        u = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        radius = rmax * rng.random(n) ** (1.0 / (2 * d))
        return u * (radius / minkowski_norm(spec, u))[:, None]
    if method == "polydisc":
        from .errors import SamplingError

        out = []
        have = 0
        tries = 0
        batch = max(4 * n, 1024)
        while have < n:
            cand = _unit_disk(rng, (batch, d))
            keep = cand[domain_contains(spec, cand)]
            tries += batch
            out.append(keep)
            have += len(keep)
            if tries >= 10_000 and have < 0.001 * tries:
                raise SamplingError(f"acceptance below 0.1% for {spec.label}")
        return np.concatenate(out)[:n]
    raise ParameterError(f"unknown sampling method {method!r}")
