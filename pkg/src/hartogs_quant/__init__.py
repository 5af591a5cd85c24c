"""Quantization checks on Hartogs-type domains over classical Cartan domains."""
from .domains import (
    CartanDomainSpec,
    TypeI,
    TypeII,
    TypeIII,
    TypeIV,
    bergman_kernel,
    domain_contains,
    generic_norm,
    make_domain_spec,
    parse_domain,
    wallach_contains,
)
from .errors import (
    DivergenceError,
    HartogsError,
    HyperplaneAtInfinityError,
    NumericalDegeneracyError,
    ParameterError,
    SamplingError,
    SingularityError,
    UnsupportedBaseError,
)
from .hartogs import (
    CartanHartogsParams,
    HartogsPoint,
    PointPair,
    curvature,
    diastasis,
    make_params,
    metric_tensor,
    potential,
)
from .quantization import chi_tilde, coefficient_B, epsilon_alpha_polynomial, epsilon_eval
from .embedding import embed_truncated, fs_diastasis, pullback_residual
from .integration import weighted_norm_integral_closed, weighted_norm_integral_mc
from .reports import CheckReport, SamplerConfig

__version__ = "0.1.0"
