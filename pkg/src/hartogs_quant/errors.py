"""Exception hierarchy shared by every module."""


class HartogsError(Exception):
    """Base class for all errors raised by hartogs_quant."""


class ParameterError(HartogsError, ValueError):
    """Out-of-range domain parameters, malformed points or shape mismatches."""


class SingularityError(HartogsError, ArithmeticError):
    """A kernel, norm or logarithm argument vanished (boundary pair)."""


class SamplingError(HartogsError, RuntimeError):
    """Rejection sampler could not produce enough accepted samples."""


class NumericalDegeneracyError(HartogsError, ArithmeticError):
    """Finite-difference metric not positive definite or badly conditioned."""


class DivergenceError(HartogsError, ValueError):
    """Requested weighted integral (or epsilon-function) does not converge."""


class UnsupportedBaseError(HartogsError, NotImplementedError):
    """Operation implemented only for the complex-hyperbolic-ball base."""


class HyperplaneAtInfinityError(HartogsError, ArithmeticError):
    """Two projective points have orthogonal representatives."""
