"""Exception hierarchy shared by every ruinlab module."""

from pathlib import Path


class RuinLabError(Exception):
    """Base class of every error raised by ruinlab."""


## Input domain


class SpecError(RuinLabError, ValueError):
    """A model specification violates one of its invariants.

    Parameters
    ----------
    message : str
        Human readable diagnostic.
    key : str, optional
        Dotted path of the offending field (e.g. ``"returns.jumps.rate"``).
    """

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        self.message = message
        super().__init__(f"{key}: {message}" if key else message)


class Inapplicable(RuinLabError, ValueError):
    """The requested quantity is not defined for this model family."""


class AlphaOutOfRange(RuinLabError, ValueError):
    """The bound exponent is not below the critical exponent."""


class InsufficientTail(RuinLabError, ValueError):
    """Too few tail points survive the ``n_ruined`` floor to fit a slope."""


## Numerics


class DivergentTailIntegral(RuinLabError, ArithmeticError):
    """A Levy-measure tail integral did not converge."""


class DivergentMgf(RuinLabError, ArithmeticError):
    """``E exp(-alpha Y)`` is infinite for the requested ``alpha``."""


class QuadratureFailure(RuinLabError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class RootAtDomainBoundary(RuinLabError, ArithmeticError):
    """The Laplace exponent stays negative up to the edge of its domain."""


class TailIntegralDiverges(RuinLabError, ArithmeticError):
    """``int_{|x|>1} |x|^alpha nu_X(dx)`` is infinite."""


class InfiniteHorizonDivergent(RuinLabError, ArithmeticError):
    """An infinite-horizon moment is requested where ``psi(alpha) >= 0``."""


class MomentUnavailable(RuinLabError, ArithmeticError):
    """A moment needed by the bound is infinite or cannot be estimated."""


class HorizonInconclusive(RuinLabError, ArithmeticError):
    """A time average has not stabilized within the configured horizon."""


class JumpBelowMinusOne(RuinLabError, ArithmeticError):
    """A simulated return jump is ``<= -1``."""


## Persistence


class IoFailure(RuinLabError, OSError):
    """Reading or writing a run directory failed.

    Parameters
    ----------
    path : Path or str
        File or directory involved.
    message : str
        Underlying cause.
    """

    def __init__(self, path: Path | str, message: str):
        self.path = Path(path)
        super().__init__(f"{self.path}: {message}")


class SchemaMismatch(RuinLabError, ValueError):
    """A run manifest has the wrong schema version or a tampered run id."""


class CorruptFile(RuinLabError, ValueError):
    """A run file cannot be parsed."""
