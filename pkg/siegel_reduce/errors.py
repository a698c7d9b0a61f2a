"""
Exception hierarchy for siegel_reduce.

Every operation raises a subclass of SiegelReduceError so callers (and the CLI
exit-code table) can dispatch on the failure kind.
"""

from typing import Optional


class SiegelReduceError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SiegelReduceError, ValueError):
    """Vector or matrix length does not match the cone's ambient dimension."""


class NonFiniteInput(SiegelReduceError, ValueError):
    """NaN or Inf passed across an operation boundary."""


class NotInCone(SiegelReduceError):
    """Point is not in the open cone (margin below the interior threshold)."""


class NotInDualCone(SiegelReduceError):
    """Point is not in the open dual cone."""


class NotInDomain(SiegelReduceError):
    """Point is not in the tube domain V + i*Omega."""


class NotConeCompatible(SiegelReduceError):
    """Linear part of a generator is not in the Lie algebra of the cone."""


class NotAdmissible(SiegelReduceError):
    """Subspace meets the closed cone outside the origin (or could not be certified)."""


class MaxIterations(SiegelReduceError):
    """An iterative solver exhausted its budget."""


class Undecided(SiegelReduceError):
    """A banded certificate landed inside its tolerance band."""


class NotInZ(SiegelReduceError):
    """Point is not in Z = V + i(Omega + H)."""


class InvalidWitness(SiegelReduceError):
    """Supplied witness does not certify what it claims to."""


class NotOnZeroSet(SiegelReduceError):
    """Point is not on the zero level set of the momentum map."""


class RankAmbiguous(SiegelReduceError):
    """Singular values straddle the rank cutoff band."""


class SamplingFailure(SiegelReduceError):
    """Rejection sampling exhausted its draw budget."""


class ConfigError(SiegelReduceError, ValueError):
    """Invalid configuration; `key` names the offending entry."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key
