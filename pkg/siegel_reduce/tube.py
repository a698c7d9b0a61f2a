#!/usr/bin/env python3
"""
Tube domain T = V + i*Omega

Points are stored as (re, im) vector pairs. The Kahler potential is
rho(x) = log_char(Im x) (constants c_B = 1, c~_B = 0), the complex structure
is J(re, im) = (-im, re), and the Kahler form -dd^c rho is available both in
closed form and as a finite-difference oracle used to test the momentum maps.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from . import cone as cones
from .cone import ConeSpec
from .errors import ConfigError, DimensionMismatch, NotInCone, NotInDomain
from .utils import DEFAULT_TOLERANCES, RetryHandler, as_vector

logger = logging.getLogger("siegel_reduce.tube")

FD_RELATIVE_STEP = 1e-5


@dataclass(frozen=True, eq=False)
class TubePoint:
    """z = re + i*im. Domain membership is checked by the operations that need it."""

    re: np.ndarray
    im: np.ndarray
    cone: ConeSpec

    def __post_init__(self):
        n = self.cone.ambient_dim
        object.__setattr__(self, 're', as_vector(self.re, n, "re"))
        object.__setattr__(self, 'im', as_vector(self.im, n, "im"))

    @property
    def dim(self) -> int:
        return self.cone.ambient_dim

    def in_domain(self, tol: float = DEFAULT_TOLERANCES.interior) -> bool:
        return cones.margin(self.cone, self.im) > tol

    def require_in_domain(self, tol: float = DEFAULT_TOLERANCES.interior) -> 'TubePoint':
        m = cones.margin(self.cone, self.im)
        if not m > tol:
            raise NotInDomain(f"Imaginary part is not in {self.cone.label} (margin {m:.3e})")
        return self

    def translate(self, h_re: Any = None, h_im: Any = None) -> 'TubePoint':
        re = self.re if h_re is None else self.re + as_vector(h_re, self.dim, "h_re")
        im = self.im if h_im is None else self.im + as_vector(h_im, self.dim, "h_im")
        return TubePoint(re, im, self.cone)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.re, self.im])

    def to_dict(self) -> Dict[str, Any]:
        return {"re": self.re.tolist(), "im": self.im.tolist()}

    @classmethod
    def from_dict(cls, cone: ConeSpec, data: Dict[str, Any], key: str = "point") -> 'TubePoint':
        if not isinstance(data, dict):
            raise ConfigError("Point must be an object with 're' and 'im'", key=key)
        for name in data:
            if name not in ("re", "im"):
                raise ConfigError(f"Unknown key '{name}' in point", key=f"{key}.{name}")
        if "re" not in data or "im" not in data:
            raise ConfigError("Point needs both 're' and 'im'", key=key)
        try:
            return cls(data["re"], data["im"], cone)
        except (DimensionMismatch, ValueError) as exc:
            raise ConfigError(str(exc), key=key) from exc


@dataclass(frozen=True, eq=False)
class Tangent:
    """A real tangent vector u = (re, im) at a tube point."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 're', as_vector(self.re, None, "re"))
        object.__setattr__(self, 'im', as_vector(self.im, self.re.shape[0], "im"))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.re, self.im])

    @classmethod
    def from_vector(cls, vec: Any) -> 'Tangent':
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or vec.shape[0] % 2:
            raise DimensionMismatch("Tangent vector must have even length 2n")
        n = vec.shape[0] // 2
        return cls(vec[:n], vec[n:])


def complex_structure_matrix(n: int) -> np.ndarray:
    """J as a 2n x 2n matrix acting on (re; im)."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def potential(x: TubePoint, tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """
    Kahler potential rho(x) = log_char(Im x); independent of Re x.

    Example:
        >>> from .cone import lorentz
        >>> round(potential(TubePoint([5, -3], [2, 1], lorentz(1))), 12) == round(-np.log(3), 12)
        True
    """
    x.require_in_domain(tol)
    return cones.log_char(x.cone, x.im, tol)


def complex_mul_i(u: Tangent) -> Tangent:
    """J(re, im) = (-im, re)."""
    return Tangent(-u.im, u.re)


def _check_tangent(x: TubePoint, u: Tangent, name: str) -> None:
    if u.re.shape[0] != x.dim:
        raise DimensionMismatch(f"Tangent {name} has dimension {u.re.shape[0]}, expected {x.dim}")


def kahler_form(x: TubePoint, u: Tangent, w: Tangent,
                tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """Closed form of -dd^c rho: u_re^T Hess w_im - u_im^T Hess w_re."""
    x.require_in_domain(tol)
    _check_tangent(x, u, "u")
    _check_tangent(x, w, "w")
    hess = cones.log_char_hessian(x.cone, x.im, tol)
    return float(u.re @ hess @ w.im - u.im @ hess @ w.re)


def fd_step(x: TubePoint) -> float:
    """Central-difference step 1e-5 * (1 + |x|)."""
    return FD_RELATIVE_STEP * (1.0 + float(np.linalg.norm(x.as_vector())))


def _dc_potential(cone: ConeSpec, im: np.ndarray, w: Tangent, tol: float) -> float:
    """d^c rho at a point with imaginary part `im`, on w: d rho(J w) = -psi(im) . w_re."""
    try:
        return -float(cones.dual_map(cone, im, tol) @ w.re)
    except NotInCone as exc:
        raise NotInDomain(f"Differencing stencil left the domain: {exc}") from exc


def kahler_form_oracle(x: TubePoint, u: Tangent, w: Tangent, step: Optional[float] = None,
                       tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """
    Finite-difference value of -dd^c rho at x on the constant fields u, w.

    -dd^c rho(u, w) = -(u(d^c rho(w)) - w(d^c rho(u))), each derivative by
    central differences. The step shrinks (x0.1) and retries up to three times
    when the stencil leaves the domain.

    Raises:
        NotInDomain: If x is outside the domain or every retry's stencil exits it
    """
    x.require_in_domain(tol)
    _check_tangent(x, u, "u")
    _check_tangent(x, w, "w")
    cone = x.cone

    def evaluate(h: float) -> float:
        du = (_dc_potential(cone, x.im + h * u.im, w, tol)
              - _dc_potential(cone, x.im - h * u.im, w, tol)) / (2.0 * h)
        dw = (_dc_potential(cone, x.im + h * w.im, u, tol)
              - _dc_potential(cone, x.im - h * w.im, u, tol)) / (2.0 * h)
        return -(du - dw)

    return RetryHandler().retry_with_shrink(evaluate, fd_step(x) if step is None else step)
