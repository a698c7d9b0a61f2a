#!/usr/bin/env python3
"""
Proper open convex cones with closed-form barrier calculus

Catalog: lorentz(d) in R^{d+1}, orthant(d) in R^d, and finite products.
The inner product g is the Euclidean dot product of the stored coordinates;
both catalog kinds are self-dual under it.

log_char is the logarithm of the characteristic function up to an additive
constant per kind (the multiplicative constant of the defining integral is
dropped; the dual map and the Hessian do not depend on it):

    orthant(d):  -sum_i log w_i
    lorentz(d):  -((d+1)/2) log q(w),   q(w) = w_0^2 - w_1^2 - ... - w_d^2
    product:     sum over factors

All functions are pure; ConeSpec is immutable.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Tuple

import numpy as np
from scipy import linalg

from .errors import ConfigError, DimensionMismatch, NotInCone, NotInDualCone
from .utils import DEFAULT_TOLERANCES, as_vector

KINDS = ('lorentz', 'orthant', 'product')


@dataclass(frozen=True)
class ConeSpec:
    """A catalog cone. Build with lorentz(), orthant(), product() or from_dict()."""

    kind: str
    d: int = 0
    factors: Tuple['ConeSpec', ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"Unknown cone type '{self.kind}'", key="type")
        if self.kind == 'product':
            if not self.factors:
                raise ConfigError("Product cone needs at least one factor", key="factors")
        elif self.d < 1:
            raise ConfigError(f"Cone parameter d must be >= 1, got {self.d}", key="d")

    @property
    def ambient_dim(self) -> int:
        if self.kind == 'lorentz':
            return self.d + 1
        if self.kind == 'orthant':
            return self.d
        return sum(f.ambient_dim for f in self.factors)

    @property
    def degree(self) -> int:
        """Homogeneity degree of the barrier; equals ambient_dim."""
        return self.ambient_dim

    def blocks(self) -> List[Tuple['ConeSpec', slice]]:
        """(factor, coordinate slice) pairs; a non-product cone is its own single block."""
        if self.kind != 'product':
            return [(self, slice(0, self.ambient_dim))]
        out = []
        start = 0
        for factor in self.factors:
            out.append((factor, slice(start, start + factor.ambient_dim)))
            start += factor.ambient_dim
        return out

    @property
    def label(self) -> str:
        if self.kind == 'product':
            return "product(" + ", ".join(f.label for f in self.factors) + ")"
        return f"{self.kind}({self.d})"

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == 'product':
            return {"type": "product", "factors": [f.to_dict() for f in self.factors]}
        return {"type": self.kind, "d": self.d}

    @classmethod
    def from_dict(cls, spec: Dict[str, Any]) -> 'ConeSpec':
        """
        Parse the cone schema.

        Example:
            >>> ConeSpec.from_dict({"type": "lorentz", "d": 2}).ambient_dim
            3
        """
        if not isinstance(spec, dict):
            raise ConfigError("Cone specification must be an object", key="cone")
        kind = spec.get("type")
        if kind not in KINDS:
            raise ConfigError(f"Unknown cone type '{kind}'", key="cone.type")
        allowed = {"type", "factors"} if kind == 'product' else {"type", "d"}
        for key in spec:
            if key not in allowed:
                raise ConfigError(f"Unknown key '{key}' in cone specification", key=f"cone.{key}")
        if kind == 'product':
            factors = spec.get("factors")
            if not isinstance(factors, list) or not factors:
                raise ConfigError("Product cone needs a non-empty 'factors' list", key="cone.factors")
            return product([cls.from_dict(f) for f in factors])
        d = spec.get("d")
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise ConfigError("Cone parameter 'd' must be a positive integer", key="cone.d")
        return cls(kind=kind, d=d)


def lorentz(d: int) -> ConeSpec:
    return ConeSpec(kind='lorentz', d=d)


def orthant(d: int) -> ConeSpec:
    return ConeSpec(kind='orthant', d=d)


def product(factors: List[ConeSpec]) -> ConeSpec:
    return ConeSpec(kind='product', factors=tuple(factors))


def _vec(cone: ConeSpec, values: Any, name: str) -> np.ndarray:
    return as_vector(values, cone.ambient_dim, name)


def _lorentz_split(w: np.ndarray) -> Tuple[float, float]:
    return float(w[0]), float(np.linalg.norm(w[1:]))


def _require_interior(cone: ConeSpec, w: np.ndarray, tol: float) -> None:
    m = margin(cone, w)
    if not m > tol:
        raise NotInCone(f"Point is not in the interior of {cone.label} (margin {m:.3e})")


def lorentz_pairing(v: Any, w: Any) -> float:
    """<v, w>_{1,d} = v_0 w_0 - v_1 w_1 - ... - v_d w_d."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise DimensionMismatch("Lorentz pairing needs vectors of equal length")
    return float(v[0] * w[0] - np.dot(v[1:], w[1:]))


def quadratic_form(cone: ConeSpec, omega: Any) -> float:
    """q(w) = <w, w>_{1,d} for a Lorentz cone, factored to limit cancellation."""
    if cone.kind != 'lorentz':
        raise ConfigError("quadratic_form is defined for lorentz cones only", key="type")
    w = _vec(cone, omega, "omega")
    w0, r = _lorentz_split(w)
    return (w0 - r) * (w0 + r)


def unit_point(cone: ConeSpec) -> np.ndarray:
    """Canonical interior point e of the cone and of its dual; margin(e) = 1."""
    if cone.kind == 'lorentz':
        e = np.zeros(cone.ambient_dim)
        e[0] = 1.0
        return e
    if cone.kind == 'orthant':
        return np.ones(cone.ambient_dim)
    return np.concatenate([unit_point(f) for f in cone.factors])


def margin(cone: ConeSpec, omega: Any) -> float:
    """
    Concave gauge of the cone: positive exactly on the open cone.

    Example:
        >>> margin(lorentz(1), [2.0, 1.0])
        1.0
    """
    w = _vec(cone, omega, "omega")
    if cone.kind == 'lorentz':
        w0, r = _lorentz_split(w)
        return w0 - r
    if cone.kind == 'orthant':
        return float(np.min(w))
    return min(margin(f, w[s]) for f, s in cone.blocks())


def dual_margin(cone: ConeSpec, y: Any) -> float:
    """Gauge of the dual cone; equals margin for the self-dual catalog."""
    y = _vec(cone, y, "y")
    if cone.kind == 'product':
        return min(dual_margin(f, y[s]) for f, s in cone.blocks())
    return margin(cone, y)


def margin_supergradient(cone: ConeSpec, omega: Any) -> np.ndarray:
    """A supergradient of the concave margin at omega."""
    w = _vec(cone, omega, "omega")
    grad = np.zeros_like(w)
    if cone.kind == 'lorentz':
        grad[0] = 1.0
        r = np.linalg.norm(w[1:])
        if r > 0:
            grad[1:] = -w[1:] / r
        return grad
    if cone.kind == 'orthant':
        grad[int(np.argmin(w))] = 1.0
        return grad
    blocks = cone.blocks()
    values = [margin(f, w[s]) for f, s in blocks]
    f, s = blocks[int(np.argmin(values))]
    grad[s] = margin_supergradient(f, w[s])
    return grad


def log_char(cone: ConeSpec, omega: Any, tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """
    Logarithm of the characteristic function, up to an additive constant.

    Raises:
        NotInCone: If margin(omega) <= tol

    Example:
        >>> round(log_char(orthant(2), [1.0, 2.0]), 12) == round(-math.log(2.0), 12)
        True
    """
    w = _vec(cone, omega, "omega")
    _require_interior(cone, w, tol)
    return _log_char(cone, w)


def _log_char(cone: ConeSpec, w: np.ndarray) -> float:
    if cone.kind == 'lorentz':
        w0, r = _lorentz_split(w)
        return -0.5 * (cone.d + 1) * (math.log(w0 - r) + math.log(w0 + r))
    if cone.kind == 'orthant':
        return -float(np.sum(np.log(w)))
    return sum(_log_char(f, w[s]) for f, s in cone.blocks())


def dual_map(cone: ConeSpec, omega: Any, tol: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """
    psi(w) = -grad log_char(w); lands in the open dual cone with g(w, psi(w)) = ambient_dim.

    Example:
        >>> dual_map(lorentz(2), [1.0, 0.0, 0.0]).tolist()
        [3.0, -0.0, -0.0]
    """
    w = _vec(cone, omega, "omega")
    _require_interior(cone, w, tol)
    return _dual_map(cone, w)


def _dual_map(cone: ConeSpec, w: np.ndarray) -> np.ndarray:
    if cone.kind == 'lorentz':
        w0, r = _lorentz_split(w)
        q = (w0 - r) * (w0 + r)
        out = -w * ((cone.d + 1) / q)
        out[0] = -out[0]
        return out
    if cone.kind == 'orthant':
        return 1.0 / w
    out = np.empty_like(w)
    for f, s in cone.blocks():
        out[s] = _dual_map(f, w[s])
    return out


def inverse_dual_map(cone: ConeSpec, y: Any, tol: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """
    psi^{-1} on the open dual cone.

    With the normalisation used here the dual map of every catalog cone is an
    involution, so the inverse is the dual map applied to y.
    """
    y = _vec(cone, y, "y")
    m = dual_margin(cone, y)
    if not m > tol:
        raise NotInDualCone(f"Point is not in the interior of the dual of {cone.label} (margin {m:.3e})")
    return _dual_map(cone, y)


def log_char_hessian(cone: ConeSpec, omega: Any, tol: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """Second derivative of log_char; symmetric positive definite on the cone."""
    w = _vec(cone, omega, "omega")
    _require_interior(cone, w, tol)
    return _hessian(cone, w)


def _hessian(cone: ConeSpec, w: np.ndarray) -> np.ndarray:
    if cone.kind == 'lorentz':
        w0, r = _lorentz_split(w)
        q = (w0 - r) * (w0 + r)
        qw = w.copy()
        qw[1:] = -qw[1:]
        qmat = -np.eye(w.shape[0])
        qmat[0, 0] = 1.0
        return (cone.d + 1) * (2.0 * np.outer(qw, qw) / q ** 2 - qmat / q)
    if cone.kind == 'orthant':
        return np.diag(1.0 / w ** 2)
    return linalg.block_diag(*[_hessian(f, w[s]) for f, s in cone.blocks()])


class BarrierTerms(NamedTuple):
    value: float
    psi: np.ndarray
    hessian: np.ndarray


def barrier_value(cone: ConeSpec, w: np.ndarray) -> float:
    """log_char without the interior check; the caller guarantees margin(w) > 0."""
    return _log_char(cone, w)


def barrier_terms(cone: ConeSpec, w: np.ndarray) -> BarrierTerms:
    """log_char, psi and the Hessian at w, unchecked, for solver inner loops."""
    return BarrierTerms(_log_char(cone, w), _dual_map(cone, w), _hessian(cone, w))


def project_closure(cone: ConeSpec, x: Any) -> np.ndarray:
    """
    Euclidean projection onto the closed cone.

    Example:
        >>> project_closure(lorentz(1), [0.0, 2.0]).tolist()
        [1.0, 1.0]
    """
    x = _vec(cone, x, "x")
    if cone.kind == 'lorentz':
        t = float(x[0])
        v = x[1:]
        nv = float(np.linalg.norm(v))
        if nv <= t:
            return x.copy()
        if nv <= -t:
            return np.zeros_like(x)
        alpha = 0.5 * (t + nv)
        out = np.empty_like(x)
        out[0] = alpha
        out[1:] = (alpha / nv) * v
        return out
    if cone.kind == 'orthant':
        return np.maximum(x, 0.0)
    out = np.empty_like(x)
    for f, s in cone.blocks():
        out[s] = project_closure(f, x[s])
    return out


def lower_bound_constant(cone: ConeSpec, y: Any, tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """
    p = min { g(w, y) : w in the closed cone, |w| = 1 }, so that p|w| <= g(w, y).

    lorentz: unit vectors of the closed cone are (cos s, sin s * u) with
    s in [0, pi/4]; after choosing u = -y_bar/|y_bar| the functional is
    y_0 cos s - |y_bar| sin s, concave on that arc, so the minimum sits on an
    endpoint and equals (y_0 - |y_bar|)/sqrt(2).
    orthant: min_i y_i.  product: min over factors.

    Raises:
        NotInDualCone: If dual_margin(y) <= tol
    """
    y = _vec(cone, y, "y")
    m = dual_margin(cone, y)
    if not m > tol:
        raise NotInDualCone(f"Point is not in the interior of the dual of {cone.label} (margin {m:.3e})")
    return _lower_bound(cone, y)


def _lower_bound(cone: ConeSpec, y: np.ndarray) -> float:
    if cone.kind == 'lorentz':
        y0, r = _lorentz_split(y)
        return min(y0, (y0 - r) / math.sqrt(2.0))
    if cone.kind == 'orthant':
        return float(np.min(y))
    return min(_lower_bound(f, y[s]) for f, s in cone.blocks())


def algebra_residual(cone: ConeSpec, linear: Any) -> float:
    """
    Distance of a matrix from the Lie algebra of the cone's linear automorphisms.

    lorentz: lambda*I + M with M^T Q + Q M = 0; orthant: diagonal;
    product: block diagonal with compatible blocks.
    """
    n = cone.ambient_dim
    a = np.asarray(linear, dtype=float)
    if a.shape != (n, n):
        raise DimensionMismatch(f"Linear part has shape {a.shape}, expected {(n, n)}")
    if cone.kind == 'lorentz':
        qmat = -np.eye(n)
        qmat[0, 0] = 1.0
        sym = a.T @ qmat + qmat @ a
        lam = 0.5 * sym[0, 0]
        return float(np.linalg.norm(sym - 2.0 * lam * qmat))
    if cone.kind == 'orthant':
        return float(np.linalg.norm(a - np.diag(np.diag(a))))
    off_block = a.copy()
    total = 0.0
    for f, s in cone.blocks():
        total += algebra_residual(f, a[s, s]) ** 2
        off_block[s, s] = 0.0
    return math.sqrt(total + float(np.linalg.norm(off_block)) ** 2)
