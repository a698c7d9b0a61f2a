#!/usr/bin/env python3
"""
Affine generators and momentum maps on the tube domain

A generator xi = (A, a) acts on V^C by z -> A z + a; its vector field at
x = v + i*w is (A v + a) + i*(A w), and its momentum function is

    mu^xi(v + i*w) = -g(psi(w), A v + a).

The momentum map of a subgroup with Lie algebra basis xi_1..xi_k is the
vector (mu^xi_1, ..., mu^xi_k); its zero set is M_H.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from scipy import linalg

from . import cone as cones
from .cone import ConeSpec
from .errors import ConfigError, DimensionMismatch, NotConeCompatible
from .tube import Tangent, TubePoint
from .utils import DEFAULT_TOLERANCES, as_matrix, as_vector

logger = logging.getLogger("siegel_reduce.moment")


@dataclass(frozen=True, eq=False)
class AffineGenerator:
    """xi = (linear, translation): an element of the affine Lie algebra gl(V) + V."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        a = as_vector(self.translation, None, "translation")
        n = a.shape[0]
        object.__setattr__(self, 'translation', a)
        object.__setattr__(self, 'linear', as_matrix(self.linear, (n, n), "linear"))

    @property
    def dim(self) -> int:
        return self.translation.shape[0]

    def flatten(self) -> np.ndarray:
        return np.concatenate([self.linear.ravel(), self.translation])

    @classmethod
    def translation_only(cls, a: Any) -> 'AffineGenerator':
        a = as_vector(a, None, "translation")
        return cls(np.zeros((a.shape[0], a.shape[0])), a)

    @classmethod
    def linear_only(cls, linear: Any) -> 'AffineGenerator':
        linear = np.asarray(linear, dtype=float)
        return cls(linear, np.zeros(linear.shape[0]))

    def to_dict(self) -> Dict[str, Any]:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], dim: int, key: str = "generator") -> 'AffineGenerator':
        if not isinstance(data, dict):
            raise ConfigError("Generator must be an object", key=key)
        for name in data:
            if name not in ("linear", "translation"):
                raise ConfigError(f"Unknown key '{name}' in generator", key=f"{key}.{name}")
        linear = data.get("linear", np.zeros((dim, dim)).tolist())
        translation = data.get("translation", [0.0] * dim)
        try:
            return cls(as_matrix(linear, (dim, dim), "linear"), as_vector(translation, dim, "translation"))
        except ValueError as exc:
            raise ConfigError(str(exc), key=key) from exc


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """A basis of a Lie algebra of affine generators (possibly empty)."""

    dim: int
    generators: Tuple[AffineGenerator, ...] = field(default_factory=tuple)
    rank_tol: float = 1e-10

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, 'generators', gens)
        for g in gens:
            if g.dim != self.dim:
                raise DimensionMismatch(f"Generator has dimension {g.dim}, expected {self.dim}")
        if gens:
            stacked = np.array([g.flatten() for g in gens])
            if np.linalg.matrix_rank(stacked, tol=self.rank_tol) < len(gens):
                raise ConfigError("Generators are linearly dependent", key="generators")

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, index: int) -> AffineGenerator:
        return self.generators[index]

    def flat_matrix(self) -> np.ndarray:
        """Generators as columns of a (n^2 + n) x k matrix."""
        if not self.generators:
            return np.zeros((self.dim * self.dim + self.dim, 0))
        return np.array([g.flatten() for g in self.generators]).T

    def to_dict(self) -> Dict[str, Any]:
        return {"generators": [g.to_dict() for g in self.generators]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], dim: int, key: str = "candidate_subalgebra") -> 'GeneratorSet':
        if not isinstance(data, dict):
            raise ConfigError("Generator set must be an object", key=key)
        for name in data:
            if name != "generators":
                raise ConfigError(f"Unknown key '{name}' in generator set", key=f"{key}.{name}")
        items = data.get("generators")
        if not isinstance(items, list):
            raise ConfigError("'generators' must be a list", key=f"{key}.generators")
        gens = [AffineGenerator.from_dict(g, dim, key=f"{key}.generators[{i}]") for i, g in enumerate(items)]
        return cls(dim, tuple(gens))


def translation_subgroup(subspace: Any) -> GeneratorSet:
    """{(0, b_j)} for the basis columns b_j of a subspace (object with .basis, or an n x k array)."""
    basis = np.asarray(getattr(subspace, "basis", subspace), dtype=float)
    n = basis.shape[0]
    return GeneratorSet(n, tuple(AffineGenerator.translation_only(basis[:, j]) for j in range(basis.shape[1])))


def check_cone_compatible(cone: ConeSpec, xi: AffineGenerator,
                          tol: float = DEFAULT_TOLERANCES.compatibility) -> None:
    """
    Raises:
        NotConeCompatible: If the linear part is not in the Lie algebra of the cone
    """
    if xi.dim != cone.ambient_dim:
        raise DimensionMismatch(f"Generator has dimension {xi.dim}, expected {cone.ambient_dim}")
    residual = cones.algebra_residual(cone, xi.linear)
    if residual > tol:
        raise NotConeCompatible(f"Linear part is not in the Lie algebra of {cone.label} (residual {residual:.3e})")


def is_cone_compatible(cone: ConeSpec, xi: AffineGenerator,
                       tol: float = DEFAULT_TOLERANCES.compatibility) -> bool:
    try:
        check_cone_compatible(cone, xi, tol)
    except NotConeCompatible:
        return False
    return True


def bracket(xi: AffineGenerator, eta: AffineGenerator) -> AffineGenerator:
    """[(A, a), (B, b)] = (AB - BA, Ab - Ba)."""
    if xi.dim != eta.dim:
        raise DimensionMismatch("Bracket of generators of different dimension")
    a, b = xi.linear, eta.linear
    return AffineGenerator(a @ b - b @ a, a @ eta.translation - b @ xi.translation)


def _check_dims(xi: AffineGenerator, x: TubePoint) -> None:
    if xi.dim != x.dim:
        raise DimensionMismatch(f"Generator has dimension {xi.dim}, point has {x.dim}")


def vector_field(xi: AffineGenerator, x: TubePoint) -> Tangent:
    """xi_X(x) = d/dt exp(t xi).x at t = 0."""
    _check_dims(xi, x)
    return Tangent(xi.linear @ x.re + xi.translation, xi.linear @ x.im)


def momentum(xi: AffineGenerator, x: TubePoint, tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """
    mu^xi(v + i*w) = -g(psi(w), A v + a).

    Example:
        >>> from .cone import lorentz
        >>> x = TubePoint([0, 0], [2, 1], lorentz(1))
        >>> round(momentum(AffineGenerator.translation_only([0, 1]), x), 12)
        0.666666666667
    """
    _check_dims(xi, x)
    x.require_in_domain(tol)
    psi = cones.dual_map(x.cone, x.im, tol)
    return -float(psi @ (xi.linear @ x.re + xi.translation))


def momentum_map(group: GeneratorSet, x: TubePoint, tol: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """Vector of momenta over the basis of the subgroup's Lie algebra."""
    x.require_in_domain(tol)
    if group.dim != x.dim:
        raise DimensionMismatch(f"Generator set has dimension {group.dim}, point has {x.dim}")
    if not len(group):
        return np.zeros(0)
    psi = cones.dual_map(x.cone, x.im, tol)
    return np.array([-float(psi @ (xi.linear @ x.re + xi.translation)) for xi in group])


def momentum_jacobian(group: GeneratorSet, x: TubePoint, tol: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """
    k x 2n Jacobian of momentum_map in (re, im) coordinates.

    d_v mu^xi = -A^T psi(w),  d_w mu^xi = Hess(w) (A v + a).
    """
    x.require_in_domain(tol)
    if group.dim != x.dim:
        raise DimensionMismatch(f"Generator set has dimension {group.dim}, point has {x.dim}")
    n = x.dim
    jac = np.zeros((len(group), 2 * n))
    if not len(group):
        return jac
    psi = cones.dual_map(x.cone, x.im, tol)
    hess = cones.log_char_hessian(x.cone, x.im, tol)
    for row, xi in enumerate(group):
        jac[row, :n] = -xi.linear.T @ psi
        jac[row, n:] = hess @ (xi.linear @ x.re + xi.translation)
    return jac


def exp_affine(xi: AffineGenerator, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    exp(t xi) = (E, b) from the exponential of the augmented matrix [[A, a], [0, 0]].

    Example:
        >>> E, b = exp_affine(AffineGenerator.translation_only([0.0, 1.0]), 2.0)
        >>> b.tolist()
        [0.0, 2.0]
    """
    n = xi.dim
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = xi.linear
    aug[:n, n] = xi.translation
    full = linalg.expm(float(t) * aug)
    return full[:n, :n], full[:n, n]


def compose(first: Tuple[np.ndarray, np.ndarray], second: Tuple[np.ndarray, np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """Affine map `first` applied after `second`."""
    e1, b1 = first
    e2, b2 = second
    return e1 @ e2, e1 @ b2 + b1


def act(transform: Tuple[np.ndarray, np.ndarray], x: TubePoint) -> TubePoint:
    """(E, b).(v + i*w) = (E v + b) + i*(E w)."""
    e, b = transform
    return TubePoint(e @ x.re + b, e @ x.im, x.cone)


def lorentz_momentum(translation: Any, x: TubePoint, tol: float = DEFAULT_TOLERANCES.interior) -> float:
    """Closed form on the Lorentz tube: -(d+1)/<w,w>_{1,d} * <w, xi>_{1,d}."""
    if x.cone.kind != 'lorentz':
        raise ConfigError("lorentz_momentum needs a lorentz cone", key="type")
    x.require_in_domain(tol)
    xi = as_vector(translation, x.dim, "translation")
    q = cones.quadratic_form(x.cone, x.im)
    return -(x.cone.d + 1) / q * cones.lorentz_pairing(x.im, xi)


def generators_in_span(candidates: Sequence[AffineGenerator], span: GeneratorSet) -> List[float]:
    """Least-squares residual of each candidate against the span of a generator set."""
    basis = span.flat_matrix()
    out = []
    for g in candidates:
        target = g.flatten()
        if basis.shape[1] == 0:
            resid = target
        else:
            coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
            resid = target - basis @ coeffs
        out.append(float(np.linalg.norm(resid)) / max(1.0, float(np.linalg.norm(target))))
    return out
