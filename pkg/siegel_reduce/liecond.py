#!/usr/bin/env python3
"""
Numerical tester for the Lie condition at a point of the zero level set

Given a subgroup H (its generators) and a base point x0 in M_H, computes the
tangent space T = Ker d(mu_H)(x0), its maximal complex subspace W = T cap J T,
and checks a candidate subalgebra s for:

- span:    span{xi_X(x0) : xi in s} equals W (principal angles);
- bracket: s is closed under the affine bracket (least-squares residuals);
- orbit:   short words exp(t1 xi_i1)...exp(tm xi_im).x0 stay in M_H.

Residuals are reported, never promoted to proofs. Connectedness of M_H is
recorded as an assumption.
"""

import math
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy import linalg

from . import cone as cones
from .cone import ConeSpec
from .errors import NotOnZeroSet, RankAmbiguous, SamplingFailure
from .moment import (
    GeneratorSet, act, bracket, check_cone_compatible, compose, exp_affine,
    generators_in_span, momentum_jacobian, momentum_map, vector_field,
)
from .tube import TubePoint, complex_structure_matrix
from .utils import DEFAULT_TOLERANCES, Tolerances, make_rng

logger = logging.getLogger("siegel_reduce.liecond")

MAX_WORD_LENGTH = 3
TIME_RANGE = 2.0
REJECTION_FACTOR = 100
AMBIGUITY_FACTOR = 100.0
ASSUMPTIONS = ("M_H connected",)


@dataclass(frozen=True)
class LieConditionReport:
    dim_kernel: int
    dim_W: int
    dim_span: int
    span_residual: float
    bracket_residual: float
    orbit_residual: float
    locally_saturated: bool
    reasons: Tuple[str, ...] = ()
    assumptions: Tuple[str, ...] = field(default=ASSUMPTIONS)

    @property
    def passed(self) -> bool:
        return not self.reasons

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else f"fail({','.join(self.reasons)})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": "pass" if self.passed else "fail",
            "reasons": list(self.reasons),
            "dim_kernel": self.dim_kernel,
            "dim_W": self.dim_W,
            "dim_span": self.dim_span,
            "span_residual": self.span_residual,
            "bracket_residual": self.bracket_residual,
            "orbit_residual": self.orbit_residual,
            "locally_saturated": self.locally_saturated,
            "assumptions": list(self.assumptions),
        }


def _rank(singular: np.ndarray, cutoff: float, what: str) -> int:
    """Count singular values above `cutoff`; refuse to guess when one sits near it."""
    near = (singular >= cutoff / AMBIGUITY_FACTOR) & (singular <= cutoff * AMBIGUITY_FACTOR)
    if np.any(near):
        raise RankAmbiguous(f"Rank of {what} is ambiguous: singular value {singular[near][0]:.3e} "
                            f"is within a factor {AMBIGUITY_FACTOR:g} of the cutoff {cutoff:.3e}")
    return int(np.sum(singular > cutoff))


def _null_space(matrix: np.ndarray, rel_cutoff: float, what: str, floor: float = 0.0) -> np.ndarray:
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return np.eye(cols)
    _, singular, vt = linalg.svd(matrix, full_matrices=True)
    top = max(float(singular[0]) if singular.size else 0.0, floor)
    if top == 0.0:
        return np.eye(cols)
    rank = _rank(singular, rel_cutoff * top, what)
    return vt[rank:].T


def _range_basis(vectors: np.ndarray, rel_cutoff: float, what: str) -> np.ndarray:
    rows, cols = vectors.shape
    if cols == 0:
        return np.zeros((rows, 0))
    u, singular, _ = linalg.svd(vectors, full_matrices=False)
    top = float(singular[0])
    if top == 0.0:
        return np.zeros((rows, 0))
    rank = _rank(singular, rel_cutoff * top, what)
    return u[:, :rank]


def _require_zero_set(group: GeneratorSet, x: TubePoint, tol: Tolerances) -> float:
    mu = momentum_map(group, x, tol.interior)
    residual = float(np.max(np.abs(mu))) if mu.size else 0.0
    if residual > tol.zero_set:
        raise NotOnZeroSet(f"Base point is off the zero level set (|mu|_inf = {residual:.3e})")
    return residual


def kernel_basis(group: GeneratorSet, x: TubePoint, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Orthonormal basis (2n x (2n - k)) of Ker d(mu_H)(x) = T_x M_H in (re; im) coordinates.

    Raises:
        NotOnZeroSet: If |mu_H(x)|_inf > tol.zero_set
        RankAmbiguous: If a singular value straddles the cutoff
    """
    _require_zero_set(group, x, tol)
    jac = momentum_jacobian(group, x, tol.interior)
    return _null_space(jac, tol.rank_cutoff, "the momentum Jacobian")


def w_space(group: GeneratorSet, x: TubePoint, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Orthonormal basis of W_x = K cap J K, K = kernel_basis.

    u = K a lies in J K iff (I - K K^T) J K a = 0, so W = K . null((I - K K^T) J K).

    Example:
        >>> from .cone import lorentz
        >>> from .moment import AffineGenerator
        >>> H = GeneratorSet(2, (AffineGenerator.translation_only([0.0, 1.0]),))
        >>> w_space(H, TubePoint([0, 0], [1, 0], lorentz(1))).shape
        (4, 2)
    """
    k_basis = kernel_basis(group, x, tol)
    n2 = k_basis.shape[0]
    if k_basis.shape[1] == 0:
        return np.zeros((n2, 0))
    j = complex_structure_matrix(n2 // 2)
    leaving = (np.eye(n2) - k_basis @ k_basis.T) @ j @ k_basis
    coeffs = _null_space(leaving, tol.rank_cutoff, "the J-invariance constraint", floor=1.0)
    return k_basis @ coeffs


def translation_w_space(cone: ConeSpec, basis: np.ndarray, x: TubePoint,
                        tol: float = DEFAULT_TOLERANCES.rank_cutoff) -> np.ndarray:
    """
    Closed-form W_x = T + iT for a translation subgroup with basis columns B,
    T = Ker(B^T Hess(Im x)) the tangent of C_H at Im x.
    """
    n = cone.ambient_dim
    hess = cones.log_char_hessian(cone, x.im)
    tangent = _null_space(basis.T @ hess, tol, "the zero-cone tangent", floor=1.0) if basis.shape[1] else np.eye(n)
    m = tangent.shape[1]
    out = np.zeros((2 * n, 2 * m))
    out[:n, :m] = tangent
    out[n:, m:] = tangent
    return out


def subspace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Largest principal angle between two column spans; pi/2 when the dimensions differ."""
    if a.shape[1] != b.shape[1]:
        return math.pi / 2
    if a.shape[1] == 0:
        return 0.0
    return float(np.max(linalg.subspace_angles(a, b)))


def _sample_word(group: GeneratorSet, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    length = int(rng.integers(1, MAX_WORD_LENGTH + 1))
    transform = (np.eye(group.dim), np.zeros(group.dim))
    for _ in range(length):
        xi = group[int(rng.integers(len(group)))]
        t = float(rng.uniform(-TIME_RANGE, TIME_RANGE))
        transform = compose(exp_affine(xi, t), transform)
    return transform


def orbit_residual(group: GeneratorSet, s: GeneratorSet, x0: TubePoint, samples: int, seed: int = 0,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Max |mu_H|_inf over `samples` random S-orbit points of x0 (rejection keeps them in the domain).

    Raises:
        SamplingFailure: If 100 * samples draws do not yield enough in-domain points
    """
    base = momentum_map(group, x0, tol.interior)
    worst = float(np.max(np.abs(base))) if base.size else 0.0
    if not len(s) or samples <= 0:
        return worst
    rng = make_rng(seed)
    accepted = 0
    for _ in range(REJECTION_FACTOR * samples):
        if accepted == samples:
            break
        point = act(_sample_word(s, rng), x0)
        if not point.in_domain(tol.interior):
            continue
        accepted += 1
        mu = momentum_map(group, point, tol.interior)
        if mu.size:
            worst = max(worst, float(np.max(np.abs(mu))))
    if accepted < samples:
        raise SamplingFailure(f"Only {accepted} of {samples} orbit samples stayed in the domain "
                              f"after {REJECTION_FACTOR * samples} draws")
    return worst


def verify_lie_condition(cone: ConeSpec, group: GeneratorSet, x0: TubePoint, s: GeneratorSet,
                         samples: int = 100, seed: int = 0,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> LieConditionReport:
    """
    Check a candidate subalgebra s against W_{x0}, bracket closure and orbit containment.

    Args:
        cone: Cone of the tube domain
        group: Generators of H
        x0: Base point on the zero level set M_H
        s: Candidate subalgebra; every generator must be cone-compatible
        samples: Number of orbit points
        seed: Seed for the orbit words

    Returns:
        LieConditionReport; `reasons` lists every failing check

    Raises:
        NotOnZeroSet, NotConeCompatible, RankAmbiguous, SamplingFailure
    """
    for xi in s:
        check_cone_compatible(cone, xi, tol.compatibility)
    k_basis = kernel_basis(group, x0, tol)
    w_basis = w_space(group, x0, tol)

    s_vectors = np.array([vector_field(xi, x0).as_vector() for xi in s]).T if len(s) else np.zeros((2 * x0.dim, 0))
    s_basis = _range_basis(s_vectors, tol.rank_cutoff, "the candidate span")
    span_residual = subspace_distance(s_basis, w_basis)

    brackets = [bracket(a, b) for a, b in combinations(s.generators, 2)]
    bracket_residual = max(generators_in_span(brackets, s), default=0.0)

    orbit = orbit_residual(group, s, x0, samples, seed, tol)

    h_vectors = [vector_field(xi, x0).as_vector() for xi in group]
    combined = np.array(h_vectors + [s_vectors[:, j] for j in range(s_vectors.shape[1])]).T \
        if h_vectors or len(s) else np.zeros((2 * x0.dim, 0))
    saturated = _range_basis(combined, tol.rank_cutoff, "h.x0 + s.x0").shape[1] == k_basis.shape[1]

    reasons: List[str] = []
    if span_residual > tol.span:
        reasons.append("span")
    if bracket_residual > tol.bracket:
        reasons.append("bracket")
    if orbit > tol.orbit:
        reasons.append("orbit")

    report = LieConditionReport(
        dim_kernel=k_basis.shape[1],
        dim_W=w_basis.shape[1],
        dim_span=s_basis.shape[1],
        span_residual=span_residual,
        bracket_residual=bracket_residual,
        orbit_residual=orbit,
        locally_saturated=saturated,
        reasons=tuple(reasons),
    )
    logger.info(f"Lie condition {report.verdict}: span {span_residual:.3e}, "
                f"bracket {bracket_residual:.3e}, orbit {orbit:.3e}")
    return report
