#!/usr/bin/env python3
"""
Reduction by a subgroup H of the translation group

For a linear subspace H of V (given by an orthonormal basis B, complement C):

- admissibility: H meets the closed cone only at 0, certified either by
  y in H^perp with positive dual margin, or by a unit h in H with margin >= 0;
- zero level set: M_H = V + i*C_H with C_H = psi^{-1}(H^perp cap Omega*);
- reduction: the representative of the H^C-orbit of x in M_H keeps Re x and
  moves Im x to the minimizer of c -> log_char(Im x + B c) (damped Newton);
- quotient: S = H^perp + i(H^perp cap (Omega + H)) in complement coordinates,
  with the split map z -> (C^T z, B^T z).
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from . import cone as cones
from .cone import ConeSpec
from .errors import (
    ConfigError, DimensionMismatch, InvalidWitness, MaxIterations, NotAdmissible,
    NotInDualCone, NotInZ, Undecided,
)
from .tube import TubePoint
from .utils import DEFAULT_TOLERANCES, Tolerances, as_vector, make_rng

logger = logging.getLogger("siegel_reduce.reduce")

NEWTON_MAX_ITERATIONS = 200
ARMIJO_CONSTANT = 1e-4
BACKTRACK_FACTOR = 0.5
MAX_BACKTRACKS = 60
# squared Newton decrement below which the full step is taken on feasibility alone
QUADRATIC_DECREMENT = 0.1
MULTISTART_FACTOR = 8
ASCENT_ITERATIONS = 200
PHASE_ONE_OUTER = 40
PHASE_ONE_NEWTON = 60
PHASE_ONE_GROWTH = 10.0

ADMISSIBLE = 'admissible'
INADMISSIBLE = 'inadmissible'
UNDECIDED = 'undecided'

MEMBER = 'member'
NON_MEMBER = 'non-member'


@dataclass(frozen=True, eq=False)
class Subspace:
    """H as an n x k column-orthonormal basis with its orthogonal complement (n x (n-k))."""

    basis: np.ndarray
    complement: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_columns(cls, columns: Any, dim: int, tol: float = DEFAULT_TOLERANCES.subspace) -> 'Subspace':
        """
        Orthonormalize spanning columns with modified Gram-Schmidt.

        Args:
            columns: n x k array, or a list of k column vectors of length n
            dim: ambient dimension n

        Raises:
            DimensionMismatch: If a column has the wrong length
            ConfigError: If the columns are linearly dependent at tolerance `tol`
        """
        if isinstance(columns, np.ndarray) and columns.ndim == 2:
            cols = [columns[:, j] for j in range(columns.shape[1])]
        else:
            cols = list(columns)
        ortho: List[np.ndarray] = []
        for j, col in enumerate(cols):
            v = as_vector(col, dim, f"basis column {j}")
            scale = max(1.0, float(np.linalg.norm(v)))
            for _ in range(2):
                for u in ortho:
                    v = v - (u @ v) * u
            norm = float(np.linalg.norm(v))
            if norm <= tol * scale:
                raise ConfigError(f"Basis column {j} is linearly dependent on the previous ones", key="subspace.basis")
            ortho.append(v / norm)
        basis = np.array(ortho).T if ortho else np.zeros((dim, 0))
        return cls.from_orthonormal(basis)

    @classmethod
    def from_orthonormal(cls, basis: np.ndarray) -> 'Subspace':
        basis = np.asarray(basis, dtype=float)
        n, k = basis.shape
        if k == 0:
            complement = np.eye(n)
        elif k == n:
            complement = np.zeros((n, 0))
        else:
            complement = linalg.null_space(basis.T)
            # sign convention: largest-magnitude entry of each column is positive
            pivots = complement[np.argmax(np.abs(complement), axis=0), np.arange(complement.shape[1])]
            complement = complement * np.where(pivots < 0, -1.0, 1.0)
        return cls(basis, complement)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], dim: int) -> 'Subspace':
        """Subspace schema: {"basis": [[...column...], ...]}."""
        if not isinstance(data, dict):
            raise ConfigError("Subspace must be an object with a 'basis' list", key="subspace")
        for name in data:
            if name != "basis":
                raise ConfigError(f"Unknown key '{name}' in subspace", key=f"subspace.{name}")
        cols = data.get("basis")
        if not isinstance(cols, list):
            raise ConfigError("'basis' must be a list of columns", key="subspace.basis")
        try:
            return cls.from_columns(cols, dim)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc), key="subspace.basis") from exc

    def to_dict(self) -> Dict[str, Any]:
        return {"basis": self.basis.T.tolist()}


@dataclass(frozen=True, eq=False)
class AdmissibilityCertificate:
    """Which side of the duality H^perp cap Omega* != {} <=> H cap closure(Omega) = {0} holds."""

    verdict: str
    witness: Optional[np.ndarray]
    value: float
    method: str

    @property
    def admissible(self) -> bool:
        return self.verdict == ADMISSIBLE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.tolist(),
            "value": self.value,
            "method": self.method,
        }


@dataclass(frozen=True, eq=False)
class ReductionResult:
    point: TubePoint
    shift: np.ndarray
    residual: float
    iterations: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "point": self.point.to_dict(),
            "shift": self.shift.tolist(),
            "residual": self.residual,
            "iterations": self.iterations,
        }


@dataclass(frozen=True, eq=False)
class MembershipResult:
    """Outcome of the quotient-cone membership test; `witness` is h in R^k."""

    status: str
    witness: np.ndarray
    margin: float

    @property
    def member(self) -> bool:
        return self.status == MEMBER

    def require(self) -> bool:
        """Return the boolean verdict, raising Undecided inside the boundary band."""
        if self.status == UNDECIDED:
            raise Undecided(f"Membership margin {self.margin:.3e} lies in the boundary band")
        return self.member

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, "witness": self.witness.tolist(), "margin": self.margin}


@dataclass(frozen=True, eq=False)
class SplitCoordinates:
    """tau(z): quotient coordinates (C^T Re z, C^T Im z) and fiber coordinates (B^T Re z, B^T Im z)."""

    quotient_re: np.ndarray
    quotient_im: np.ndarray
    fiber_re: np.ndarray
    fiber_im: np.ndarray

    @property
    def quotient(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.quotient_re, self.quotient_im

    def reconstruct(self, cone: ConeSpec, subspace: Subspace) -> TubePoint:
        c, b = subspace.complement, subspace.basis
        return TubePoint(c @ self.quotient_re + b @ self.fiber_re,
                         c @ self.quotient_im + b @ self.fiber_im, cone)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quotient": {"re": self.quotient_re.tolist(), "im": self.quotient_im.tolist()},
            "fiber": {"re": self.fiber_re.tolist(), "im": self.fiber_im.tolist()},
        }


def _check_dims(cone: ConeSpec, subspace: Subspace) -> None:
    if subspace.n != cone.ambient_dim:
        raise DimensionMismatch(f"Subspace lives in dimension {subspace.n}, cone in {cone.ambient_dim}")


# ---------------------------------------------------------------------------
# Certified maximization of the margin over an affine family
# ---------------------------------------------------------------------------

@dataclass
class _PhaseOneResult:
    status: str
    point: np.ndarray
    value: float
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _phase_one(cone: ConeSpec, offset: np.ndarray, directions: np.ndarray, band: float,
               coeffs: Optional[np.ndarray] = None) -> _PhaseOneResult:
    """
    Decide the sign of max_c margin(offset + D c) by log-barrier path following.

    Solves max s subject to offset + D c - s e in closure(Omega), with
    e = unit_point (margin(w - s e) = margin(w) - s). log_char is the barrier
    (parameter nu = degree), so after centering at barrier weight tau the
    optimum exceeds the current s by at most nu / tau. Returns 'positive'
    once the actual margin exceeds `band`, 'negative' once the upper bound
    drops below -band, and 'band' when the gap closes inside the band.
    """
    n, m = directions.shape
    c = np.zeros(m) if coeffs is None else np.array(coeffs, dtype=float)
    e = cones.unit_point(cone)
    point = offset + directions @ c
    actual = cones.margin(cone, point)

    def outcome(status: str) -> _PhaseOneResult:
        p = offset + directions @ c
        return _PhaseOneResult(status, p, cones.margin(cone, p), c.copy())

    if actual > band:
        return outcome('positive')
    if m == 0:
        return outcome('negative' if actual < -band else 'band')

    nu = float(cone.degree)
    s = actual - 1.0
    tau = 1.0
    lifted = np.hstack([directions, -e[:, None]])

    def penalized(cc: np.ndarray, ss: float, weight: float) -> Optional[float]:
        w = offset + directions @ cc - ss * e
        if not cones.margin(cone, w) > 0.0:
            return None
        return -weight * ss + cones.barrier_value(cone, w)

    for outer in range(PHASE_ONE_OUTER):
        for _ in range(PHASE_ONE_NEWTON):
            w = offset + directions @ c - s * e
            _, psi, hess_w = cones.barrier_terms(cone, w)
            grad = -lifted.T @ psi
            grad[-1] -= tau
            hess = lifted.T @ hess_w @ lifted
            try:
                step = linalg.solve(hess, -grad, assume_a='pos')
            except (linalg.LinAlgError, ValueError):
                step = linalg.lstsq(hess, -grad)[0]
            decrement = float(-grad @ step)
            if decrement <= 1e-12:
                break
            current = penalized(c, s, tau)
            quadratic = decrement <= QUADRATIC_DECREMENT
            t = 1.0
            accepted = False
            for _ in range(MAX_BACKTRACKS):
                trial = penalized(c + t * step[:-1], s + t * step[-1], tau)
                if trial is not None and (quadratic or trial <= current - ARMIJO_CONSTANT * t * decrement
                                          + 1e-14 * (1.0 + abs(current))):
                    accepted = True
                    break
                t *= BACKTRACK_FACTOR
            if not accepted:
                break
            c = c + t * step[:-1]
            s = s + t * step[-1]
            if cones.margin(cone, offset + directions @ c) > band:
                return outcome('positive')
        gap = 2.0 * nu / tau
        logger.debug(f"phase-one outer {outer}: s={s:.3e} gap={gap:.3e}")
        if s + gap < -band:
            return outcome('negative')
        if gap < band:
            return outcome('band')
        tau *= PHASE_ONE_GROWTH
    return outcome('band')


def _ascend_sphere(fun: Callable[[np.ndarray], float], supergrad: Callable[[np.ndarray], np.ndarray],
                   basis: np.ndarray, start: np.ndarray, target: float,
                   iterations: int = ASCENT_ITERATIONS) -> Tuple[np.ndarray, float]:
    """Projected supergradient ascent of fun(basis z) over unit z, diminishing steps; keeps the best iterate."""
    z = start / np.linalg.norm(start)
    best_z, best = z, fun(basis @ z)
    for it in range(iterations):
        if best > target:
            break
        g = basis.T @ supergrad(basis @ z)
        g = g - (g @ z) * z
        gn = float(np.linalg.norm(g))
        if gn < 1e-15:
            break
        z = z + (0.5 / math.sqrt(it + 1.0)) * g / gn
        z = z / np.linalg.norm(z)
        val = fun(basis @ z)
        if val > best:
            best, best_z = val, z
    return best_z, best


def _sphere_starts(basis: np.ndarray, first: Optional[np.ndarray], rng: np.random.Generator) -> List[np.ndarray]:
    m = basis.shape[1]
    starts: List[np.ndarray] = []
    if first is not None and np.linalg.norm(first) > 1e-14:
        starts.append(first)
    for i in range(m):
        unit = np.zeros(m)
        unit[i] = 1.0
        starts.extend([unit, -unit])
    while len(starts) < MULTISTART_FACTOR * m:
        starts.append(rng.standard_normal(m))
    return starts


def _slice_of(cone: ConeSpec, basis: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Affine slice {basis z : g(e, basis z) = 1} as (offset, directions); None when basis is orthogonal to e."""
    a = basis.T @ cones.unit_point(cone)
    norm_sq = float(a @ a)
    if norm_sq < 1e-28:
        return None
    z0 = a / norm_sq
    if basis.shape[1] == 1:
        null = np.zeros((1, 0))
    else:
        null = linalg.null_space(a[None, :])
    return basis @ z0, basis @ null


def _search_positive(cone: ConeSpec, basis: np.ndarray, fun: Callable[[np.ndarray], float],
                     target: float, rng: np.random.Generator, label: str) -> Tuple[str, np.ndarray, float]:
    """
    Maximize a cone gauge over the unit sphere of span(basis).

    Order: projected interior start, then the phase-one certifier on the slice
    g(e, .) = 1, then the remaining seeded multi-starts if phase-one ended in
    the band. Returns (status, best unit vector, best value) with status in
    {'positive', 'negative', 'band'} relative to `target`.
    """
    supergrad = lambda v: cones.margin_supergradient(cone, v)
    first = basis.T @ cones.unit_point(cone)
    starts = _sphere_starts(basis, first, rng)

    best_z, best = _ascend_sphere(fun, supergrad, basis, starts[0], target)
    logger.debug(f"{label}: first start reached {best:.3e}")
    if best > target:
        return 'positive', basis @ best_z, best

    sliced = _slice_of(cone, basis)
    if sliced is None:
        # every vector of the span is g-orthogonal to e, so none lies in the open cone
        status = 'negative'
    else:
        offset, directions = sliced
        result = _phase_one(cone, offset, directions, band=target)
        vec = result.point / np.linalg.norm(result.point)
        val = fun(vec)
        logger.debug(f"{label}: phase-one {result.status}, normalized value {val:.3e}")
        if val > best:
            best, best_z = val, basis.T @ vec
        if result.status == 'positive' and best > target:
            return 'positive', basis @ best_z, best
        status = 'negative' if result.status == 'negative' else 'band'

    if status == 'band':
        for start in starts[1:]:
            z, val = _ascend_sphere(fun, supergrad, basis, start, target)
            if val > best:
                best, best_z = val, z
            if best > target:
                return 'positive', basis @ best_z, best
    return status, basis @ best_z, best


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def check_admissible(cone: ConeSpec, subspace: Subspace, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> AdmissibilityCertificate:
    """
    Certify H cap closure(Omega) = {0} (admissible) or exhibit a unit h in H
    with margin(h) >= -band (inadmissible). Undecided is returned, never hidden.

    Example:
        >>> from .cone import lorentz
        >>> H = Subspace.from_columns([[0.0, 1.0]], 2)
        >>> check_admissible(lorentz(1), H).verdict
        'admissible'
    """
    _check_dims(cone, subspace)
    band = tol.admissibility_band
    n, k = subspace.n, subspace.k
    e = cones.unit_point(cone)
    e_unit = e / np.linalg.norm(e)
    rng = make_rng(seed)

    if k == 0:
        return AdmissibilityCertificate(ADMISSIBLE, e_unit, cones.dual_margin(cone, e_unit), 'trivial')
    if k == n:
        return AdmissibilityCertificate(INADMISSIBLE, e_unit, cones.margin(cone, e_unit), 'trivial')

    dual_fun = lambda y: cones.dual_margin(cone, y)
    status, y, value = _search_positive(cone, subspace.complement, dual_fun, band, rng, "dual search")
    if status == 'positive':
        logger.info(f"Admissible: dual witness margin {value:.3e}")
        return AdmissibilityCertificate(ADMISSIBLE, y, value, 'dual-search')

    primal_fun = lambda h: cones.margin(cone, h)
    _, h, h_value = _search_positive(cone, subspace.basis, primal_fun, band, rng, "primal search")
    if h_value >= -band:
        logger.info(f"Inadmissible: primal witness margin {h_value:.3e}")
        return AdmissibilityCertificate(INADMISSIBLE, h, h_value, 'primal-search')

    logger.info(f"Undecided: dual best {value:.3e}, primal best {h_value:.3e}")
    return AdmissibilityCertificate(UNDECIDED, None, max(value, h_value), 'exhausted')


def in_zero_cone(cone: ConeSpec, subspace: Subspace, omega: Any,
                 tol: float = DEFAULT_TOLERANCES.zero_set,
                 interior: float = DEFAULT_TOLERANCES.interior) -> bool:
    """omega in C_H, i.e. psi(omega) is g-orthogonal to H (then v + i*omega is in M_H for every v)."""
    _check_dims(cone, subspace)
    psi = cones.dual_map(cone, omega, interior)
    if subspace.k == 0:
        return True
    return float(np.max(np.abs(subspace.basis.T @ psi))) <= tol


def lorentz_zero_cone(cone: ConeSpec, subspace: Subspace, omega: Any,
                      tol: float = DEFAULT_TOLERANCES.zero_set,
                      interior: float = DEFAULT_TOLERANCES.interior) -> bool:
    """Lorentz-tube description C_H = H^{perp_{1,d}} cap Omega (pairing scaled by (d+1)/q)."""
    if cone.kind != 'lorentz':
        raise ConfigError("lorentz_zero_cone needs a lorentz cone", key="type")
    _check_dims(cone, subspace)
    w = as_vector(omega, cone.ambient_dim, "omega")
    if not cones.margin(cone, w) > interior:
        return False
    q = cones.quadratic_form(cone, w)
    scale = (cone.d + 1) / q
    return all(abs(scale * cones.lorentz_pairing(w, subspace.basis[:, j])) <= tol for j in range(subspace.k))


def zero_cone_point(cone: ConeSpec, subspace: Subspace, y: Any,
                    tol: float = DEFAULT_TOLERANCES.identity) -> np.ndarray:
    """psi^{-1}(y) for y in H^perp cap Omega*: a point of C_H."""
    _check_dims(cone, subspace)
    y = as_vector(y, cone.ambient_dim, "y")
    if subspace.k and float(np.max(np.abs(subspace.basis.T @ y))) > tol * max(1.0, float(np.linalg.norm(y))):
        raise InvalidWitness("y is not orthogonal to H")
    return cones.inverse_dual_map(cone, y)


def zero_cone_path(cone: ConeSpec, subspace: Subspace, y0: Any, y1: Any, steps: int = 16) -> List[np.ndarray]:
    """psi^{-1} of the segment [y0, y1] in H^perp cap Omega*; a path inside C_H."""
    y0 = as_vector(y0, cone.ambient_dim, "y0")
    y1 = as_vector(y1, cone.ambient_dim, "y1")
    return [zero_cone_point(cone, subspace, (1.0 - t) * y0 + t * y1) for t in np.linspace(0.0, 1.0, steps + 1)]


def _require_admissible(cone: ConeSpec, subspace: Subspace, certificate: Optional[AdmissibilityCertificate],
                        seed: int, tol: Tolerances) -> AdmissibilityCertificate:
    if certificate is None:
        certificate = check_admissible(cone, subspace, seed, tol)
    if not certificate.admissible:
        raise NotAdmissible(f"Subspace is {certificate.verdict} for {cone.label}")
    return certificate


def reduce_point(cone: ConeSpec, subspace: Subspace, x: TubePoint,
                 certificate: Optional[AdmissibilityCertificate] = None, seed: int = 0,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> ReductionResult:
    """
    Zero-momentum representative of the H^C-orbit of x.

    Minimizes F(c) = log_char(Im x + B c) by damped Newton with backtracking
    (steps leaving the cone are rejected, Armijo decrease enforced) until
    |grad F|_inf = |B^T psi|_inf <= tol.newton_gradient. Re x is unchanged.

    Raises:
        NotAdmissible: If H is not certified admissible
        NotInDomain: If x is not in the tube domain
        MaxIterations: If the Newton budget is exhausted
    """
    _check_dims(cone, subspace)
    if x.cone != cone:
        raise DimensionMismatch("Point belongs to a different cone")
    _require_admissible(cone, subspace, certificate, seed, tol)
    x.require_in_domain(tol.interior)

    basis = subspace.basis
    k = subspace.k
    c = np.zeros(k)
    w = x.im.copy()
    iterations = 0

    for iterations in range(NEWTON_MAX_ITERATIONS + 1):
        value, psi, hess_w = cones.barrier_terms(cone, w)
        grad = -basis.T @ psi
        gnorm = float(np.max(np.abs(grad))) if k else 0.0
        if gnorm <= tol.newton_gradient:
            break
        if iterations == NEWTON_MAX_ITERATIONS:
            raise MaxIterations(f"Newton reduction did not converge in {NEWTON_MAX_ITERATIONS} iterations "
                                f"(gradient {gnorm:.3e})")
        hess = basis.T @ hess_w @ basis
        step = linalg.solve(hess, -grad, assume_a='pos')
        slope = float(grad @ step)
        # inside the quadratic region log_char differences drown in rounding near the boundary
        quadratic = -slope <= QUADRATIC_DECREMENT
        slack = 16.0 * np.finfo(float).eps * (1.0 + abs(value))
        t = 1.0
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            trial_c = c + t * step
            trial_w = x.im + basis @ trial_c
            if cones.margin(cone, trial_w) > tol.interior:
                if quadratic or cones.barrier_value(cone, trial_w) <= value + ARMIJO_CONSTANT * t * slope + slack:
                    accepted = True
                    break
            t *= BACKTRACK_FACTOR
        if not accepted:
            logger.debug(f"Line search stalled at iteration {iterations}, gradient {gnorm:.3e}")
            break
        c = trial_c
        w = trial_w
        logger.debug(f"Newton iteration {iterations}: step {t:.3g}, gradient {gnorm:.3e}")

    residual = float(np.max(np.abs(basis.T @ cones.barrier_terms(cone, w).psi))) if k else 0.0
    if residual > tol.reduction_residual:
        raise MaxIterations(f"Newton reduction stalled with residual {residual:.3e}")
    point = TubePoint(x.re.copy(), w, cone)
    logger.debug(f"Reduced in {iterations} iterations, residual {residual:.3e}")
    return ReductionResult(point, basis @ c, residual, iterations)


def sample_fiber_shift(cone: ConeSpec, subspace: Subspace, im: np.ndarray, rng: np.random.Generator,
                       interior: float = DEFAULT_TOLERANCES.interior) -> np.ndarray:
    """Random h2 in H with im + h2 in the cone (halving a Gaussian draw until it fits)."""
    scale = float(np.linalg.norm(im))
    h = subspace.basis @ (scale * rng.standard_normal(subspace.k))
    for _ in range(MAX_BACKTRACKS):
        if cones.margin(cone, im + h) > interior:
            return h
        h = 0.5 * h
    return np.zeros_like(im)


def orbit_agreement(cone: ConeSpec, subspace: Subspace, x: TubePoint, trials: int, seed: int = 0,
                    real_only: bool = False, certificate: Optional[AdmissibilityCertificate] = None,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Largest |Im m_j - Im m_0|_inf over reductions of random H^C-translates of x.

    Trial 0 is x itself, so trials = 1 gives 0.
    """
    certificate = _require_admissible(cone, subspace, certificate, seed, tol)
    if trials <= 0:
        return 0.0
    rng = make_rng(seed)
    base = reduce_point(cone, subspace, x, certificate, seed, tol)
    worst = 0.0
    for _ in range(1, trials):
        h1 = subspace.basis @ ((1.0 + float(np.linalg.norm(x.re))) * rng.standard_normal(subspace.k))
        h2 = np.zeros(cone.ambient_dim) if real_only else sample_fiber_shift(cone, subspace, x.im, rng, tol.interior)
        translated = x.translate(h1, h2)
        result = reduce_point(cone, subspace, translated, certificate, seed, tol)
        worst = max(worst, float(np.max(np.abs(result.point.im - base.point.im))))
    logger.info(f"Orbit agreement over {trials} trials: {worst:.3e}")
    return worst


def quotient_membership(cone: ConeSpec, subspace: Subspace, t: Any, seed: int = 0,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> MembershipResult:
    """
    Decide t in H^perp cap (Omega + H), t given in complement coordinates.

    Maximizes the concave h -> margin(C t + B h): supergradient ascent with
    backtracking from h = 0 and from the H-component of project_closure(C t),
    then the phase-one certifier from the best point if the ascent did not
    clear the band. Member iff the achieved margin exceeds the band.
    """
    _check_dims(cone, subspace)
    t = as_vector(t, subspace.n - subspace.k, "t")
    band = tol.membership_band
    basis = subspace.basis
    k = subspace.k
    offset = subspace.complement @ t

    def value_of(h: np.ndarray) -> float:
        return cones.margin(cone, offset + basis @ h)

    if not np.any(t):
        # the apex: Omega + H is a proper cone modulo H
        return MembershipResult(NON_MEMBER, np.zeros(k), value_of(np.zeros(k)))

    starts = [np.zeros(k), basis.T @ cones.project_closure(cone, offset)]
    best_h, best = starts[0], value_of(starts[0])
    scale = 1.0 + float(np.linalg.norm(offset))
    for start in starts:
        h, val = start, value_of(start)
        step = scale
        for _ in range(ASCENT_ITERATIONS):
            if val > band or step < 1e-12 * scale:
                break
            g = basis.T @ cones.margin_supergradient(cone, offset + basis @ h)
            gn = float(np.linalg.norm(g))
            if gn < 1e-15:
                break
            trial = h + step * g / gn
            trial_val = value_of(trial)
            if trial_val > val:
                h, val = trial, trial_val
            else:
                step *= BACKTRACK_FACTOR
        if val > best:
            best_h, best = h, val
        if best > band:
            break

    if best <= band and k:
        result = _phase_one(cone, offset, basis, band, coeffs=best_h)
        if result.value > best:
            best_h, best = result.coeffs, result.value
        if best <= band and result.status == 'negative':
            return MembershipResult(NON_MEMBER, best_h, best)

    if best > band:
        status = MEMBER
    elif best < -band:
        status = NON_MEMBER
    else:
        status = UNDECIDED
    return MembershipResult(status, best_h, best)


def split_map(cone: ConeSpec, subspace: Subspace, z: TubePoint, check: bool = True, seed: int = 0,
              tol: Tolerances = DEFAULT_TOLERANCES) -> SplitCoordinates:
    """
    tau(z) = (C^T Re z, C^T Im z; B^T Re z, B^T Im z) for z in Z = V + i(Omega + H).

    Raises:
        NotInZ: If `check` is set and Im z is not certified in Omega + H
    """
    _check_dims(cone, subspace)
    c, b = subspace.complement, subspace.basis
    quotient_im = c.T @ z.im
    if check:
        membership = quotient_membership(cone, subspace, quotient_im, seed, tol)
        if not membership.member:
            raise NotInZ(f"Imaginary part is not in Omega + H ({membership.status}, margin {membership.margin:.3e})")
    return SplitCoordinates(c.T @ z.re, quotient_im, b.T @ z.re, b.T @ z.im)


def reduced_coordinates(cone: ConeSpec, subspace: Subspace, x: TubePoint,
                        certificate: Optional[AdmissibilityCertificate] = None, seed: int = 0,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> Tuple[np.ndarray, np.ndarray]:
    """Quotient coordinates of the reduced representative of x: the map M_H/H -> Z/H^C."""
    result = reduce_point(cone, subspace, x, certificate, seed, tol)
    return split_map(cone, subspace, result.point, check=False).quotient


def lift_quotient_point(cone: ConeSpec, subspace: Subspace, s_re: Any, s_im: Any, seed: int = 0,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> TubePoint:
    """
    A point of Z over the quotient point s_re + i s_im, built from the membership witness.

    Raises:
        NotInZ: If s_im is not a certified member of the quotient cone
    """
    m = subspace.n - subspace.k
    s_re = as_vector(s_re, m, "s_re")
    s_im = as_vector(s_im, m, "s_im")
    membership = quotient_membership(cone, subspace, s_im, seed, tol)
    if not membership.member:
        raise NotInZ(f"Quotient point is not in S ({membership.status}, margin {membership.margin:.3e})")
    c, b = subspace.complement, subspace.basis
    return TubePoint(c @ s_re, c @ s_im + b @ membership.witness, cone)


def roundtrip_error(cone: ConeSpec, subspace: Subspace, s_re: Any, s_im: Any,
                    certificate: Optional[AdmissibilityCertificate] = None, seed: int = 0,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Lift s to Z, reduce, project back; sup-norm distance to s."""
    lifted = lift_quotient_point(cone, subspace, s_re, s_im, seed, tol)
    q_re, q_im = reduced_coordinates(cone, subspace, lifted, certificate, seed, tol)
    return max(float(np.max(np.abs(q_re - s_re), initial=0.0)), float(np.max(np.abs(q_im - s_im), initial=0.0)))


def _check_witness(cone: ConeSpec, subspace: Subspace, y: Any, tol: Tolerances) -> Tuple[np.ndarray, float]:
    y = as_vector(y, cone.ambient_dim, "y")
    if subspace.k and float(np.max(np.abs(subspace.basis.T @ y))) > tol.slice_bound * max(1.0, float(np.linalg.norm(y))):
        raise InvalidWitness("Witness is not orthogonal to H")
    try:
        p = cones.lower_bound_constant(cone, y, tol.interior)
    except NotInDualCone as exc:
        raise InvalidWitness(f"Witness is not in the dual cone: {exc}") from exc
    return y, p


def slice_bound(cone: ConeSpec, subspace: Subspace, k_radius: float, y: Any,
                tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """
    Norm bound (K_radius / p) |y| for every point of (K + H) cap closure(Omega), |K| <= K_radius.

    Example:
        >>> from .cone import lorentz
        >>> H = Subspace.from_columns([[0.0, 1.0]], 2)
        >>> round(slice_bound(lorentz(1), H, math.sqrt(5.0), [1.0, 0.0]) ** 2, 9)
        10.0
    """
    if not math.isfinite(k_radius) or k_radius < 0:
        raise InvalidWitness("K radius must be a non-negative finite number")
    y, p = _check_witness(cone, subspace, y, tol)
    return k_radius / p * float(np.linalg.norm(y))


def slice_bound_at(cone: ConeSpec, subspace: Subspace, omega: Any, y: Any,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Sharp bound g(omega, y) / p for the single slice (omega + H) cap closure(Omega)."""
    y, p = _check_witness(cone, subspace, y, tol)
    omega = as_vector(omega, cone.ambient_dim, "omega")
    return float(omega @ y) / p
