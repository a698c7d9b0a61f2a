#!/usr/bin/env python3
"""
Randomized invariant suite

Every check draws its own instance from a per-trial generator seeded with
derive_seed(derive_seed(master, check_index), trial), so results do not
depend on thread scheduling. A check returns (residual, passed).
"""

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from . import cone as cones
from .cone import ConeSpec, lorentz
from .liecond import kernel_basis, subspace_distance, translation_w_space, w_space
from .moment import (
    AffineGenerator, bracket, compose, exp_affine, lorentz_momentum, momentum,
    translation_subgroup, vector_field,
)
from .reduce import (
    ADMISSIBLE, INADMISSIBLE, Subspace, check_admissible, in_zero_cone,
    lorentz_zero_cone, orbit_agreement, quotient_membership, reduce_point,
    roundtrip_error, sample_fiber_shift, slice_bound, slice_bound_at, zero_cone_path,
    zero_cone_point,
)
from .tube import Tangent, TubePoint, complex_mul_i, kahler_form, kahler_form_oracle
from .utils import DEFAULT_TOLERANCES, Tolerances, derive_seed, make_rng, sanitize_error_message

logger = logging.getLogger("siegel_reduce.verify")

DEFAULT_FAMILY = tuple(lorentz(d) for d in range(1, 5))
NEAR_BOUNDARY_MARGIN = 1e-3
SUBSPACE_RESIDUAL = 1e-10
CROSS_CHECK_RESIDUAL = 1e-8
ORBIT_TRIALS_PER_CHECK = 5
SLICE_SAMPLES = 20

CheckFunc = Callable[[ConeSpec, np.random.Generator, Tolerances], Tuple[float, bool]]


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_interior(cone: ConeSpec, rng: np.random.Generator) -> np.ndarray:
    """Interior point with margin in [0.1, 2) per factor."""
    if cone.kind == 'lorentz':
        v = rng.standard_normal(cone.d)
        return np.concatenate([[np.linalg.norm(v) + rng.uniform(0.1, 2.0)], v])
    if cone.kind == 'orthant':
        return rng.uniform(0.1, 3.0, cone.d)
    return np.concatenate([random_interior(f, rng) for f in cone.factors])


def random_boundary(cone: ConeSpec, rng: np.random.Generator) -> np.ndarray:
    """Nonzero point on the boundary of the closed cone."""
    if cone.kind == 'lorentz':
        v = rng.standard_normal(cone.d)
        return np.concatenate([[np.linalg.norm(v)], v])
    if cone.kind == 'orthant':
        w = rng.uniform(0.1, 3.0, cone.d)
        w[int(rng.integers(cone.d))] = 0.0
        return w
    w = random_interior(cone, rng)
    blocks = cone.blocks()
    f, s = blocks[int(rng.integers(len(blocks)))]
    w[s] = random_boundary(f, rng)
    return w


def near_boundary(cone: ConeSpec, omega: np.ndarray, target: float = NEAR_BOUNDARY_MARGIN) -> np.ndarray:
    """Shift omega along the unit point until its margin equals `target`."""
    return omega - (cones.margin(cone, omega) - target) * cones.unit_point(cone)


def random_tangent(n: int, rng: np.random.Generator) -> Tangent:
    return Tangent(rng.standard_normal(n), rng.standard_normal(n))


def random_point(cone: ConeSpec, rng: np.random.Generator) -> TubePoint:
    return TubePoint(rng.standard_normal(cone.ambient_dim), random_interior(cone, rng), cone)


def random_compatible_linear(cone: ConeSpec, rng: np.random.Generator) -> np.ndarray:
    """lorentz: lambda I + Q S with S antisymmetric; orthant: diagonal; product: block diagonal."""
    n = cone.ambient_dim
    if cone.kind == 'lorentz':
        s = rng.standard_normal((n, n))
        s = s - s.T
        qmat = -np.eye(n)
        qmat[0, 0] = 1.0
        return rng.standard_normal() * np.eye(n) + qmat @ s
    if cone.kind == 'orthant':
        return np.diag(rng.standard_normal(n))
    return linalg.block_diag(*[random_compatible_linear(f, rng) for f in cone.factors])


def random_generator(cone: ConeSpec, rng: np.random.Generator, linear: bool = True) -> AffineGenerator:
    n = cone.ambient_dim
    a = random_compatible_linear(cone, rng) if linear else np.zeros((n, n))
    return AffineGenerator(a, rng.standard_normal(n))


def random_subspace(cone: ConeSpec, rng: np.random.Generator) -> Subspace:
    """Random H of dimension 1..n-1 (admissible or not)."""
    n = cone.ambient_dim
    k = int(rng.integers(1, n)) if n > 1 else 0
    return Subspace.from_columns(rng.standard_normal((n, k)), n)


def random_admissible_subspace(cone: ConeSpec, rng: np.random.Generator) -> Tuple[Subspace, np.ndarray]:
    """Random H inside y^perp for an interior y of the (self-dual) cone; returns (H, y)."""
    n = cone.ambient_dim
    y = random_interior(cone, rng)
    k = int(rng.integers(1, n)) if n > 1 else 0
    cols = rng.standard_normal((n, k))
    cols = cols - np.outer(y, y @ cols) / (y @ y)
    return Subspace.from_columns(cols, n), y


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

@dataclass
class InvariantResult:
    name: str
    trials: int
    passed: int = 0
    worst_residual: float = 0.0
    first_failure: Optional[int] = None
    errors: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "first_failure": self.first_failure,
            "errors": self.errors[:3],
        }


class InvariantSuite:
    """Named invariant checks run over seeded random instances of a cone family."""

    def __init__(self, family: Sequence[ConeSpec] = DEFAULT_FAMILY, tol: Tolerances = DEFAULT_TOLERANCES,
                 workers: int = 1):
        if not family:
            raise ValueError("Cone family must not be empty")
        self.family = tuple(family)
        self.tol = tol
        self.workers = max(1, int(workers))
        self.checks: List[Tuple[str, CheckFunc]] = []

    def check(self, description: str, test_func: CheckFunc) -> None:
        """Register a check."""
        self.checks.append((description, test_func))

    def _run_trial(self, func: CheckFunc, seed: int) -> Tuple[float, bool, Optional[str]]:
        rng = make_rng(seed)
        cone = self.family[int(rng.integers(len(self.family)))]
        try:
            residual, passed = func(cone, rng, self.tol)
            return float(residual), bool(passed), None
        except Exception as e:
            return 0.0, False, f"{type(e).__name__}: {sanitize_error_message(str(e))}"

    def run_check(self, index: int, trials: int, seed: int) -> InvariantResult:
        name, func = self.checks[index]
        check_seed = derive_seed(seed, index)
        seeds = [derive_seed(check_seed, t) for t in range(trials)]
        if self.workers > 1 and trials > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                outcomes = list(pool.map(lambda s: self._run_trial(func, s), seeds))
        else:
            outcomes = [self._run_trial(func, s) for s in seeds]

        result = InvariantResult(name, trials)
        for trial, (residual, passed, error) in enumerate(outcomes):
            if math.isfinite(residual):
                result.worst_residual = max(result.worst_residual, residual)
            if passed:
                result.passed += 1
            elif result.first_failure is None:
                result.first_failure = trial
            if error:
                result.errors.append(f"trial {trial}: {error}")
        level = logging.INFO if result.ok else logging.WARNING
        logger.log(level, f"{name}: {result.passed}/{trials} passed, worst residual {result.worst_residual:.3e}")
        return result

    def run(self, trials: int, seed: int) -> List[InvariantResult]:
        return [self.run_check(i, trials, seed) for i in range(len(self.checks))]


# ---------------------------------------------------------------------------
# cone
# ---------------------------------------------------------------------------

def _rel(a: Any, b: Any) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b), initial=0.0)) / max(1.0, float(np.max(np.abs(b), initial=0.0)))


def check_homogeneity(cone, rng, tol):
    w = random_interior(cone, rng)
    lam = math.exp(rng.uniform(-2.0, 2.0))
    expected = cones.log_char(cone, w) - cone.degree * math.log(lam)
    residual = _rel(cones.log_char(cone, lam * w), expected)
    return residual, residual <= tol.identity


def check_dual_identity(cone, rng, tol):
    w = random_interior(cone, rng)
    n = cone.ambient_dim
    residual = abs(float(w @ cones.dual_map(cone, w)) - n) / n
    return residual, residual <= tol.identity


def check_dual_range(cone, rng, tol):
    w = random_interior(cone, rng)
    dm = cones.dual_margin(cone, cones.dual_map(cone, w))
    return -dm, dm > 0.0


def check_dual_scaling(cone, rng, tol):
    w = random_interior(cone, rng)
    lam = math.exp(rng.uniform(-2.0, 2.0))
    residual = _rel(cones.dual_map(cone, lam * w), cones.dual_map(cone, w) / lam)
    return residual, residual <= tol.identity


def check_dual_involution(cone, rng, tol):
    w = random_interior(cone, rng)
    residual = _rel(cones.inverse_dual_map(cone, cones.dual_map(cone, w)), w)
    return residual, residual <= tol.identity


def check_gradient(cone, rng, tol):
    w = random_interior(cone, rng)
    n = cone.ambient_dim
    h = 1e-6 * min(1.0, cones.margin(cone, w))
    fd = np.array([(cones.log_char(cone, w + h * e) - cones.log_char(cone, w - h * e)) / (2.0 * h)
                   for e in np.eye(n)])
    psi = cones.dual_map(cone, w)
    residual = float(np.linalg.norm(fd + psi)) / float(np.linalg.norm(psi))
    return residual, residual <= tol.fd_gradient


def check_hessian(cone, rng, tol):
    w = random_interior(cone, rng)
    n = cone.ambient_dim
    h = 1e-6 * min(1.0, cones.margin(cone, w))
    fd = np.array([(cones.dual_map(cone, w + h * e) - cones.dual_map(cone, w - h * e)) / (2.0 * h)
                   for e in np.eye(n)]).T
    hess = cones.log_char_hessian(cone, w)
    residual = float(np.linalg.norm(fd + hess)) / float(np.linalg.norm(hess))
    positive = float(np.min(np.linalg.eigvalsh(hess))) > 0.0
    return residual, residual <= tol.fd_hessian and positive


def check_boundary_blowup(cone, rng, tol):
    b = random_boundary(cone, rng)
    e = cones.unit_point(cone)
    rise = cones.log_char(cone, b + 1e-8 * e) - cones.log_char(cone, b + 1e-2 * e)
    return -rise, rise > 1.0


def check_projection(cone, rng, tol):
    x = rng.standard_normal(cone.ambient_dim) * 2.0
    p = cones.project_closure(cone, x)
    scale = 1.0 + float(x @ x)
    violations = [
        max(0.0, -cones.margin(cone, p)),
        max(0.0, -cones.dual_margin(cone, p - x)),
        abs(float(p @ (p - x))),
    ]
    residual = max(violations) / scale
    return residual, residual <= tol.identity


# ---------------------------------------------------------------------------
# tube and moment
# ---------------------------------------------------------------------------

def check_kahler_antisymmetry(cone, rng, tol):
    x = random_point(cone, rng)
    u, w = random_tangent(x.dim, rng), random_tangent(x.dim, rng)
    a, b = kahler_form(x, u, w), kahler_form(x, w, u)
    residual = abs(a + b) / max(1.0, abs(a))
    return residual, residual <= tol.identity


def check_kahler_j_invariance(cone, rng, tol):
    x = random_point(cone, rng)
    u, w = random_tangent(x.dim, rng), random_tangent(x.dim, rng)
    a = kahler_form(x, u, w)
    residual = abs(kahler_form(x, complex_mul_i(u), complex_mul_i(w)) - a) / max(1.0, abs(a))
    return residual, residual <= tol.identity


def check_kahler_positivity(cone, rng, tol):
    x = random_point(cone, rng)
    u = random_tangent(x.dim, rng)
    value = kahler_form(x, u, complex_mul_i(u))
    return -value, value > 0.0


def check_kahler_oracle(cone, rng, tol):
    x = random_point(cone, rng)
    u, w = random_tangent(x.dim, rng), random_tangent(x.dim, rng)
    exact = kahler_form(x, u, w)
    residual = abs(kahler_form_oracle(x, u, w) - exact) / (1.0 + abs(exact))
    return residual, residual <= tol.kahler


def check_momentum_property(cone, rng, tol):
    x = random_point(cone, rng)
    xi = random_generator(cone, rng, linear=bool(rng.integers(2)))
    u = random_tangent(x.dim, rng)
    h = 1e-6 * (1.0 + float(np.linalg.norm(x.as_vector())))
    fd = (momentum(xi, x.translate(h * u.re, h * u.im))
          - momentum(xi, x.translate(-h * u.re, -h * u.im))) / (2.0 * h)
    exact = kahler_form(x, vector_field(xi, x), u)
    residual = abs(fd - exact) / (1.0 + abs(exact))
    return residual, residual <= tol.kahler


def check_lorentz_momentum(cone, rng, tol):
    if cone.kind != 'lorentz':
        return 0.0, True
    x = random_point(cone, rng)
    a = rng.standard_normal(x.dim)
    expected = momentum(AffineGenerator.translation_only(a), x)
    residual = abs(lorentz_momentum(a, x) - expected) / max(1.0, abs(expected))
    return residual, residual <= tol.identity


def check_bracket_identities(cone, rng, tol):
    a, b, c = (random_generator(cone, rng) for _ in range(3))
    anti = bracket(a, b).flatten() + bracket(b, a).flatten()
    jacobi = (bracket(a, bracket(b, c)).flatten() + bracket(b, bracket(c, a)).flatten()
              + bracket(c, bracket(a, b)).flatten())
    scale = 1.0 + float(np.linalg.norm(a.flatten()) * np.linalg.norm(b.flatten()) * np.linalg.norm(c.flatten()))
    residual = max(float(np.linalg.norm(anti)), float(np.linalg.norm(jacobi))) / scale
    closed = cones.algebra_residual(cone, bracket(a, b).linear) / scale
    return max(residual, closed), residual <= tol.identity and closed <= tol.compatibility


def check_exp_group_law(cone, rng, tol):
    xi = random_generator(cone, rng)
    s, t = rng.uniform(-1.0, 1.0, 2)
    e1, b1 = exp_affine(xi, s + t)
    e2, b2 = compose(exp_affine(xi, s), exp_affine(xi, t))
    residual = max(_rel(e2, e1), _rel(b2, b1))
    return residual, residual <= tol.identity


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------

def check_admissibility_equivalence(cone, rng, tol):
    subspace = random_subspace(cone, rng)
    cert = check_admissible(cone, subspace, int(rng.integers(1 << 32)), tol)
    if cert.verdict == ADMISSIBLE:
        y = cert.witness
        residual = float(np.max(np.abs(subspace.basis.T @ y), initial=0.0))
        ok = cones.dual_margin(cone, y) > tol.admissibility_band
    elif cert.verdict == INADMISSIBLE:
        h = cert.witness
        residual = float(np.max(np.abs(subspace.complement.T @ h), initial=0.0))
        ok = cones.margin(cone, h) >= -tol.admissibility_band and abs(np.linalg.norm(h) - 1.0) <= tol.identity
    else:
        return 1.0, False
    return residual, ok and residual <= tol.identity


def _reduced_instance(cone, rng, tol):
    subspace, _ = random_admissible_subspace(cone, rng)
    cert = check_admissible(cone, subspace, 0, tol)
    im = random_interior(cone, rng)
    if rng.random() < 0.3:
        im = near_boundary(cone, im)
    x = TubePoint(rng.standard_normal(cone.ambient_dim), im, cone)
    return subspace, cert, x


def check_reduction_convergence(cone, rng, tol):
    subspace, cert, x = _reduced_instance(cone, rng, tol)
    result = reduce_point(cone, subspace, x, cert, tol=tol)
    ok = (result.residual <= tol.reduction_residual
          and in_zero_cone(cone, subspace, result.point.im, tol.zero_set)
          and np.array_equal(result.point.re, x.re))
    return result.residual, ok


def check_slice_uniqueness(cone, rng, tol):
    subspace, cert, x = _reduced_instance(cone, rng, tol)
    first = reduce_point(cone, subspace, x, cert, tol=tol)
    shift = sample_fiber_shift(cone, subspace, x.im, rng, tol.interior)
    second = reduce_point(cone, subspace, x.translate(None, shift), cert, tol=tol)
    residual = float(np.max(np.abs(first.point.im - second.point.im)))
    return residual, residual <= tol.orbit_agreement


def check_orbit_agreement(cone, rng, tol):
    subspace, cert, x = _reduced_instance(cone, rng, tol)
    residual = orbit_agreement(cone, subspace, x, ORBIT_TRIALS_PER_CHECK, int(rng.integers(1 << 32)),
                               certificate=cert, tol=tol)
    return residual, residual <= tol.orbit_agreement


def check_zero_cone(cone, rng, tol):
    subspace, y = random_admissible_subspace(cone, rng)
    omega = zero_cone_point(cone, subspace, y)
    lam = math.exp(rng.uniform(-2.0, 2.0))
    psi = cones.dual_map(cone, lam * omega)
    residual = float(np.max(np.abs(subspace.basis.T @ psi), initial=0.0)) / float(np.linalg.norm(psi))
    ok = in_zero_cone(cone, subspace, omega) and in_zero_cone(cone, subspace, lam * omega)
    if cone.kind == 'lorentz':
        ok = ok and lorentz_zero_cone(cone, subspace, omega, tol.zero_set * max(1.0, float(np.linalg.norm(psi))))
    return residual, ok and residual <= tol.zero_set


def check_zero_cone_path(cone, rng, tol):
    subspace, y0 = random_admissible_subspace(cone, rng)
    step = subspace.complement @ rng.standard_normal(subspace.complement.shape[1])
    for _ in range(60):
        if cones.dual_margin(cone, y0 + step) > tol.interior:
            break
        step = 0.5 * step
    y1 = y0 + step
    path = zero_cone_path(cone, subspace, y0, y1, steps=8)
    worst = max(float(np.max(np.abs(subspace.basis.T @ cones.dual_map(cone, w)), initial=0.0)) for w in path)
    return worst, worst <= tol.zero_set


def check_slice_convexity(cone, rng, tol):
    subspace, _ = random_admissible_subspace(cone, rng)
    w = random_interior(cone, rng)
    h1 = sample_fiber_shift(cone, subspace, w, rng, tol.interior)
    h2 = sample_fiber_shift(cone, subspace, w, rng, tol.interior)
    f1, f2 = cones.log_char(cone, w + h1), cones.log_char(cone, w + h2)
    mid = cones.log_char(cone, w + 0.5 * (h1 + h2))
    excess = mid - 0.5 * (f1 + f2)
    residual = max(0.0, excess) / (1.0 + abs(f1) + abs(f2))
    return residual, residual <= tol.identity


def check_quotient_properness(cone, rng, tol):
    subspace, _ = random_admissible_subspace(cone, rng)
    t = subspace.complement.T @ random_interior(cone, rng)
    inside = quotient_membership(cone, subspace, t, tol=tol)
    outside = quotient_membership(cone, subspace, -t, tol=tol)
    return -inside.margin, inside.require() and not outside.require()


def check_lift_then_project(cone, rng, tol):
    subspace, _ = random_admissible_subspace(cone, rng)
    cert = check_admissible(cone, subspace, 0, tol)
    m = subspace.complement.shape[1]
    s_re = rng.standard_normal(m)
    s_im = subspace.complement.T @ random_interior(cone, rng)
    residual = roundtrip_error(cone, subspace, s_re, s_im, cert, tol=tol)
    return residual, residual <= tol.roundtrip


def check_compactness_bound(cone, rng, tol):
    subspace, y = random_admissible_subspace(cone, rng)
    omega = random_interior(cone, rng)
    radius = float(np.linalg.norm(omega))
    bound = slice_bound(cone, subspace, radius, y, tol)
    sharp = slice_bound_at(cone, subspace, omega, y, tol)
    worst = 0.0
    for _ in range(SLICE_SAMPLES):
        point = omega + sample_fiber_shift(cone, subspace, omega, rng, tol.interior) * rng.uniform(1.0, 4.0)
        if cones.margin(cone, point) < 0.0:
            continue
        worst = max(worst, float(np.linalg.norm(point)) - min(bound, sharp))
    return worst, worst <= tol.slice_bound * (1.0 + bound) and sharp <= bound * (1.0 + tol.identity)


# ---------------------------------------------------------------------------
# liecond
# ---------------------------------------------------------------------------

def _zero_set_instance(cone, rng, tol):
    subspace, cert, x = _reduced_instance(cone, rng, tol)
    x0 = reduce_point(cone, subspace, x, cert, tol=tol).point
    return subspace, translation_subgroup(subspace), x0


def check_dimension_identities(cone, rng, tol):
    subspace, group, x0 = _zero_set_instance(cone, rng, tol)
    n, k = cone.ambient_dim, subspace.k
    kernel = kernel_basis(group, x0, tol)
    w = w_space(group, x0, tol)
    residual = float(abs(kernel.shape[1] - (2 * n - k)) + abs(w.shape[1] - (2 * n - 2 * k)))
    return residual, residual == 0.0


def check_w_space(cone, rng, tol):
    subspace, group, x0 = _zero_set_instance(cone, rng, tol)
    kernel = kernel_basis(group, x0, tol)
    w = w_space(group, x0, tol)
    n2 = w.shape[0]
    j = np.zeros((n2, n2))
    j[:n2 // 2, n2 // 2:] = -np.eye(n2 // 2)
    j[n2 // 2:, :n2 // 2] = np.eye(n2 // 2)
    j_leak = float(np.linalg.norm((np.eye(n2) - w @ w.T) @ j @ w)) if w.shape[1] else 0.0
    containment = float(np.linalg.norm(w - kernel @ (kernel.T @ w))) if w.shape[1] else 0.0
    analytic = subspace_distance(w, translation_w_space(cone, subspace.basis, x0))
    ok = j_leak <= SUBSPACE_RESIDUAL and containment <= SUBSPACE_RESIDUAL and analytic <= CROSS_CHECK_RESIDUAL
    return max(j_leak, containment, analytic), ok


def default_suite(family: Sequence[ConeSpec] = DEFAULT_FAMILY, tol: Tolerances = DEFAULT_TOLERANCES,
                  workers: int = 1) -> InvariantSuite:
    suite = InvariantSuite(family, tol, workers)
    suite.check("cone: log_char homogeneity", check_homogeneity)
    suite.check("cone: dual identity g(w, psi(w)) = n", check_dual_identity)
    suite.check("cone: dual map lands in the dual cone", check_dual_range)
    suite.check("cone: dual map scaling", check_dual_scaling)
    suite.check("cone: dual map involution", check_dual_involution)
    suite.check("cone: gradient matches finite differences", check_gradient)
    suite.check("cone: Hessian matches finite differences", check_hessian)
    suite.check("cone: barrier blows up at the boundary", check_boundary_blowup)
    suite.check("cone: projection optimality", check_projection)
    suite.check("tube: Kahler form antisymmetry", check_kahler_antisymmetry)
    suite.check("tube: Kahler form J-invariance", check_kahler_j_invariance)
    suite.check("tube: Kahler form positivity", check_kahler_positivity)
    suite.check("tube: Kahler oracle agreement", check_kahler_oracle)
    suite.check("moment: defining property d mu = omega(xi, .)", check_momentum_property)
    suite.check("moment: Lorentz closed form", check_lorentz_momentum)
    suite.check("moment: bracket identities", check_bracket_identities)
    suite.check("moment: exponential group law", check_exp_group_law)
    suite.check("reduce: admissibility equivalence", check_admissibility_equivalence)
    suite.check("reduce: reduction convergence", check_reduction_convergence)
    suite.check("reduce: slice uniqueness", check_slice_uniqueness)
    suite.check("reduce: orbit agreement", check_orbit_agreement)
    suite.check("reduce: zero cone is a cone", check_zero_cone)
    suite.check("reduce: zero cone path", check_zero_cone_path)
    suite.check("reduce: slice convexity", check_slice_convexity)
    suite.check("reduce: quotient properness", check_quotient_properness)
    suite.check("reduce: lift then project", check_lift_then_project)
    suite.check("reduce: compactness bound", check_compactness_bound)
    suite.check("liecond: dimension identities", check_dimension_identities)
    suite.check("liecond: W is the J-invariant part of the kernel", check_w_space)
    return suite


def summarize(results: Sequence[InvariantResult], seed: int, trials: int, family: Sequence[ConeSpec],
              tol: Tolerances) -> Dict[str, Any]:
    failing = [r.name for r in results if not r.ok]
    return {
        "passed": not failing,
        "first_failure": failing[0] if failing else None,
        "seed": seed,
        "trials": trials,
        "family": [c.to_dict() for c in family],
        "tolerances": tol.to_dict(),
        "invariants": [r.to_dict() for r in results],
    }
