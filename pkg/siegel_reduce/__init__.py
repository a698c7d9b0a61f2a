"""
siegel_reduce: symplectic reduction of tube domains over symmetric cones

Cone barrier calculus, momentum maps of affine subgroups, projection onto
the zero level set by convex minimization, the quotient Siegel domain of a
translation subgroup, and a numerical tester for the Lie condition.
"""

from .cone import (
    ConeSpec, dual_map, dual_margin, inverse_dual_map, log_char, log_char_hessian,
    lorentz, lower_bound_constant, margin, orthant, product, project_closure, unit_point,
)
from .errors import (
    ConfigError, DimensionMismatch, InvalidWitness, MaxIterations, NonFiniteInput, NotAdmissible,
    NotConeCompatible, NotInCone, NotInDomain, NotInDualCone, NotInZ, NotOnZeroSet, RankAmbiguous,
    SamplingFailure, SiegelReduceError, Undecided,
)
from .liecond import LieConditionReport, kernel_basis, verify_lie_condition, w_space
from .moment import (
    AffineGenerator, GeneratorSet, bracket, exp_affine, momentum, momentum_jacobian, momentum_map,
    translation_subgroup, vector_field,
)
from .reduce import (
    AdmissibilityCertificate, MembershipResult, ReductionResult, SplitCoordinates, Subspace,
    check_admissible, in_zero_cone, orbit_agreement, quotient_membership, reduce_point,
    reduced_coordinates, slice_bound, split_map,
)
from .tube import Tangent, TubePoint, kahler_form, kahler_form_oracle, potential
from .utils import DEFAULT_TOLERANCES, Tolerances, validate_tolerances

__version__ = "0.1.0"
