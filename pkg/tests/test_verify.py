import numpy as np
import pytest

from siegel_reduce import cone as cones
from siegel_reduce.cone import lorentz
from siegel_reduce.reduce import check_admissible
from siegel_reduce.utils import DEFAULT_TOLERANCES, dumps_report, validate_tolerances
from siegel_reduce.verify import (
    DEFAULT_FAMILY, InvariantSuite, default_suite, near_boundary, random_admissible_subspace,
    random_boundary, random_compatible_linear, random_interior, summarize,
)

from .conftest import CONE_FAMILIES


def _run(trials, seed, tol=DEFAULT_TOLERANCES, workers=1, family=DEFAULT_FAMILY):
    suite = default_suite(family, tol, workers)
    return summarize(suite.run(trials, seed), seed, trials, family, tol)


class TestSampling:
    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_instances_have_the_promised_shape(self, cone, rng):
        for _ in range(20):
            assert cones.margin(cone, random_interior(cone, rng)) >= 0.1 - 1e-12
            b = random_boundary(cone, rng)
            assert abs(cones.margin(cone, b)) <= 1e-12 * (1 + np.linalg.norm(b))
            near = near_boundary(cone, random_interior(cone, rng))
            assert cones.margin(cone, near) == pytest.approx(1e-3, abs=1e-12)
            assert cones.algebra_residual(cone, random_compatible_linear(cone, rng)) <= 1e-10

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_admissible_subspaces_are_orthogonal_to_the_witness(self, cone, rng):
        subspace, y = random_admissible_subspace(cone, rng)
        assert 1 <= subspace.k < cone.ambient_dim
        np.testing.assert_allclose(subspace.basis.T @ y, 0.0, atol=1e-12)
        assert check_admissible(cone, subspace).admissible


class TestInvariantSuite:
    def test_default_suite_passes(self):
        report = _run(trials=3, seed=0)
        assert report["passed"], [r for r in report["invariants"] if r["passed"] != r["trials"]]
        assert report["first_failure"] is None
        assert len(report["invariants"]) == 29

    @pytest.mark.parametrize("seed", [0, 4])
    def test_default_trial_count_passes(self, seed):
        report = _run(trials=100, seed=seed)
        assert report["passed"], report["first_failure"]

    def test_mixed_family(self):
        family = (lorentz(2), cones.orthant(3), cones.product([lorentz(1), cones.orthant(2)]))
        assert _run(trials=3, seed=42, family=family)["passed"]

    def test_deterministic_for_a_seed(self):
        assert dumps_report(_run(trials=2, seed=17)) == dumps_report(_run(trials=2, seed=17))

    def test_worker_count_does_not_change_results(self):
        assert dumps_report(_run(trials=4, seed=3, workers=3)) == dumps_report(_run(trials=4, seed=3))

    def test_no_trials_is_vacuous(self):
        report = _run(trials=0, seed=0)
        assert report["passed"]
        assert all(r["trials"] == 0 and r["passed"] == 0 for r in report["invariants"])

    def test_impossible_tolerance_fails(self):
        report = _run(trials=10, seed=0, tol=validate_tolerances({"identity": 1e-20}))
        assert not report["passed"]
        assert report["first_failure"].startswith("cone:")

    def test_failures_and_errors_are_recorded(self):
        suite = InvariantSuite((lorentz(1),))
        suite.check("always fails", lambda cone, rng, tol: (1.0, False))

        def explode(cone, rng, tol):
            raise RuntimeError("boom")

        suite.check("raises", explode)
        failing, raising = suite.run(trials=3, seed=0)
        assert (failing.passed, failing.first_failure, failing.worst_residual) == (0, 0, 1.0)
        assert raising.first_failure == 0
        assert raising.errors[0] == "trial 0: RuntimeError: boom"
        assert not failing.ok

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            InvariantSuite(())

    def test_summary_records_provenance(self):
        report = _run(trials=1, seed=99)
        assert report["seed"] == 99
        assert report["trials"] == 1
        assert report["family"][0] == {"type": "lorentz", "d": 1}
        assert report["tolerances"]["identity"] == DEFAULT_TOLERANCES.identity
