import math

import numpy as np
import pytest

from siegel_reduce import cone as cones
from siegel_reduce.cone import lorentz, orthant, product
from siegel_reduce.errors import (
    ConfigError, InvalidWitness, NotAdmissible, NotInDomain, NotInZ, Undecided,
)
from siegel_reduce.reduce import (
    ADMISSIBLE, INADMISSIBLE, MEMBER, NON_MEMBER, UNDECIDED, MembershipResult, Subspace,
    check_admissible, in_zero_cone, lift_quotient_point, lorentz_zero_cone, orbit_agreement,
    quotient_membership, reduce_point, reduced_coordinates, roundtrip_error, slice_bound,
    slice_bound_at, split_map, zero_cone_path, zero_cone_point,
)
from siegel_reduce.tube import TubePoint
from siegel_reduce.verify import (
    near_boundary, random_admissible_subspace, random_interior, random_subspace,
)

from .conftest import CONE_FAMILIES


class TestSubspace:
    def test_orthonormal_basis_and_complement(self, rng):
        columns = rng.standard_normal((5, 2))
        subspace = Subspace.from_columns(columns, 5)
        assert subspace.k == 2 and subspace.n == 5
        np.testing.assert_allclose(subspace.basis.T @ subspace.basis, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(subspace.complement.T @ subspace.complement, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(subspace.basis.T @ subspace.complement, 0.0, atol=1e-12)
        np.testing.assert_allclose(subspace.basis @ (subspace.basis.T @ columns[:, 0]), columns[:, 0], atol=1e-12)

    def test_complement_orientation(self, vertical_line):
        np.testing.assert_allclose(vertical_line.complement, [[1.0], [0.0]], atol=1e-15)

    def test_zero_dimensional(self):
        subspace = Subspace.from_columns([], 3)
        assert subspace.basis.shape == (3, 0)
        np.testing.assert_array_equal(subspace.complement, np.eye(3))

    def test_rejects_dependent_columns(self):
        with pytest.raises(ConfigError):
            Subspace.from_columns([[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]], 3)

    @pytest.mark.parametrize("data", [
        {"basis": [["a", 1.0]]},
        {"basis": [[1.0, 0.0, 0.0]]},
        {"basis": "x"},
        {"columns": []},
    ])
    def test_schema_rejects(self, data):
        with pytest.raises(ConfigError):
            Subspace.from_dict(data, 2)

    def test_schema_round_trip(self, vertical_line):
        again = Subspace.from_dict(vertical_line.to_dict(), 2)
        np.testing.assert_allclose(again.basis, vertical_line.basis)


class TestAdmissibility:
    def test_vertical_line_is_admissible(self, plane, vertical_line):
        cert = check_admissible(plane, vertical_line)
        assert cert.verdict == ADMISSIBLE
        np.testing.assert_allclose(cert.witness, [1.0, 0.0], atol=1e-12)

    def test_diagonal_line_is_inadmissible(self, plane, diagonal_line):
        cert = check_admissible(plane, diagonal_line)
        assert cert.verdict == INADMISSIBLE
        np.testing.assert_allclose(np.abs(cert.witness), [1 / math.sqrt(2)] * 2, atol=1e-9)
        assert cones.margin(plane, cert.witness) >= -1e-9

    def test_trivial_subspaces(self, plane):
        assert check_admissible(plane, Subspace.from_columns([], 2)).verdict == ADMISSIBLE
        full = Subspace.from_columns(np.eye(2), 2)
        assert check_admissible(plane, full).verdict == INADMISSIBLE

    def test_certificate_report(self, plane, vertical_line):
        data = check_admissible(plane, vertical_line).to_dict()
        assert data["verdict"] == "admissible"
        assert len(data["witness"]) == 2

    @pytest.mark.parametrize("cone", CONE_FAMILIES + [lorentz(7), orthant(8)], ids=lambda c: c.label)
    def test_exactly_one_side_certifies(self, cone, rng):
        for _ in range(30):
            subspace = random_subspace(cone, rng)
            cert = check_admissible(cone, subspace, seed=7)
            assert cert.verdict != UNDECIDED
            if cert.verdict == ADMISSIBLE:
                assert np.max(np.abs(subspace.basis.T @ cert.witness)) <= 1e-9
                assert cones.dual_margin(cone, cert.witness) > 1e-9
            else:
                assert np.max(np.abs(subspace.complement.T @ cert.witness)) <= 1e-9
                assert cones.margin(cone, cert.witness) >= -1e-9

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_constructed_admissible_subspaces(self, cone, rng):
        for _ in range(10):
            subspace, _ = random_admissible_subspace(cone, rng)
            assert check_admissible(cone, subspace).verdict == ADMISSIBLE

    def test_subspace_through_interior_is_inadmissible(self, rng):
        cone = lorentz(3)
        for _ in range(10):
            w = random_interior(cone, rng)
            subspace = Subspace.from_columns(np.column_stack([w, rng.standard_normal(4)]), 4)
            cert = check_admissible(cone, subspace)
            assert cert.verdict == INADMISSIBLE
            assert cones.margin(cone, cert.witness) > 0


class TestZeroCone:
    def test_examples(self, plane, vertical_line):
        assert in_zero_cone(plane, vertical_line, [2.0, 0.0])
        assert not in_zero_cone(plane, vertical_line, [2.0, 1.0])
        assert in_zero_cone(plane, Subspace.from_columns([], 2), [2.0, 1.0])

    @pytest.mark.parametrize("d", [1, 2, 4])
    def test_lorentz_description_agrees(self, d, rng):
        cone = lorentz(d)
        for _ in range(20):
            subspace, y = random_admissible_subspace(cone, rng)
            omega = zero_cone_point(cone, subspace, y)
            assert in_zero_cone(cone, subspace, omega)
            assert lorentz_zero_cone(cone, subspace, omega)
            other = random_interior(cone, rng)
            assert in_zero_cone(cone, subspace, other) == lorentz_zero_cone(cone, subspace, other)

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_zero_cone_is_a_cone_and_connected(self, cone, rng):
        subspace, y0 = random_admissible_subspace(cone, rng)
        omega = zero_cone_point(cone, subspace, y0)
        for scale in (0.1, 3.0, 50.0):
            assert in_zero_cone(cone, subspace, scale * omega)
        path = zero_cone_path(cone, subspace, y0, 2.0 * y0, steps=5)
        assert len(path) == 6
        assert all(in_zero_cone(cone, subspace, w) for w in path)

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_log_char_blows_up_along_fiber_rays(self, cone, rng):
        for _ in range(5):
            subspace, y = random_admissible_subspace(cone, rng)
            omega = zero_cone_point(cone, subspace, y)
            h = rng.standard_normal(subspace.k)
            for direction in (subspace.basis @ h, -subspace.basis @ h):
                direction = direction / np.linalg.norm(direction)
                lo, hi = 0.0, 1.0
                while cones.margin(cone, omega + hi * direction) > 0:
                    lo, hi = hi, 2.0 * hi
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    lo, hi = (mid, hi) if cones.margin(cone, omega + mid * direction) > 0 else (lo, mid)
                values = [cones.log_char(cone, omega + t * direction)
                          for t in lo * np.linspace(0.9, 1.0 - 1e-6, 25)]
                assert np.all(np.diff(values) > 0)
                assert values[-1] - values[0] > 1.0

    def test_zero_cone_point_validates_witness(self, plane, vertical_line):
        with pytest.raises(InvalidWitness):
            zero_cone_point(plane, vertical_line, [1.0, 0.5])


class TestReducePoint:
    def test_worked_example(self, plane, vertical_line, worked_point):
        result = reduce_point(plane, vertical_line, worked_point)
        np.testing.assert_allclose(result.point.im, [2.0, 0.0], atol=1e-10)
        np.testing.assert_array_equal(result.point.re, [0.0, 0.0])
        np.testing.assert_allclose(result.shift, [0.0, -1.0], atol=1e-10)
        assert result.residual <= 1e-8

    def test_real_part_is_untouched(self, plane, vertical_line):
        result = reduce_point(plane, vertical_line, TubePoint([5.0, -3.0], [2.0, 1.0], plane))
        np.testing.assert_array_equal(result.point.re, [5.0, -3.0])
        np.testing.assert_allclose(result.point.im, [2.0, 0.0], atol=1e-10)

    def test_already_reduced(self, plane, vertical_line):
        result = reduce_point(plane, vertical_line, TubePoint([0.0, 0.0], [2.0, 0.0], plane))
        assert result.iterations <= 1
        np.testing.assert_allclose(result.shift, [0.0, 0.0], atol=1e-14)

    def test_inadmissible_subspace(self, plane, diagonal_line, worked_point):
        with pytest.raises(NotAdmissible):
            reduce_point(plane, diagonal_line, worked_point)

    def test_point_outside_domain(self, plane, vertical_line):
        with pytest.raises(NotInDomain):
            reduce_point(plane, vertical_line, TubePoint([0.0, 0.0], [1.0, 1.0], plane))

    def test_report(self, plane, vertical_line, worked_point):
        data = reduce_point(plane, vertical_line, worked_point).to_dict()
        assert set(data) == {"point", "shift", "residual", "iterations"}

    @pytest.mark.parametrize("cone", CONE_FAMILIES + [lorentz(7), orthant(8)], ids=lambda c: c.label)
    def test_random_instances_converge(self, cone, rng):
        for trial in range(40):
            subspace, _ = random_admissible_subspace(cone, rng)
            cert = check_admissible(cone, subspace)
            im = random_interior(cone, rng)
            if trial % 3 == 0:
                im = near_boundary(cone, im)
            x = TubePoint(rng.standard_normal(cone.ambient_dim), im, cone)
            result = reduce_point(cone, subspace, x, cert)
            assert result.residual <= 1e-8
            assert result.iterations <= 200
            assert in_zero_cone(cone, subspace, result.point.im)
            np.testing.assert_allclose(subspace.complement.T @ (result.point.im - x.im), 0.0, atol=1e-9)

    def test_start_with_noisy_barrier_values(self):
        # margin 1.7e-4: log_char differences near the optimum are below rounding
        cone = lorentz(3)
        subspace = Subspace.from_columns(
            [[0.4130913647070151, -0.4290441685517634, -0.007873593889840958, -0.803252533363873]], 4)
        im = [1.9296452599668479, -0.5480404256714274, 1.6805944470388696, -0.7733914167961424]
        result = reduce_point(cone, subspace, TubePoint(np.zeros(4), im, cone))
        assert result.residual <= 1e-8
        assert result.iterations < 200
        assert in_zero_cone(cone, subspace, result.point.im)

    @pytest.mark.parametrize("start_margin", [1e-3, 1e-4, 1e-5])
    @pytest.mark.parametrize("cone", [lorentz(d) for d in range(1, 7)] + [orthant(d) for d in range(2, 9)],
                             ids=lambda c: c.label)
    def test_starts_near_the_boundary(self, cone, start_margin, rng):
        for _ in range(10):
            subspace, _ = random_admissible_subspace(cone, rng)
            im = near_boundary(cone, random_interior(cone, rng), start_margin)
            x = TubePoint(rng.standard_normal(cone.ambient_dim), im, cone)
            result = reduce_point(cone, subspace, x)
            assert result.residual <= 1e-8
            assert result.iterations < 200


class TestOrbitAgreement:
    def test_worked_example(self, plane, vertical_line, worked_point):
        assert orbit_agreement(plane, vertical_line, worked_point, trials=100, seed=3) <= 1e-6

    def test_single_trial(self, plane, vertical_line, worked_point):
        assert orbit_agreement(plane, vertical_line, worked_point, trials=1) == 0.0

    def test_real_translates_only(self, plane, vertical_line, worked_point):
        assert orbit_agreement(plane, vertical_line, worked_point, trials=20, real_only=True) == 0.0

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_random_instances(self, cone, rng):
        for _ in range(5):
            subspace, _ = random_admissible_subspace(cone, rng)
            cert = check_admissible(cone, subspace)
            x = TubePoint(rng.standard_normal(cone.ambient_dim), random_interior(cone, rng), cone)
            assert orbit_agreement(cone, subspace, x, trials=20, seed=11, certificate=cert) <= 1e-6


class TestQuotient:
    def test_split_map(self, plane, vertical_line, worked_point):
        split = split_map(plane, vertical_line, worked_point)
        np.testing.assert_allclose(split.quotient_re, [0.0], atol=1e-15)
        np.testing.assert_allclose(split.quotient_im, [2.0])
        np.testing.assert_allclose(split.fiber_re, [0.0], atol=1e-15)
        np.testing.assert_allclose(split.fiber_im, [1.0])
        rebuilt = split.reconstruct(plane, vertical_line)
        np.testing.assert_allclose(rebuilt.as_vector(), worked_point.as_vector(), atol=1e-14)

    def test_split_map_is_invariant_along_orbits(self, plane, vertical_line, worked_point):
        moved = worked_point.translate([0.0, 3.5], [0.0, -2.0])
        np.testing.assert_allclose(split_map(plane, vertical_line, moved).quotient_im,
                                   split_map(plane, vertical_line, worked_point).quotient_im, atol=1e-15)

    def test_split_map_rejects_points_outside_z(self, plane, vertical_line):
        with pytest.raises(NotInZ):
            split_map(plane, vertical_line, TubePoint([0.0, 0.0], [-1.0, 0.0], plane))

    @pytest.mark.parametrize("t, status", [([1.0], MEMBER), ([-1.0], NON_MEMBER), ([0.0], NON_MEMBER)])
    def test_membership_examples(self, plane, vertical_line, t, status):
        result = quotient_membership(plane, vertical_line, t)
        assert result.status == status
        if status == MEMBER:
            assert result.margin == pytest.approx(1.0)
            np.testing.assert_allclose(result.witness, [0.0], atol=1e-15)

    def test_membership_witness_enters_cone(self):
        cone = orthant(3)
        subspace = Subspace.from_columns([[1.0, -1.0, 0.0]], 3)
        t = subspace.complement.T @ np.array([5.0, -1.0, 2.0])
        result = quotient_membership(cone, subspace, t)
        assert result.member
        point = subspace.complement @ t + subspace.basis @ result.witness
        assert cones.margin(cone, point) > 1e-9

    def test_undecided_raises_on_require(self):
        result = MembershipResult(UNDECIDED, np.zeros(1), 0.0)
        with pytest.raises(Undecided):
            result.require()

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_properness(self, cone, rng):
        for _ in range(10):
            subspace, _ = random_admissible_subspace(cone, rng)
            t = subspace.complement.T @ random_interior(cone, rng)
            assert quotient_membership(cone, subspace, t).member
            assert quotient_membership(cone, subspace, -t).status == NON_MEMBER

    def test_reduced_coordinates(self, plane, vertical_line, worked_point):
        q_re, q_im = reduced_coordinates(plane, vertical_line, worked_point)
        np.testing.assert_allclose(q_re, [0.0], atol=1e-15)
        np.testing.assert_allclose(q_im, [2.0], atol=1e-12)
        direct = split_map(plane, vertical_line, worked_point).quotient
        np.testing.assert_allclose(q_im, direct[1], atol=1e-12)

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_lift_then_project(self, cone, rng):
        subspace, _ = random_admissible_subspace(cone, rng)
        cert = check_admissible(cone, subspace)
        m = subspace.complement.shape[1]
        for _ in range(30):
            s_re = rng.standard_normal(m)
            s_im = subspace.complement.T @ random_interior(cone, rng)
            assert roundtrip_error(cone, subspace, s_re, s_im, cert) <= 1e-8

    def test_lift_rejects_points_outside_quotient(self, plane, vertical_line):
        with pytest.raises(NotInZ):
            lift_quotient_point(plane, vertical_line, [0.0], [-1.0])


class TestSliceBound:
    def test_worked_example(self, plane, vertical_line):
        bound = slice_bound(plane, vertical_line, math.sqrt(5.0), [1.0, 0.0])
        assert bound == pytest.approx(math.sqrt(10.0))
        sharp = slice_bound_at(plane, vertical_line, [2.0, 1.0], [1.0, 0.0])
        assert sharp == pytest.approx(math.sqrt(8.0), abs=1e-9)
        corner = np.array([2.0, 2.0])
        assert np.linalg.norm(corner) == pytest.approx(sharp, abs=1e-9)
        for s in np.linspace(-2.0, 2.0, 81):
            assert np.linalg.norm([2.0, s]) <= bound + 1e-9

    def test_zero_radius(self, plane, vertical_line):
        assert slice_bound(plane, vertical_line, 0.0, [1.0, 0.0]) == 0.0

    @pytest.mark.parametrize("y", [[1.0, 0.5], [-1.0, 0.0]])
    def test_invalid_witness(self, plane, vertical_line, y):
        with pytest.raises(InvalidWitness):
            slice_bound(plane, vertical_line, 1.0, y)

    def test_negative_radius(self, plane, vertical_line):
        with pytest.raises(InvalidWitness):
            slice_bound(plane, vertical_line, -1.0, [1.0, 0.0])

    @pytest.mark.parametrize("cone", [lorentz(2), orthant(3), product([lorentz(1), orthant(1)])],
                             ids=lambda c: c.label)
    def test_sampled_slices_respect_bound(self, cone, rng):
        for _ in range(10):
            subspace, y = random_admissible_subspace(cone, rng)
            omega = random_interior(cone, rng)
            bound = slice_bound(cone, subspace, np.linalg.norm(omega), y)
            for _ in range(200):
                point = omega + subspace.basis @ (3.0 * rng.standard_normal(subspace.k))
                if cones.margin(cone, point) >= 0:
                    assert np.linalg.norm(point) <= bound + 1e-9
