import math

import numpy as np
import pytest

from siegel_reduce import cone as cones
from siegel_reduce.cone import lorentz, orthant
from siegel_reduce.errors import ConfigError, DimensionMismatch, NotInDomain
from siegel_reduce.tube import (
    Tangent, TubePoint, complex_mul_i, complex_structure_matrix, fd_step, kahler_form,
    kahler_form_oracle, potential,
)
from siegel_reduce.verify import random_point, random_tangent

from .conftest import CONE_FAMILIES


def test_potential_ignores_real_part(plane):
    x = TubePoint([5.0, -3.0], [2.0, 1.0], plane)
    assert potential(x) == pytest.approx(-math.log(3.0))
    assert potential(x.translate([1.0, 1.0])) == potential(x)


def test_potential_outside_domain(plane):
    with pytest.raises(NotInDomain):
        potential(TubePoint([0.0, 0.0], [1.0, 1.0], plane))


def test_complex_mul_i():
    u = complex_mul_i(Tangent([1.0, 0.0], [0.0, 0.0]))
    np.testing.assert_array_equal(u.as_vector(), [0.0, 0.0, 1.0, 0.0])


def test_complex_structure_matrix_squares_to_minus_identity():
    j = complex_structure_matrix(3)
    np.testing.assert_array_equal(j @ j, -np.eye(6))
    u = Tangent([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    np.testing.assert_array_equal(j @ u.as_vector(), complex_mul_i(u).as_vector())


def test_tangent_from_vector():
    u = Tangent.from_vector([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(u.re, [1.0, 2.0])
    np.testing.assert_array_equal(u.im, [3.0, 4.0])
    with pytest.raises(DimensionMismatch):
        Tangent.from_vector([1.0, 2.0, 3.0])


class TestPointSchema:
    def test_round_trip(self, plane, worked_point):
        again = TubePoint.from_dict(plane, worked_point.to_dict())
        np.testing.assert_array_equal(again.as_vector(), worked_point.as_vector())

    @pytest.mark.parametrize("data", [
        {"re": [0, 0]},
        {"re": [0, 0], "im": [1, 0], "extra": 1},
        {"re": [0, 0, 0], "im": [1, 0]},
        [0, 1],
    ])
    def test_rejects(self, plane, data):
        with pytest.raises(ConfigError):
            TubePoint.from_dict(plane, data)


class TestKahlerForm:
    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_algebraic_properties(self, cone, rng):
        for _ in range(20):
            x = random_point(cone, rng)
            u, w = random_tangent(x.dim, rng), random_tangent(x.dim, rng)
            value = kahler_form(x, u, w)
            assert kahler_form(x, w, u) == pytest.approx(-value, abs=1e-12 * (1 + abs(value)))
            assert kahler_form(x, complex_mul_i(u), complex_mul_i(w)) == pytest.approx(
                value, abs=1e-12 * (1 + abs(value)))
            assert kahler_form(x, u, complex_mul_i(u)) > 0

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_oracle_matches_closed_form(self, cone, rng):
        for _ in range(20):
            x = random_point(cone, rng)
            u, w = random_tangent(x.dim, rng), random_tangent(x.dim, rng)
            exact = kahler_form(x, u, w)
            assert abs(kahler_form_oracle(x, u, w) - exact) <= 1e-4 * (1 + abs(exact))

    def test_oracle_shrinks_step_near_boundary(self):
        cone = orthant(2)
        x = TubePoint([0.0, 0.0], [1e-2, 1.0], cone)
        u = Tangent([0.0, 0.0], [1.0, 0.0])
        w = Tangent([1.0, 0.0], [0.0, 0.0])
        exact = kahler_form(x, u, w)
        assert exact == pytest.approx(-1e4)
        # 1.5e-2 leaves the orthant, 1.5e-3 stays inside with a 2% differencing error
        assert kahler_form_oracle(x, u, w, step=1.5e-2) == pytest.approx(exact, rel=0.05)

    def test_oracle_gives_up_when_every_step_exits(self):
        x = TubePoint([0.0, 0.0], [1e-9, 1.0], orthant(2))
        u = Tangent([0.0, 0.0], [1.0, 0.0])
        with pytest.raises(NotInDomain):
            kahler_form_oracle(x, u, u, step=1.0)

    def test_dimension_checks(self, worked_point):
        with pytest.raises(DimensionMismatch):
            kahler_form(worked_point, Tangent([1.0], [1.0]), Tangent([1.0, 0.0], [0.0, 1.0]))

    def test_fd_step_scales_with_point(self, plane):
        small = TubePoint([0.0, 0.0], [1.0, 0.0], plane)
        large = TubePoint([100.0, 0.0], [1.0, 0.0], plane)
        assert fd_step(large) > 50 * fd_step(small)

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_oracle_is_bilinear(self, cone, rng):
        for _ in range(10):
            x = random_point(cone, rng)
            u1, u2, w = (random_tangent(x.dim, rng) for _ in range(3))
            a, b = rng.standard_normal(2)
            combined = Tangent(a * u1.re + b * u2.re, a * u1.im + b * u2.im)
            step = 0.1 * fd_step(x)
            first, second = kahler_form_oracle(x, u1, w, step), kahler_form_oracle(x, u2, w, step)
            expected = a * first + b * second
            scale = 1.0 + abs(a * first) + abs(b * second)
            assert abs(kahler_form_oracle(x, combined, w, step) - expected) <= 1e-4 * scale


class TestPotential:
    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_scaling(self, cone, rng):
        for _ in range(10):
            x = random_point(cone, rng)
            doubled = TubePoint(x.re, 2.0 * x.im, cone)
            assert potential(doubled) - potential(x) == pytest.approx(-cone.degree * math.log(2.0), abs=1e-10)

    @pytest.mark.parametrize("cone", CONE_FAMILIES, ids=lambda c: c.label)
    def test_strictly_convex_along_imaginary_lines(self, cone, rng):
        for _ in range(10):
            x = random_point(cone, rng)
            v = rng.standard_normal(x.dim)
            h = 0.05 * cones.margin(cone, x.im) / np.linalg.norm(v)
            values = [potential(x.translate(h_im=s * h * v)) for s in (-1.0, 0.0, 1.0)]
            second = values[0] + values[2] - 2.0 * values[1]
            expected = h ** 2 * (v @ cones.log_char_hessian(cone, x.im) @ v)
            assert second > 0
            assert second == pytest.approx(expected, rel=1e-2)
