import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from berezinlab.diskgeom import (DISK_RADIUS_MAX, DiskDomainError, DiskPoint,
                                 bergman_kernel, mobius_deriv, mobius_eval,
                                 normalized_kernel, normalized_kernel_density)

disk_points = st.complex_numbers(max_magnitude=0.95, allow_infinity=False,
                                 allow_nan=False)


class TestDiskPoint:
    def test_accepts_interior(self):
        p = DiskPoint(0.3 + 0.4j)
        assert complex(p) == 0.3 + 0.4j
        assert abs(p) == pytest.approx(0.5)

    def test_rejects_boundary_and_outside(self):
        for bad in (1.0, -1.0, 1.5j, 2.0 + 2.0j, 1.0 - 5e-13):
            with pytest.raises(DiskDomainError):
                DiskPoint(bad)

    def test_rejects_nan(self):
        with pytest.raises(DiskDomainError):
            DiskPoint(complex("nan"))

    def test_boundary_margin(self):
        DiskPoint(1.0 - 2e-12)  # just inside the allowed radius
        assert DISK_RADIUS_MAX < 1.0


class TestMobius:
    def test_at_zero_gives_z(self):
        assert mobius_eval(0.3, 0.0) == pytest.approx(0.3)

    def test_vanishes_at_z(self):
        assert mobius_eval(0.3, 0.3) == pytest.approx(0.0)

    def test_involution_example(self):
        z, w = 0.5j, 0.2
        assert mobius_eval(z, mobius_eval(z, w)) == pytest.approx(w, abs=1e-12)

    def test_result_inside_disk(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            z = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            w = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            assert abs(mobius_eval(z, w)) < 1.0

    @settings(max_examples=60, deadline=None)
    @given(z=disk_points, w=disk_points)
    def test_involution_property(self, z, w):
        assert abs(mobius_eval(z, mobius_eval(z, w)) - w) < 1e-12

    def test_accepts_diskpoint_wrappers(self):
        assert mobius_eval(DiskPoint(0.1), DiskPoint(0.2j)) == pytest.approx(
            mobius_eval(0.1, 0.2j))


class TestMobiusDerivative:
    def test_at_origin_is_minus_one(self):
        assert mobius_deriv(0.0, 0.37 - 0.11j) == pytest.approx(-1.0)

    def test_formula_at_zero(self):
        assert mobius_deriv(0.5, 0.0) == pytest.approx(-0.75)

    def test_matches_central_difference(self):
        rng = np.random.default_rng(1)
        h = 1e-6
        for _ in range(25):
            z = 0.8 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            w = 0.8 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            fd = (mobius_eval(z, w + h) - mobius_eval(z, w - h)) / (2 * h)
            assert abs(mobius_deriv(z, w) - fd) < 1e-8


class TestKernels:
    def test_center_kernel_is_one(self):
        for w in (0.0, 0.5, -0.2 + 0.7j):
            assert bergman_kernel(0.0, w) == pytest.approx(1.0)

    def test_diagonal_value(self):
        assert bergman_kernel(0.5, 0.5) == pytest.approx(16.0 / 9.0)

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            z = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            w = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            assert bergman_kernel(z, w) == pytest.approx(
                np.conj(bergman_kernel(w, z)), abs=1e-12)

    def test_normalized_scaling(self):
        z, w = 0.6j, 0.1 - 0.3j
        assert normalized_kernel(z, w) == pytest.approx(
            bergman_kernel(z, w) * (1 - abs(z) ** 2))

    def test_normalized_at_center(self):
        assert normalized_kernel(0.0, 0.77j) == pytest.approx(1.0)

    def test_unit_mass_of_density(self, default_rule):
        # ||k_z||_2 = 1, checked through the quadrature rule at z = 0.7
        total = np.dot(default_rule.weights,
                       normalized_kernel_density(0.7, default_rule.nodes))
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_modulus_identity(self):
        # (1 - |phi_z(w)|^2) = (1-|z|^2)(1-|w|^2)/|1 - conj(z) w|^2
        rng = np.random.default_rng(3)
        for _ in range(40):
            z = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            w = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
            lhs = 1 - abs(mobius_eval(z, w)) ** 2
            rhs = (1 - abs(z) ** 2) * (1 - abs(w) ** 2) / abs(1 - np.conj(z) * w) ** 2
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_reproducing_property(self, default_rule):
        # integrating p against conj(K_z) evaluates p at z, to rule accuracy
        rng = np.random.default_rng(4)
        coeffs = rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9)
        for z in (0.5, -0.3 + 0.6j, 0.8):
            p_nodes = np.polyval(coeffs[::-1], default_rule.nodes)
            kern = np.conj(1.0 / (1.0 - np.conj(z) * default_rule.nodes) ** 2)
            got = default_rule.integrate(p_nodes * kern)
            assert got == pytest.approx(np.polyval(coeffs[::-1], z), abs=1e-10)
