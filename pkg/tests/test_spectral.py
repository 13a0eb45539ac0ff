# -*- coding: utf-8 -*-
import numpy as np
import pytest

from core import spectral
from core.errors import ConsistencyError, DomainError, InvalidMatrix, NotPSD
from core.linalg import ComplexMatrix
from core.spectral import (
    PowerPair,
    ScalarFn,
    StateVector,
    apply_fn,
    cheb_double_sum,
    cheb_functional,
    pre_gruss_slack,
    qform,
    spectral_measure,
    variance,
)
from tests.conftest import random_psd


class TestScalarFn:
    def test_zero_power_is_one(self):
        assert ScalarFn.power(0)(0.0) == 1.0
        assert np.allclose(ScalarFn.power(0)([0.0, 2.0]), ScalarFn.const(1)([0.0, 2.0]))

    def test_poly_coefficients_ascending(self):
        assert ScalarFn.poly([1, 2, 1])(2.0) == pytest.approx(9.0)

    def test_sqrt_of_negative_inner(self):
        f = ScalarFn.sqrt_of(ScalarFn.poly([-1.0]))
        with pytest.raises(DomainError):
            f([1.0])

    def test_exp_overflow(self):
        with pytest.raises(DomainError):
            ScalarFn.exp()([800.0])

    def test_negative_power_rejected(self):
        with pytest.raises(DomainError):
            ScalarFn.power(-0.5)

    def test_json(self):
        f = ScalarFn.sqrt_of(ScalarFn.poly([0.5, 1.0]))
        assert f.to_json() == {"kind": "sqrt_of", "inner": {"kind": "poly", "coeffs": [0.5, 1.0]}}
        assert ScalarFn.from_json(f.to_json()) == f
        with pytest.raises(DomainError):
            ScalarFn.from_json({"kind": "cosh"})

    def test_power_pair(self):
        pair = PowerPair(0.3)
        t = np.array([0.0, 0.5, 4.0])
        assert np.allclose(pair.f(t) * pair.g(t), t)
        with pytest.raises(DomainError):
            PowerPair(1.5)


class TestStateVector:
    def test_requires_unit_norm(self):
        with pytest.raises(InvalidMatrix):
            StateVector(np.array([1.0, 1.0]))

    def test_normalized(self):
        s = StateVector.normalized([3, 4j])
        assert np.linalg.norm(s.x) == pytest.approx(1.0)
        assert np.allclose(StateVector.from_json(s.to_json()).x, s.x)


class TestApplyFn:
    def test_square_root_of_diagonal(self):
        out = apply_fn(ScalarFn.power(0.5), ComplexMatrix.diag([4, 9]))
        assert np.allclose(out.entries, np.diag([2, 3]))

    def test_identity_function(self, rng):
        a = random_psd(rng, 5)
        assert np.allclose(apply_fn(ScalarFn.identity(), a).entries, a, atol=1e-10)

    def test_polynomial_matches_matrix_polynomial(self, rng):
        a = random_psd(rng, 6)
        expected = np.eye(6) + 2 * a + a @ a
        out = apply_fn(ScalarFn.poly([1, 2, 1]), a)
        assert np.allclose(out.entries, expected, atol=1e-10 * np.linalg.norm(expected, 2))

    def test_result_is_hermitian(self, rng):
        out = apply_fn(ScalarFn.exp(), random_psd(rng, 4) / 10).entries
        assert np.array_equal(out, out.conj().T)

    def test_not_psd(self):
        with pytest.raises(NotPSD):
            apply_fn(ScalarFn.identity(), ComplexMatrix.diag([1, -1]))

    def test_tiny_negative_eigenvalue_clamped(self):
        out = apply_fn(ScalarFn.power(0.5), ComplexMatrix.diag([1, -1e-13]))
        assert np.allclose(out.entries, np.diag([1, 0]))


class TestQuadraticForm:
    def test_identity(self, half_state):
        assert qform(np.eye(2), half_state) == pytest.approx(1)

    def test_eigenvector(self, diag01):
        assert qform(diag01, np.array([1, 0])) == pytest.approx(0)

    def test_mixed_state(self, diag01, half_state):
        assert qform(diag01, half_state) == pytest.approx(0.5)


class TestChebyshevFunctional:
    def test_two_atom_example(self, diag01, half_state):
        f = g = ScalarFn.identity()
        assert cheb_functional(f, g, diag01, half_state) == pytest.approx(0.25, abs=1e-14)
        assert cheb_double_sum(f, g, diag01, half_state) == pytest.approx(0.25, abs=1e-14)

    def test_eigenvector_gives_zero(self, rng):
        a = random_psd(rng, 4)
        x = np.linalg.eigh(a)[1][:, 2]
        value = cheb_functional(ScalarFn.exp(), ScalarFn.power(1.5), a / np.linalg.norm(a, 2), x)
        assert value == pytest.approx(0, abs=1e-10)

    def test_constant_is_uncorrelated(self, rng):
        a = random_psd(rng, 4)
        x = StateVector.normalized(rng.standard_normal(4))
        assert cheb_functional(ScalarFn.const(3), ScalarFn.power(2), a, x) == pytest.approx(0, abs=1e-10)

    def test_single_eigenvalue_double_sum(self, half_state):
        assert cheb_double_sum(ScalarFn.identity(), ScalarFn.power(2), np.eye(2), half_state) == 0.0

    def test_double_sum_identity(self, rng):
        for _ in range(50):
            a = random_psd(rng, 5)
            x = StateVector.normalized(rng.standard_normal(5) + 1j * rng.standard_normal(5))
            f, g = ScalarFn.power(0.3), ScalarFn.poly([0.2, 1.0, 0.5])
            c = cheb_functional(f, g, a, x)
            scale = max(1.0, np.linalg.norm(a, 2) ** 2)
            assert abs(c - cheb_double_sum(f, g, a, x)) <= 1e-10 * scale

    def test_variance_nonnegative(self, rng):
        a = random_psd(rng, 4)
        x = StateVector.normalized(rng.standard_normal(4))
        assert variance(ScalarFn.log1p(), a, x) >= 0
        assert cheb_double_sum(ScalarFn.log1p(), ScalarFn.log1p(), a, x) >= 0

    def test_spectral_measure_sums_to_one(self, rng):
        atoms, masses = spectral_measure(random_psd(rng, 5), StateVector.normalized(rng.standard_normal(5)))
        assert masses.sum() == pytest.approx(1.0)
        assert np.all(np.diff(atoms) >= 0)


class TestPreGruss:
    def test_equal_functions_are_tight(self, rng):
        a = random_psd(rng, 4)
        x = StateVector.normalized(rng.standard_normal(4))
        assert pre_gruss_slack(ScalarFn.power(0.5), ScalarFn.power(0.5), a, x) == pytest.approx(0, abs=1e-10)

    def test_two_atom_equality(self, diag01, half_state):
        slack = pre_gruss_slack(ScalarFn.identity(), ScalarFn.power(2), diag01, half_state)
        assert slack == pytest.approx(0, abs=1e-14)

    def test_power_pair_holds(self, rng):
        pair = PowerPair(0.3)
        for _ in range(100):
            a = random_psd(rng, 6)
            x = StateVector.normalized(rng.standard_normal(6) + 1j * rng.standard_normal(6))
            assert pre_gruss_slack(pair.f, pair.g, a, x) >= -1e-10 * max(1.0, np.linalg.norm(a, 2))

    def test_rounding_negative_variance_clamped(self, monkeypatch, diag01, half_state):
        monkeypatch.setattr(spectral, "_cheb_parts", lambda f, g, A, x: (-1e-13, 10.0))
        assert variance(ScalarFn.identity(), diag01, half_state) == 0.0

    def test_negative_variance_raises(self, monkeypatch, diag01, half_state):
        monkeypatch.setattr(spectral, "_cheb_parts", lambda f, g, A, x: (-1e-6, 1.0))
        with pytest.raises(ConsistencyError):
            variance(ScalarFn.identity(), diag01, half_state)
        with pytest.raises(ConsistencyError):
            pre_gruss_slack(ScalarFn.identity(), ScalarFn.power(2), diag01, half_state)
