# -*- coding: utf-8 -*-
import numpy as np
import pytest

from core import linalg
from core.errors import (
    ConsistencyError,
    DimensionCapExceeded,
    DimensionMismatch,
    InvalidMatrix,
    NoConvergence,
    NotHermitian,
)
from core.linalg import (
    ComplexMatrix,
    abs_adjoint,
    abs_op,
    aluthge,
    ell,
    hermitian_eig,
    is_psd,
    mat_power,
    operator_norm,
    polar,
    singular_values,
    spectral_radius,
    spectral_radius_estimate,
    svd,
)
from tests.conftest import random_hermitian, random_matrix
from utils.settings_manager import get_tolerances


class TestComplexMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(InvalidMatrix):
            ComplexMatrix(np.zeros((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidMatrix):
            ComplexMatrix([[np.nan, 0], [0, 1]])

    def test_dimension_cap(self):
        with pytest.raises(DimensionCapExceeded):
            ComplexMatrix.zero(65)

    def test_entries_are_read_only(self):
        m = ComplexMatrix.identity(2)
        with pytest.raises(ValueError):
            m.entries[0, 0] = 5

    def test_json_format(self):
        m = ComplexMatrix.from_rows([[1 + 2j, 0], [0, -1]])
        data = m.to_json()
        assert data == {"n": 2, "entries": [[[1.0, 2.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]}
        assert np.array_equal(ComplexMatrix.from_json(data).entries, m.entries)

    def test_json_shape_checked(self):
        with pytest.raises(InvalidMatrix):
            ComplexMatrix.from_json({"n": 2, "entries": [[[1, 0]]]})
        with pytest.raises(InvalidMatrix):
            ComplexMatrix.from_json({"entries": []})

    def test_arithmetic_checks_dimension(self):
        with pytest.raises(DimensionMismatch):
            ComplexMatrix.identity(2) + ComplexMatrix.identity(3)

    def test_adjoint(self):
        m = ComplexMatrix.from_rows([[1, 1j], [2, 3]])
        assert np.allclose(m.H.entries, [[1, 2], [-1j, 3]])


class TestHermitianEig:
    def test_identity(self):
        eig = hermitian_eig(ComplexMatrix.identity(2))
        assert np.allclose(eig.values, [1, 1])
        assert np.allclose(eig.vectors.conj().T @ eig.vectors, np.eye(2))

    def test_swap(self):
        eig = hermitian_eig([[0, 1], [1, 0]])
        assert np.allclose(eig.values, [-1, 1])

    def test_reconstruction(self, rng):
        a = random_hermitian(rng, 8)
        eig = hermitian_eig(a)
        assert np.linalg.norm(eig.reconstruct() - a, 2) <= 1e-12 * max(1.0, np.linalg.norm(a, 2))

    def test_reconstruction_check(self, rng, monkeypatch):
        monkeypatch.setattr(linalg, "TOL", get_tolerances().model_copy(update={"eig_reconstruction": 1e-300}))
        with pytest.raises(ConsistencyError):
            hermitian_eig(random_hermitian(rng, 6))

    def test_phase_convention(self, rng):
        eig = hermitian_eig(random_hermitian(rng, 5))
        for j in range(5):
            col = eig.vectors[:, j]
            first = col[np.flatnonzero(np.abs(col) > 1e-10)[0]]
            assert abs(first.imag) < 1e-14 and first.real > 0

    def test_not_hermitian(self, J2):
        with pytest.raises(NotHermitian):
            hermitian_eig(J2)


class TestSingularValues:
    def test_diagonal(self):
        a = ComplexMatrix.diag([3, -4])
        assert np.allclose(singular_values(a), [4, 3])
        assert operator_norm(a) == pytest.approx(4)
        assert ell(a) == pytest.approx(3)

    def test_jordan(self, J2):
        assert np.allclose(singular_values(J2), [1, 0])

    def test_against_eig(self, rng):
        a = random_matrix(rng, 6)
        s = svd(a)
        top = hermitian_eig(a.conj().T @ a).values[-1]
        assert s.sigma[0] ** 2 == pytest.approx(top, rel=1e-10)
        assert np.allclose(s.reconstruct(), a, atol=1e-12)


class TestPolar:
    def test_psd_has_identity_factor(self, rng):
        g = random_matrix(rng, 4)
        a = g.conj().T @ g + np.eye(4)
        assert np.allclose(polar(a).unitary, np.eye(4), atol=1e-10)

    def test_sign(self):
        p = polar(-np.eye(3))
        assert np.allclose(p.unitary, -np.eye(3))
        assert np.allclose(p.modulus, np.eye(3))

    def test_reconstruction(self, rng):
        a = random_matrix(rng, 5)
        p = polar(a)
        assert np.allclose(p.unitary.conj().T @ p.unitary, np.eye(5), atol=1e-10)
        assert np.allclose(p.unitary @ p.modulus, a, atol=1e-10)

    def test_reconstruction_check(self, rng, monkeypatch):
        monkeypatch.setattr(linalg, "TOL", get_tolerances().model_copy(update={"polar_tolerance": 1e-300}))
        with pytest.raises(ConsistencyError):
            polar(random_matrix(rng, 5))


class TestModulus:
    def test_jordan(self, J2):
        assert np.allclose(abs_op(J2).entries, np.diag([0, 1]), atol=1e-12)
        assert np.allclose(abs_adjoint(J2).entries, np.diag([1, 0]), atol=1e-12)

    def test_scalar(self):
        c = 3 - 4j
        assert np.allclose(abs_op(c * np.eye(3)).entries, 5 * np.eye(3))

    def test_eigenvalues_are_singular_values(self, rng):
        a = random_matrix(rng, 6)
        values = np.sort(hermitian_eig(abs_op(a)).values)[::-1]
        assert np.allclose(values, singular_values(a), atol=1e-10)

    def test_left_unitary_invariance(self, rng):
        a = random_matrix(rng, 4)
        u, _ = np.linalg.qr(random_matrix(rng, 4))
        assert np.allclose(abs_op(u @ a).entries, abs_op(a).entries, atol=1e-10)
        assert is_psd(abs_op(a))


def test_aluthge_of_normal_matrix_is_itself():
    a = ComplexMatrix.diag([2, 1j, -3])
    assert np.allclose(aluthge(a).entries, a.entries, atol=1e-12)


def test_mat_power(J2):
    assert np.allclose(mat_power(J2, 0).entries, np.eye(2))
    assert np.allclose(mat_power(J2, 2).entries, 0)
    with pytest.raises(ValueError):
        mat_power(J2, -1)


class TestSpectralRadius:
    def test_diagonal(self):
        assert spectral_radius(ComplexMatrix.diag([1, -3, 2j])) == pytest.approx(3, abs=1e-5)

    def test_nilpotent(self, J2):
        assert spectral_radius(J2) == pytest.approx(0, abs=1e-5)

    def test_unitary(self, rng):
        u, _ = np.linalg.qr(random_matrix(rng, 4))
        assert spectral_radius(u) == pytest.approx(1, abs=1e-5)

    def test_upper_bound_and_strict(self):
        # 非正規且收斂極慢
        t = np.array([[1, 1e6], [0, 0.999999]], dtype=complex)
        estimate = spectral_radius_estimate(t)
        assert estimate.value >= 1 - 1e-12
        if not estimate.converged:
            with pytest.raises(NoConvergence) as info:
                spectral_radius(t, strict=True)
            assert info.value.estimate == pytest.approx(estimate.value)

    def test_trace_bracket_stops_iteration(self, monkeypatch):
        # 相鄰估計永遠不相等，只能靠上下界停止
        monkeypatch.setattr(linalg, "TOL", get_tolerances().model_copy(update={"gelfand_rtol": 1e-300}))
        estimate = spectral_radius_estimate([[1, 1], [0, 0.5]])
        assert estimate.converged
        assert estimate.steps < linalg.TOL.gelfand_max_steps
        assert 1.0 <= estimate.value <= 1.0 + 1e-5

    def test_cancelling_trace_falls_back_to_rtol(self):
        # 2^k 不被 3 整除，tr(T^{2^k}) 恆為 0；仍由相鄰估計收斂
        t = np.diag(np.exp(2j * np.pi * np.arange(3) / 3))
        estimate = spectral_radius_estimate(t)
        assert estimate.converged
        assert estimate.value == pytest.approx(1, abs=1e-5)
