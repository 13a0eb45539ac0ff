# -*- coding: utf-8 -*-
import csv
import io
import math

import numpy as np
import pytest

from core.errors import InvalidParameters
from core.linalg import ComplexMatrix, operator_norm
from core.radius import (
    boundary_thetas,
    minimal_numerical_radius,
    minimal_radius_detail,
    minimal_radius_oracle,
    numerical_radius,
    radius_profile,
    range_area,
    range_boundary,
    write_boundary_csv,
)
from tests.conftest import random_hermitian, random_matrix


def jordan(n):
    return ComplexMatrix(np.eye(n, k=1))


class TestNumericalRadius:
    def test_identity(self, identity2):
        assert numerical_radius(identity2) == pytest.approx(1.0, abs=1e-12)

    def test_j2(self, J2):
        assert numerical_radius(J2) == pytest.approx(0.5, abs=1e-8)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_jordan_blocks(self, n):
        assert numerical_radius(jordan(n)) == pytest.approx(math.cos(math.pi / (n + 1)), abs=1e-6)

    def test_hermitian_equals_norm(self, rng):
        for _ in range(20):
            a = random_hermitian(rng, 5)
            assert abs(numerical_radius(a) - operator_norm(a)) <= 1e-9

    def test_sandwich(self, rng):
        for n in range(2, 7):
            t = random_matrix(rng, n)
            w, norm = numerical_radius(t), operator_norm(t)
            assert 0.5 * norm - 1e-8 <= w <= norm + 1e-8

    def test_against_random_vectors(self, rng):
        t = random_matrix(rng, 4)
        x = rng.standard_normal((20000, 4)) + 1j * rng.standard_normal((20000, 4))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        sampled = np.max(np.abs(np.einsum("ri,ij,rj->r", x.conj(), t, x)))
        assert sampled <= numerical_radius(t) + 1e-10

    def test_profile_symmetry(self, rng):
        profile = radius_profile(random_matrix(rng, 3), grid=64)
        assert np.allclose(profile.lam_max[32:], -profile.lam_min[:32])
        assert np.all(profile.lam_max >= profile.lam_min)


class TestMinimalRadius:
    def test_positive_segment(self):
        assert minimal_numerical_radius(ComplexMatrix.diag([1, 2])) == pytest.approx(1.0, abs=1e-10)

    def test_zero_inside_range(self, J2):
        detail = minimal_radius_detail(J2)
        assert detail.value == 0.0
        assert detail.support <= 0.0

    def test_segment_between_one_and_i(self):
        value = minimal_numerical_radius(ComplexMatrix.diag([1, 1j]))
        assert value == pytest.approx(math.sqrt(2) / 2, abs=1e-8)

    def test_zero_on_boundary(self):
        detail = minimal_radius_detail(ComplexMatrix.diag([0, 1]))
        assert detail.value == 0.0
        assert detail.boundary

    def test_agrees_with_oracle_on_normal_matrices(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 4))
            u, _ = np.linalg.qr(random_matrix(rng, n))
            # 特徵值落在以 3·e^{iφ} 為圓心的單位圓盤內，0 不在 W(T) 中
            center = 3 * np.exp(1j * rng.uniform(0, 2 * np.pi))
            eigs = center + np.sqrt(rng.uniform(0, 1, n)) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
            t = u @ np.diag(eigs) @ u.conj().T
            oracle = minimal_radius_oracle(t, restarts=5000, rng=rng)
            assert minimal_numerical_radius(t) == pytest.approx(oracle, abs=1e-6)


class TestRangeBoundary:
    def test_hermitian_is_real(self, diag01):
        points = np.array(range_boundary(diag01, 64))
        assert np.all(np.abs(points.imag) <= 1e-10)
        assert np.all((points.real >= -1e-10) & (points.real <= 1 + 1e-10))

    def test_j2_circle(self, J2):
        points = np.array(range_boundary(J2, 512))
        assert len(points) == 512
        assert np.all(np.abs(np.abs(points) - 0.5) <= 1e-8)

    def test_normal_square(self):
        t = ComplexMatrix.diag([1, 1j, -1, -1j])
        assert range_area(t, 512) == pytest.approx(2.0, abs=1e-8)

    def test_degenerate_area(self, diag01):
        assert range_area(diag01, 64) == 0.0

    def test_too_few_points(self, J2):
        with pytest.raises(InvalidParameters):
            range_boundary(J2, 2)

    def test_csv(self, J2):
        thetas = boundary_thetas(8)
        text = write_boundary_csv(range_boundary(J2, 8), thetas)
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["theta", "re", "im"]
        assert len(rows) == 9
        assert float(rows[1][0]) == 0.0
        assert float(rows[3][0]) == thetas[2]
