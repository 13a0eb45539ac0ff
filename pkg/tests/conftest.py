# -*- coding: utf-8 -*-
"""共用測試夾具"""

import json

import numpy as np
import pytest

from core.linalg import ComplexMatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def J2():
    return ComplexMatrix.from_rows([[0, 1], [0, 0]])


@pytest.fixture
def identity2():
    return ComplexMatrix.identity(2)


@pytest.fixture
def diag01():
    return ComplexMatrix.diag([0, 1])


@pytest.fixture
def half_state():
    return np.array([1, 1], dtype=complex) / np.sqrt(2)


def random_matrix(rng, n):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_psd(rng, n):
    g = random_matrix(rng, n)
    return g.conj().T @ g


def random_hermitian(rng, n):
    g = random_matrix(rng, n)
    return (g + g.conj().T) / 2


@pytest.fixture
def write_matrix(tmp_path):
    """把矩陣寫成 CLI 的 JSON 格式並回傳路徑"""
    def _write(name, matrix):
        path = tmp_path / name
        path.write_text(json.dumps(ComplexMatrix(np.asarray(matrix)).to_json()), encoding="utf-8")
        return path
    return _write
