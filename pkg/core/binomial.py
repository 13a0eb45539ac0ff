#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
非交換二項式展開
d_B、本質非交換部分 D_n(B,A) 與 (A+B)^n 的展開，並與直接乘冪比對
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from utils.settings_manager import get_tolerances
from .errors import CapExceeded
from .linalg import ComplexMatrix, MatrixLike, as_array, as_matrix, mat_power, check_same_dim

logger = logging.getLogger(__name__)

TOL = get_tolerances()


def commutator(A: MatrixLike, X: MatrixLike) -> ComplexMatrix:
    """d_A(X) = [A, X] = AX − XA"""
    check_same_dim(A, X)
    a, x = as_array(A), as_array(X)
    return ComplexMatrix(a @ x - x @ a)


def shifted_derivation(A: MatrixLike, B: MatrixLike) -> Callable[[np.ndarray], np.ndarray]:
    """
    回傳作用在矩陣上的線性算子 (A + d_B): X ↦ AX + BX − XB

    以函數形式作用，不展開成 n²×n² 矩陣。
    """
    check_same_dim(A, B)
    a, b = as_array(A), as_array(B)
    ab = a + b

    def apply(x: np.ndarray) -> np.ndarray:
        return ab @ x - x @ b

    return apply


def _check_cap(n: int) -> None:
    if n < 0:
        raise ValueError(f"次數必須非負: {n}")
    if n > TOL.binomial_cap:
        raise CapExceeded(f"n = {n} 超過上限 {TOL.binomial_cap}")


def binomial_coefficient(n: int, k: int) -> int:
    """精確整數 C(n, k)"""
    _check_cap(n)
    return math.comb(n, k)


def _essential_parts(B: MatrixLike, A: MatrixLike, n: int) -> List[np.ndarray]:
    """D_0 … D_n，D_{k+1} = d_B(A^k) + (A + d_B)D_k"""
    check_same_dim(A, B)
    a, b = as_array(A), as_array(B)
    step = shifted_derivation(a, b)
    dim = a.shape[0]
    current = np.zeros((dim, dim), dtype=np.complex128)
    power = np.eye(dim, dtype=np.complex128)
    parts = [current]
    for _ in range(n):
        current = (b @ power - power @ b) + step(current)
        power = power @ a
        parts.append(current)
    return parts


def essential_part(B: MatrixLike, A: MatrixLike, n: int) -> ComplexMatrix:
    """
    本質非交換部分 D_n(B, A)

    Args:
        B, A: 同維度方陣
        n: 0 ≤ n ≤ 32

    Returns:
        D_n(B, A)，滿足 (A + d_B)^n(1_H) = A^n + D_n(B, A)
    """
    _check_cap(n)
    return ComplexMatrix(_essential_parts(B, A, n)[n])


@dataclass(frozen=True, eq=False)
class BinomialTerm:
    """
    展開中第 k 項

    Attributes:
        k: 指標
        coefficient: C(n, k)
        operator_part: (A + d_B)^k 1_H = A^k + D_k(B, A)
        matrix: T_k = (A^k + D_k)·B^{n−k}（不含係數）
    """

    k: int
    coefficient: int
    operator_part: ComplexMatrix
    matrix: ComplexMatrix

    @property
    def weighted(self) -> np.ndarray:
        return self.coefficient * self.matrix.entries


@dataclass(frozen=True, eq=False)
class BinomialExpansion:
    """Σ_k C(n,k)·T_k 與其殘差 ‖Σ − (A+B)^n‖"""

    n: int
    terms: List[BinomialTerm]
    total: ComplexMatrix
    residual_norm: float
    scale: float

    @property
    def consistent(self) -> bool:
        return self.residual_norm <= TOL.expansion_tolerance * self.scale


def expand_binomial(A: MatrixLike, B: MatrixLike, n: int) -> BinomialExpansion:
    """
    非交換二項式展開 (A+B)^n = Σ_k C(n,k)·{(A+d_B)^k 1_H}·B^{n−k}

    Args:
        A, B: 同維度方陣
        n: 0 ≤ n ≤ 32

    Returns:
        BinomialExpansion（保留每一項，並附與直接乘冪的殘差）
    """
    _check_cap(n)
    a, b = as_matrix(A), as_matrix(B)
    check_same_dim(a, b)
    parts = _essential_parts(b, a, n)

    dim = a.n
    b_powers = [np.eye(dim, dtype=np.complex128)]
    for _ in range(n):
        b_powers.append(b_powers[-1] @ b.entries)

    terms: List[BinomialTerm] = []
    total = np.zeros((dim, dim), dtype=np.complex128)
    a_power = np.eye(dim, dtype=np.complex128)
    for k in range(n + 1):
        operator_part = a_power + parts[k]
        matrix = operator_part @ b_powers[n - k]
        coefficient = math.comb(n, k)
        terms.append(
            BinomialTerm(
                k=k,
                coefficient=coefficient,
                operator_part=ComplexMatrix(operator_part),
                matrix=ComplexMatrix(matrix),
            )
        )
        total += float(coefficient) * matrix
        a_power = a_power @ a.entries

    direct = mat_power(a + b, n).entries
    residual = float(np.linalg.norm(total - direct, 2))
    scale = max(1.0, (np.linalg.norm(a.entries, 2) + np.linalg.norm(b.entries, 2)) ** n)
    logger.debug(f"二項式展開 n={n}: 殘差 {residual:.3e}，尺度 {scale:.3e}")
    return BinomialExpansion(
        n=n, terms=terms, total=ComplexMatrix(total), residual_norm=residual, scale=scale
    )
