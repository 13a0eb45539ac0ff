#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
稠密複矩陣核心
提供 ComplexMatrix 型別與 Hermitian 特徵分解、SVD、極分解等基本運算，
其他所有模組都經由這裡取得 ‖T‖、ℓ(T)、|T| 與 r(T)。
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np

from utils.settings_manager import get_tolerances
from .errors import (
    ConsistencyError,
    DimensionCapExceeded,
    DimensionMismatch,
    InvalidMatrix,
    NoConvergence,
    NotHermitian,
)

logger = logging.getLogger(__name__)

TOL = get_tolerances()

# 判斷向量分量「非零」的門檻（單位向量）
_PHASE_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """n×n 稠密複矩陣（建構後不可變）"""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=np.complex128, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidMatrix(f"矩陣必須是方陣，實際形狀: {arr.shape}")
        if arr.shape[0] < 1:
            raise InvalidMatrix("矩陣維度必須至少為 1")
        if arr.shape[0] > TOL.dimension_cap:
            raise DimensionCapExceeded(
                f"維度 {arr.shape[0]} 超過上限 {TOL.dimension_cap}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidMatrix("矩陣含有 NaN 或 Inf")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    # ------------------------------------------------------------------
    # 建構子
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "ComplexMatrix":
        return cls(np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> "ComplexMatrix":
        """單位算子 1_H"""
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> "ComplexMatrix":
        return cls(np.array(rows, dtype=np.complex128))

    @classmethod
    def diag(cls, values: Iterable[complex]) -> "ComplexMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=np.complex128)))

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ComplexMatrix":
        """
        由矩陣 JSON 建立

        Args:
            data: {"n": int, "entries": [[[re, im], ...], ...]}

        Returns:
            ComplexMatrix
        """
        try:
            n = int(data["n"])
            raw = np.asarray(data["entries"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidMatrix(f"矩陣 JSON 結構錯誤: {e}") from e
        if raw.shape != (n, n, 2):
            raise InvalidMatrix(f"entries 形狀應為 ({n}, {n}, 2)，實際為 {raw.shape}")
        return cls(raw[..., 0] + 1j * raw[..., 1])

    def to_json(self) -> Dict[str, Any]:
        """輸出矩陣 JSON（浮點以 repr 表示，可完整還原）"""
        return {
            "n": self.n,
            "entries": [
                [[float(z.real), float(z.imag)] for z in row] for row in self.entries
            ],
        }

    # ------------------------------------------------------------------
    # 屬性與運算子
    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> "ComplexMatrix":
        """伴隨矩陣 A*"""
        return ComplexMatrix(self.entries.conj().T)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.entries
        return self.entries.astype(dtype)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        check_same_dim(self, other)
        return ComplexMatrix(self.entries @ as_array(other))

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        check_same_dim(self, other)
        return ComplexMatrix(self.entries + as_array(other))

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        check_same_dim(self, other)
        return ComplexMatrix(self.entries - as_array(other))

    def __neg__(self) -> "ComplexMatrix":
        return ComplexMatrix(-self.entries)

    def __mul__(self, scalar: complex) -> "ComplexMatrix":
        return ComplexMatrix(self.entries * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "ComplexMatrix":
        return ComplexMatrix(self.entries / complex(scalar))

    def __repr__(self) -> str:
        return f"ComplexMatrix(n={self.n})"


MatrixLike = Union[ComplexMatrix, np.ndarray, Sequence[Sequence[complex]]]


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Hermitian 矩陣的特徵值（遞增）與單位正交特徵向量（行）"""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """V·diag(λ)·V*"""
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class SingularTriple:
    """A = U·diag(σ)·V*，σ 遞減"""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.conj().T


@dataclass(frozen=True, eq=False)
class PolarFactors:
    """A = U·|A|"""

    unitary: np.ndarray
    modulus: np.ndarray


@dataclass(frozen=True)
class GelfandEstimate:
    """Gelfand 迭代的譜半徑估計"""

    value: float
    steps: int
    converged: bool


def as_array(A: MatrixLike) -> np.ndarray:
    """取得底層 complex128 陣列（ComplexMatrix 不複製）"""
    if isinstance(A, ComplexMatrix):
        return A.entries
    return ComplexMatrix(A).entries


def as_matrix(A: MatrixLike) -> ComplexMatrix:
    if isinstance(A, ComplexMatrix):
        return A
    return ComplexMatrix(A)


def check_same_dim(A: MatrixLike, B: MatrixLike) -> None:
    a, b = np.shape(as_array(A)), np.shape(as_array(B))
    if a != b:
        raise DimensionMismatch(f"維度不一致: {a} vs {b}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


def _fix_column_phases(vectors: np.ndarray) -> np.ndarray:
    """
    固定每一行的相位：第一個非零分量為非負實數

    Returns:
        各行的相位因子（已套用到 vectors）
    """
    n = vectors.shape[1]
    phases = np.ones(n, dtype=np.complex128)
    for j in range(n):
        col = vectors[:, j]
        idx = np.flatnonzero(np.abs(col) > _PHASE_THRESHOLD)
        if idx.size:
            z = col[idx[0]]
            phases[j] = np.conj(z) / abs(z)
    vectors *= phases
    return phases


def operator_norm(A: MatrixLike) -> float:
    """‖A‖ = σ₁"""
    return float(np.linalg.norm(as_array(A), 2))


def singular_values(A: MatrixLike) -> np.ndarray:
    try:
        return np.linalg.svd(as_array(A), compute_uv=False)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"SVD 未收斂: {e}") from e


def ell(A: MatrixLike) -> float:
    """ℓ(A) = inf ‖Ax‖ = σ_n"""
    return float(singular_values(A)[-1])


def is_hermitian(A: MatrixLike, tol: Optional[float] = None) -> bool:
    a = as_array(A)
    tol = TOL.hermitian_check if tol is None else tol
    anti = a - a.conj().T
    if not np.any(anti):
        return True
    return np.linalg.norm(anti, 2) <= tol * max(1.0, np.linalg.norm(a, 2))


def is_psd(A: MatrixLike, tol: Optional[float] = None) -> bool:
    """Hermitian 且 λ_min ≥ −tol·max(1,‖A‖)"""
    a = as_array(A)
    if not is_hermitian(a):
        return False
    tol = TOL.psd_clamp if tol is None else tol
    values = np.linalg.eigvalsh((a + a.conj().T) / 2)
    return bool(values[0] >= -tol * max(1.0, float(np.max(np.abs(values)))))


def hermitian_eig(A: MatrixLike) -> HermitianEigen:
    """
    Hermitian 特徵分解（離散譜測度的原子與特徵向量）

    Args:
        A: Hermitian 矩陣（‖A − A*‖ ≤ 1e−12·max(1,‖A‖)）

    Returns:
        HermitianEigen，特徵值遞增，特徵向量相位已固定

    Raises:
        NotHermitian: A 不是 Hermitian
        NoConvergence: LAPACK 未收斂
        ConsistencyError: ‖V·diag(λ)·V* − A‖ > eig_reconstruction·max(1,‖A‖)
    """
    a = as_array(A)
    if not is_hermitian(a):
        raise NotHermitian(
            f"‖A − A*‖ = {np.linalg.norm(a - a.conj().T, 2):.3e} 超過容許值"
        )
    h = _hermitize(a)
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"Hermitian 特徵分解未收斂: {e}") from e
    _fix_column_phases(vectors)
    eig = HermitianEigen(values=_frozen(values), vectors=_frozen(vectors))

    scale = max(1.0, float(np.max(np.abs(values))))
    residual = float(np.linalg.norm(eig.reconstruct() - h, 2))
    if residual > TOL.eig_reconstruction * scale:
        raise ConsistencyError(f"特徵分解重建誤差 {residual:.3e} 超過容許值")
    return eig


def svd(A: MatrixLike) -> SingularTriple:
    """奇異值分解，右奇異向量的相位固定，左奇異向量隨之調整"""
    a = as_array(A)
    try:
        u, sigma, vh = np.linalg.svd(a)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"SVD 未收斂: {e}") from e
    v = vh.conj().T.copy()
    phases = _fix_column_phases(v)
    u = u * phases
    return SingularTriple(u=_frozen(u), sigma=_frozen(sigma), v=_frozen(v))


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def polar(A: MatrixLike) -> PolarFactors:
    """
    極分解 A = U|A|，U = W·V*、|A| = V·diag(σ)·V*

    奇異矩陣的核空間部分由 SVD 的選擇決定。
    ‖U|A| − A‖ 超過 polar_tolerance·max(1,‖A‖) 時拋出 ConsistencyError。
    """
    a = as_array(A)
    s = svd(a)
    unitary = s.u @ s.v.conj().T
    modulus = _hermitize((s.v * s.sigma) @ s.v.conj().T)

    scale = max(1.0, float(s.sigma[0]))
    residual = float(np.linalg.norm(unitary @ modulus - a, 2))
    if residual > TOL.polar_tolerance * scale:
        raise ConsistencyError(f"極分解重建誤差 {residual:.3e} 超過容許值")
    return PolarFactors(unitary=_frozen(unitary), modulus=_frozen(modulus))


def abs_op(A: MatrixLike) -> ComplexMatrix:
    """|A| = (A*A)^{1/2}"""
    return ComplexMatrix(polar(A).modulus)


def abs_adjoint(A: MatrixLike) -> ComplexMatrix:
    """|A*| = (AA*)^{1/2}"""
    s = svd(A)
    return ComplexMatrix(_hermitize((s.u * s.sigma) @ s.u.conj().T))


def aluthge(T: MatrixLike) -> ComplexMatrix:
    """Ṫ = |T|^{1/2}·U·|T|^{1/2}，U 為極分解的酉因子"""
    s = svd(T)
    root = _hermitize((s.v * np.sqrt(s.sigma)) @ s.v.conj().T)
    unitary = s.u @ s.v.conj().T
    return ComplexMatrix(root @ unitary @ root)


def mat_power(A: MatrixLike, k: int) -> ComplexMatrix:
    """A^k（重複平方），A⁰ = 1_H"""
    if k < 0:
        raise ValueError(f"次方必須非負: {k}")
    return ComplexMatrix(np.linalg.matrix_power(as_array(A), int(k)))


def spectral_radius_estimate(T: MatrixLike) -> GelfandEstimate:
    """
    Gelfand 迭代 r ≈ ‖T^{2^k}‖^{1/2^k}

    每一步以 ‖·‖ 重新正規化，只累積對數尺度。估計值恆為 r(T) 的上界；
    下界取 r(T) ≥ (|tr T^m| / n)^{1/m}。以下任一條件成立即視為收斂：
    連續兩次估計的相對差小於 gelfand_rtol，或上下界的相對差小於
    gelfand_accuracy。
    """
    x = as_array(T)
    nrm = np.linalg.norm(x, 2)
    if nrm == 0.0:
        return GelfandEstimate(value=0.0, steps=0, converged=True)

    log_norm = math.log(nrm)  # log‖T^{2^k}‖
    x = x / nrm
    estimate = nrm
    for k in range(1, TOL.gelfand_max_steps + 1):
        x = x @ x
        nrm = np.linalg.norm(x, 2)
        if nrm == 0.0:
            # 冪零
            return GelfandEstimate(value=0.0, steps=k, converged=True)
        log_norm = 2.0 * log_norm + math.log(nrm)
        x = x / nrm
        m = 2.0 ** k
        previous, estimate = estimate, math.exp(log_norm / m)
        if abs(estimate - previous) <= TOL.gelfand_rtol * max(estimate, previous):
            return GelfandEstimate(value=estimate, steps=k, converged=True)

        trace = abs(np.trace(x))
        if trace > 0.0:
            lower = math.exp((log_norm + math.log(trace) - math.log(x.shape[0])) / m)
            if estimate - lower <= TOL.gelfand_accuracy * estimate:
                return GelfandEstimate(value=estimate, steps=k, converged=True)

    return GelfandEstimate(value=estimate, steps=TOL.gelfand_max_steps, converged=False)


def spectral_radius(T: MatrixLike, strict: bool = False) -> float:
    """
    譜半徑 r(T)，精確度約 ±1e−5（可對角化的輸入）

    Args:
        T: 方陣
        strict: 未收斂時是否拋出 NoConvergence

    Returns:
        r(T) 的估計值
    """
    result = spectral_radius_estimate(T)
    if not result.converged:
        message = f"Gelfand 迭代 {result.steps} 步未收斂，估計值 {result.value:.6e}"
        if strict:
            raise NoConvergence(message, estimate=result.value)
        logger.warning(message)
    return result.value
