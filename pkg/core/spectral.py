#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
譜演算模組
純量函數作用在 Hermitian 半正定矩陣上、二次型、Čebyšev 泛函（內積形式與雙重和形式）
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from utils.settings_manager import get_tolerances
from .errors import ConsistencyError, DimensionMismatch, DomainError, InvalidMatrix, NotPSD
from .linalg import ComplexMatrix, MatrixLike, as_array, hermitian_eig

logger = logging.getLogger(__name__)

TOL = get_tolerances()

_UNIT_TOLERANCE = 1e-12


class FnKind(Enum):
    """純量函數種類"""
    POWER = "power"
    POLY = "poly"
    EXP = "exp"
    LOG1P = "log1p"
    SQRT_OF = "sqrt_of"
    IDENTITY = "identity"
    CONST = "const"


@dataclass(frozen=True)
class ScalarFn:
    """
    [0,∞) 上的純量函數 t ↦ f(t)

    0⁰ 定義為 1，因此 Power(0) 與 Constant(1) 相同。
    """

    kind: FnKind
    alpha: float = 0.0
    coeffs: Tuple[float, ...] = ()
    c: float = 0.0
    inner: Optional["ScalarFn"] = None

    def __post_init__(self):
        if self.kind is FnKind.POWER and self.alpha < 0:
            raise DomainError(f"Power 的指數必須非負: {self.alpha}")
        if self.kind is FnKind.SQRT_OF and self.inner is None:
            raise DomainError("SqrtOf 需要內層函數")
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))

    # ------------------------------------------------------------------
    # 建構子
    # ------------------------------------------------------------------
    @classmethod
    def power(cls, alpha: float) -> "ScalarFn":
        return cls(FnKind.POWER, alpha=float(alpha))

    @classmethod
    def poly(cls, coeffs: Sequence[float]) -> "ScalarFn":
        """多項式，係數由常數項開始遞增"""
        return cls(FnKind.POLY, coeffs=tuple(coeffs))

    @classmethod
    def exp(cls) -> "ScalarFn":
        return cls(FnKind.EXP)

    @classmethod
    def log1p(cls) -> "ScalarFn":
        return cls(FnKind.LOG1P)

    @classmethod
    def sqrt_of(cls, inner: "ScalarFn") -> "ScalarFn":
        return cls(FnKind.SQRT_OF, inner=inner)

    @classmethod
    def identity(cls) -> "ScalarFn":
        return cls(FnKind.IDENTITY)

    @classmethod
    def const(cls, c: float) -> "ScalarFn":
        return cls(FnKind.CONST, c=float(c))

    # ------------------------------------------------------------------
    # 求值
    # ------------------------------------------------------------------
    def __call__(self, t) -> np.ndarray:
        """
        在 t（純量或陣列，t ≥ 0）上求值

        Raises:
            DomainError: SqrtOf 的內層為負，或結果溢位
        """
        t = np.asarray(t, dtype=np.float64)
        kind = self.kind

        if kind is FnKind.POWER:
            if self.alpha == 0.0:
                value = np.ones_like(t)
            else:
                value = np.power(np.maximum(t, 0.0), self.alpha)
        elif kind is FnKind.POLY:
            value = np.polynomial.polynomial.polyval(t, self.coeffs) if self.coeffs else np.zeros_like(t)
        elif kind is FnKind.EXP:
            with np.errstate(over="ignore"):
                value = np.exp(t)
        elif kind is FnKind.LOG1P:
            value = np.log1p(t)
        elif kind is FnKind.SQRT_OF:
            inner = self.inner(t)
            if np.any(inner < 0):
                raise DomainError(f"SqrtOf 的內層函數在譜上為負: min = {np.min(inner):.3e}")
            value = np.sqrt(inner)
        elif kind is FnKind.IDENTITY:
            value = t.copy()
        else:
            value = np.full_like(t, self.c)

        if not np.all(np.isfinite(value)):
            raise DomainError(f"{self.describe()} 在 t ≤ {np.max(t):.6g} 上溢位")
        return value

    def describe(self) -> str:
        """簡短文字表示（報告與日誌用）"""
        if self.kind is FnKind.POWER:
            return f"t^{self.alpha:g}"
        if self.kind is FnKind.POLY:
            return f"poly{list(self.coeffs)}"
        if self.kind is FnKind.SQRT_OF:
            return f"sqrt({self.inner.describe()})"
        if self.kind is FnKind.CONST:
            return f"const({self.c:g})"
        return self.kind.value

    # ------------------------------------------------------------------
    # JSON
    # ------------------------------------------------------------------
    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind is FnKind.POWER:
            data["alpha"] = self.alpha
        elif self.kind is FnKind.POLY:
            data["coeffs"] = list(self.coeffs)
        elif self.kind is FnKind.SQRT_OF:
            data["inner"] = self.inner.to_json()
        elif self.kind is FnKind.CONST:
            data["c"] = self.c
        return data

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ScalarFn":
        try:
            kind = FnKind(data["kind"])
            if kind is FnKind.POWER:
                return cls.power(float(data["alpha"]))
            if kind is FnKind.POLY:
                return cls.poly([float(a) for a in data["coeffs"]])
            if kind is FnKind.SQRT_OF:
                return cls.sqrt_of(cls.from_json(data["inner"]))
            if kind is FnKind.CONST:
                return cls.const(float(data["c"]))
            return cls(kind)
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"ScalarFn JSON 無法解析: {data!r} ({e})") from e


@dataclass(frozen=True)
class PowerPair:
    """(f, g) = (t^α, t^{1−α})，滿足 f(t)g(t) = t"""

    alpha: float
    f: ScalarFn = field(init=False)
    g: ScalarFn = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise DomainError(f"α 必須在 [0, 1]: {self.alpha}")
        object.__setattr__(self, "f", ScalarFn.power(self.alpha))
        object.__setattr__(self, "g", ScalarFn.power(1.0 - self.alpha))


@dataclass(frozen=True, eq=False)
class StateVector:
    """單位向量 x（‖x‖ = 1，容許 1e−12）"""

    x: np.ndarray

    def __post_init__(self):
        arr = np.array(self.x, dtype=np.complex128, copy=True).reshape(-1)
        if arr.size < 1 or not np.all(np.isfinite(arr)):
            raise InvalidMatrix("狀態向量必須非空且有限")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > _UNIT_TOLERANCE:
            raise InvalidMatrix(f"狀態向量必須為單位向量，‖x‖ = {norm:.15g}")
        arr.setflags(write=False)
        object.__setattr__(self, "x", arr)

    @classmethod
    def normalized(cls, v) -> "StateVector":
        """將任意非零向量正規化"""
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise InvalidMatrix("零向量無法正規化")
        return cls(v / norm)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "entries": [[float(z.real), float(z.imag)] for z in self.x]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "StateVector":
        try:
            raw = np.asarray(data["entries"], dtype=np.float64)
            n = int(data["n"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidMatrix(f"狀態向量 JSON 結構錯誤: {e}") from e
        if raw.shape != (n, 2):
            raise InvalidMatrix(f"entries 形狀應為 ({n}, 2)，實際為 {raw.shape}")
        return cls(raw[:, 0] + 1j * raw[:, 1])


def _state(x) -> np.ndarray:
    return x.x if isinstance(x, StateVector) else StateVector(x).x


def _psd_eig(A: MatrixLike):
    """特徵分解並將 [−clamp, 0) 的特徵值截斷為 0"""
    eig = hermitian_eig(A)
    values = eig.values
    scale = max(1.0, float(np.max(np.abs(values))))
    floor = -TOL.psd_clamp * scale
    if values[0] < floor:
        raise NotPSD(f"最小特徵值 {values[0]:.6e} < {floor:.3e}")
    if values[0] < 0.0:
        logger.debug(f"截斷負特徵值 {values[0]:.3e}")
    return np.maximum(values, 0.0), eig.vectors


def apply_fn(f: ScalarFn, A: MatrixLike) -> ComplexMatrix:
    """
    函數演算 f(A) = V·diag(f(λ_i))·V*

    Args:
        f: 純量函數
        A: Hermitian 半正定矩陣

    Returns:
        f(A)，已對稱化為 Hermitian
    """
    values, vectors = _psd_eig(A)
    fx = f(values)
    m = (vectors * fx) @ vectors.conj().T
    return ComplexMatrix((m + m.conj().T) / 2)


def spectral_measure(A: MatrixLike, x) -> Tuple[np.ndarray, np.ndarray]:
    """
    A 關於 x 的離散譜測度

    Returns:
        (原子 λ_i, 質量 p_i = |⟨x, v_i⟩|²)
    """
    values, vectors = _psd_eig(A)
    v = _state(x)
    if v.shape[0] != vectors.shape[0]:
        raise DimensionMismatch(f"向量維度 {v.shape[0]} 與矩陣維度 {vectors.shape[0]} 不一致")
    masses = np.abs(vectors.conj().T @ v) ** 2
    return values, masses


def qform(M: MatrixLike, x) -> complex:
    """⟨Mx, x⟩"""
    m = as_array(M)
    v = _state(x)
    if v.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"向量維度 {v.shape[0]} 與矩陣維度 {m.shape[0]} 不一致")
    return complex(np.vdot(v, m @ v))


def _real(z: complex, scale: float, what: str) -> float:
    if abs(z.imag) > TOL.imaginary_tolerance * max(1.0, scale):
        raise ConsistencyError(f"{what} 的虛部 {z.imag:.3e} 超過容許值")
    return float(z.real)


def _cheb_parts(f: ScalarFn, g: ScalarFn, A: MatrixLike, x) -> Tuple[float, float]:
    """(C(f,g;A;x), 相減前兩項的量級)"""
    fa = apply_fn(f, A)
    ga = apply_fn(g, A)
    fx = qform(fa, x)
    gx = qform(ga, x)
    fgx = qform(fa @ ga, x)
    scale = max(1.0, abs(fgx), abs(fx * gx))
    return _real(fgx - fx * gx, scale, "Čebyšev 泛函"), scale


def cheb_functional(f: ScalarFn, g: ScalarFn, A: MatrixLike, x) -> float:
    """C(f,g;A;x) = ⟨f(A)g(A)x,x⟩ − ⟨f(A)x,x⟩⟨g(A)x,x⟩"""
    return _cheb_parts(f, g, A, x)[0]


def cheb_double_sum(f: ScalarFn, g: ScalarFn, A: MatrixLike, x) -> float:
    """½·Σ_{i,j} (f(λ_i)−f(λ_j))(g(λ_i)−g(λ_j))·p_i·p_j"""
    atoms, masses = spectral_measure(A, x)
    fv = f(atoms)
    gv = g(atoms)
    df = fv[:, None] - fv[None, :]
    dg = gv[:, None] - gv[None, :]
    return float(0.5 * np.einsum("ij,ij,i,j->", df, dg, masses, masses))


def variance(f: ScalarFn, A: MatrixLike, x) -> float:
    """
    C(f,f;A;x)，相減前量級的 variance_clamp 倍以內的負值截斷為 0

    Raises:
        ConsistencyError: 截斷後仍為負
    """
    value, scale = _cheb_parts(f, f, A, x)
    if value >= 0.0:
        return value
    if value >= -TOL.variance_clamp * scale:
        return 0.0
    raise ConsistencyError(f"變異數為負: C(f,f)={value:.3e}（量級 {scale:.3e}）")


def pre_gruss_slack(f: ScalarFn, g: ScalarFn, A: MatrixLike, x) -> float:
    """C(f,f)^{1/2}·C(g,g)^{1/2} − |C(f,g)|"""
    vf = variance(f, A, x)
    vg = variance(g, A, x)
    cfg = cheb_functional(f, g, A, x)
    return float(np.sqrt(vf) * np.sqrt(vg) - abs(cfg))
