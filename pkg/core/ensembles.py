#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
隨機實例產生器
以 ensemble 將「對所有 T ∈ B(H)」的量詞具體化為可重現的隨機宇宙
"""

import logging
import zlib
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.settings_manager import get_tolerances
from .errors import ConditionUnsatisfiable, InvalidMatrix, ShapeMismatch
from .linalg import ComplexMatrix, MatrixLike, abs_op, as_array, is_hermitian, operator_norm
from .spectral import StateVector

logger = logging.getLogger(__name__)

TOL = get_tolerances()

MIN_DIM = 2
MAX_DIM = 16


class InstanceShape(Enum):
    """實例形狀"""
    SINGLE = "single"
    OPERATOR_STATE = "operator+state"
    PAIR = "pair"
    PAIR_COMMUTING = "pair-commuting"
    PAIR_REID = "pair-reid"
    PAIR_KITTANEH = "pair-kittaneh"
    VECTOR_TRIPLE = "vector-triple"

    @property
    def operator_count(self) -> int:
        if self is InstanceShape.VECTOR_TRIPLE:
            return 0
        if self in (InstanceShape.SINGLE, InstanceShape.OPERATOR_STATE):
            return 1
        return 2


# 一般形狀可用的 ensemble；條件形狀各自只有一個產生器
BASIC_ENSEMBLES = ("ginibre", "hermitian", "psd", "unitary", "contraction", "jordan")

SHAPE_ENSEMBLES: Dict[InstanceShape, Tuple[str, ...]] = {
    InstanceShape.SINGLE: BASIC_ENSEMBLES,
    InstanceShape.OPERATOR_STATE: BASIC_ENSEMBLES,
    InstanceShape.PAIR: BASIC_ENSEMBLES,
    InstanceShape.PAIR_COMMUTING: ("commuting",),
    InstanceShape.PAIR_REID: ("reid",),
    InstanceShape.PAIR_KITTANEH: ("kittaneh",),
    InstanceShape.VECTOR_TRIPLE: ("vectors",),
}

ALL_ENSEMBLES = BASIC_ENSEMBLES + ("commuting", "reid", "kittaneh", "vectors")


@dataclass(frozen=True, eq=False)
class OperatorInstance:
    """
    一次試驗的輸入

    Attributes:
        shape: 實例形狀
        matrices: 0–2 個矩陣
        states: 單位向量 x, y
        vectors: vector-triple 的 (x, y, e)，x, y 不必為單位向量
        ensemble: ensemble 標籤
        seed_path: 可重現此實例的種子路徑
    """

    shape: InstanceShape
    matrices: Tuple[ComplexMatrix, ...] = ()
    states: Tuple[StateVector, ...] = ()
    vectors: Tuple[np.ndarray, ...] = ()
    ensemble: str = "custom"
    seed_path: str = ""

    def __post_init__(self):
        if len(self.matrices) != self.shape.operator_count:
            raise ShapeMismatch(
                f"形狀 {self.shape.value} 需要 {self.shape.operator_count} 個矩陣，實際 {len(self.matrices)}"
            )
        frozen = []
        for v in self.vectors:
            arr = np.array(v, dtype=np.complex128, copy=True).reshape(-1)
            arr.setflags(write=False)
            frozen.append(arr)
        object.__setattr__(self, "vectors", tuple(frozen))

    @property
    def dim(self) -> int:
        if self.matrices:
            return self.matrices[0].n
        if self.vectors:
            return self.vectors[0].shape[0]
        return self.states[0].n if self.states else 0

    @property
    def A(self) -> ComplexMatrix:
        return self.matrices[0]

    @property
    def B(self) -> ComplexMatrix:
        return self.matrices[1]

    @property
    def x(self) -> StateVector:
        return self.states[0]

    @property
    def y(self) -> StateVector:
        return self.states[1] if len(self.states) > 1 else self.states[0]

    def scaled(self, c: float) -> "OperatorInstance":
        """所有矩陣（vector-triple 則為 x, y）乘上 c，狀態不變"""
        vectors = self.vectors
        if self.shape is InstanceShape.VECTOR_TRIPLE:
            vectors = (vectors[0] * c, vectors[1] * c, vectors[2])
        return OperatorInstance(
            shape=self.shape,
            matrices=tuple(m * c for m in self.matrices),
            states=self.states,
            vectors=vectors,
            ensemble=self.ensemble,
            seed_path=self.seed_path,
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "shape": self.shape.value,
            "ensemble": self.ensemble,
            "seed_path": self.seed_path,
            "dim": self.dim,
            "matrices": [m.to_json() for m in self.matrices],
            "states": [s.to_json() for s in self.states],
            "vectors": [[[float(z.real), float(z.imag)] for z in v] for v in self.vectors],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "OperatorInstance":
        try:
            shape = InstanceShape(data["shape"])
            matrices = tuple(ComplexMatrix.from_json(m) for m in data.get("matrices", []))
            states = tuple(StateVector.from_json(s) for s in data.get("states", []))
            vectors = tuple(
                np.asarray(v, dtype=np.float64) @ np.array([1.0, 1j]) for v in data.get("vectors", [])
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidMatrix(f"實例 JSON 結構錯誤: {e}") from e
        return cls(
            shape=shape,
            matrices=matrices,
            states=states,
            vectors=vectors,
            ensemble=data.get("ensemble", "custom"),
            seed_path=data.get("seed_path", ""),
        )


def trial_rng(seed: int, inequality_id: str, trial: int) -> np.random.Generator:
    """
    (主種子, id, 試驗編號) 決定的獨立亂數流

    與執行順序無關，第 t 次試驗永遠相同。
    """
    key = zlib.crc32(inequality_id.encode("utf-8"))
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(key, int(trial)))
    return np.random.Generator(np.random.PCG64(sequence))


# ----------------------------------------------------------------------
# 基本 ensemble
# ----------------------------------------------------------------------
def _scale(rng: np.random.Generator) -> float:
    """對數均勻的整體尺度 [¼, 4]"""
    return float(np.exp(rng.uniform(np.log(0.25), np.log(4.0))))


def _gaussian(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def _unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar 酉矩陣：QR 並修正 R 對角線的相位"""
    q, r = np.linalg.qr(_gaussian(rng, dim))
    d = np.diag(r)
    return q * (d / np.abs(d))


def _hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = _gaussian(rng, dim) * _scale(rng)
    return (g + g.conj().T) / 2


def _psd(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = _gaussian(rng, dim) * np.sqrt(_scale(rng) / dim)
    a = g.conj().T @ g
    return (a + a.conj().T) / 2


def _jordan(rng: np.random.Generator, dim: int) -> np.ndarray:
    j = np.eye(dim, k=1, dtype=np.complex128)
    j *= rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    if rng.random() < 0.5:
        j = j + 1e-3 * _gaussian(rng, dim)
    return j


def _basic(ensemble: str, rng: np.random.Generator, dim: int) -> np.ndarray:
    if ensemble == "ginibre":
        return _gaussian(rng, dim) * _scale(rng)
    if ensemble == "hermitian":
        return _hermitian(rng, dim)
    if ensemble == "psd":
        return _psd(rng, dim)
    if ensemble == "unitary":
        return _unitary(rng, dim)
    if ensemble == "contraction":
        g = _gaussian(rng, dim)
        return g / np.linalg.norm(g, 2) * rng.uniform(0.5, 1.0)
    if ensemble == "jordan":
        return _jordan(rng, dim)
    raise ShapeMismatch(f"未知的 ensemble: {ensemble}")


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector.normalized(v)


# ----------------------------------------------------------------------
# 條件 ensemble
# ----------------------------------------------------------------------
def _commuting(rng: np.random.Generator, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    a = _hermitian(rng, dim)
    norm = max(1.0, np.linalg.norm(a, 2))
    c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    b = c[0] * np.eye(dim) + c[1] * a + c[2] * (a @ a) / norm
    return a, b


def _reid(rng: np.random.Generator, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    a = _psd(rng, dim) + 0.5 * np.eye(dim)
    s = _hermitian(rng, dim)
    b = np.linalg.solve(a, s)
    return a, b


def _kittaneh(rng: np.random.Generator, dim: int) -> Tuple[np.ndarray, np.ndarray]:
    d = _psd(rng, dim) + 0.5 * np.eye(dim)
    u = _unitary(rng, dim)
    s = _hermitian(rng, dim)
    return u @ d, np.linalg.solve(d, s)


def condition_residual(shape: InstanceShape, matrices: Sequence[MatrixLike]) -> float:
    """
    條件旗標的相對殘差（0 表示精確成立）

    commuting: ‖AB − BA‖；reid: ‖AB − (AB)*‖ 並要求 A 半正定；
    kittaneh: ‖|A|B − B*|A|‖，皆除以 max(1, ‖A‖·‖B‖)。
    """
    if shape not in (InstanceShape.PAIR_COMMUTING, InstanceShape.PAIR_REID, InstanceShape.PAIR_KITTANEH):
        return 0.0
    a, b = as_array(matrices[0]), as_array(matrices[1])
    scale = max(1.0, operator_norm(a) * operator_norm(b))
    if shape is InstanceShape.PAIR_COMMUTING:
        residual = np.linalg.norm(a @ b - b @ a, 2)
    elif shape is InstanceShape.PAIR_REID:
        if not is_hermitian(a) or np.linalg.eigvalsh((a + a.conj().T) / 2)[0] < -TOL.condition_tolerance * scale:
            return float("inf")
        ab = a @ b
        residual = np.linalg.norm(ab - ab.conj().T, 2)
    else:
        modulus = as_array(abs_op(a))
        residual = np.linalg.norm(modulus @ b - b.conj().T @ modulus, 2)
    return float(residual / scale)


def sample_instance(
    shape: InstanceShape,
    ensemble: str,
    dim: int,
    rng: np.random.Generator,
    seed_path: str = "",
) -> OperatorInstance:
    """
    產生隨機實例

    Args:
        shape: 實例形狀
        ensemble: ensemble 標籤（必須與形狀相容）
        dim: 維度 [2, 16]
        rng: 亂數產生器
        seed_path: 記錄在實例中的種子路徑

    Returns:
        OperatorInstance，條件旗標已驗證

    Raises:
        ShapeMismatch: ensemble 與形狀不相容或維度超出範圍
        ConditionUnsatisfiable: 重試上限內無法滿足條件
    """
    if not MIN_DIM <= dim <= MAX_DIM:
        raise ShapeMismatch(f"維度必須在 [{MIN_DIM}, {MAX_DIM}]: {dim}")
    if ensemble not in SHAPE_ENSEMBLES[shape]:
        raise ShapeMismatch(f"ensemble {ensemble} 不適用於形狀 {shape.value}")

    if shape is InstanceShape.VECTOR_TRIPLE:
        x = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) * _scale(rng)
        y = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) * _scale(rng)
        e = random_state(rng, dim).x
        return OperatorInstance(
            shape=shape, vectors=(x, y, e), ensemble=ensemble, seed_path=seed_path
        )

    generators = {"commuting": _commuting, "reid": _reid, "kittaneh": _kittaneh}
    for attempt in range(1, TOL.max_condition_attempts + 1):
        if ensemble in generators:
            matrices = generators[ensemble](rng, dim)
        else:
            matrices = tuple(_basic(ensemble, rng, dim) for _ in range(shape.operator_count))
        residual = condition_residual(shape, matrices)
        if residual <= TOL.condition_tolerance:
            break
        logger.debug(f"{ensemble} 條件殘差 {residual:.3e}，第 {attempt} 次重試")
    else:
        raise ConditionUnsatisfiable(
            f"{ensemble} 在 {TOL.max_condition_attempts} 次嘗試內無法滿足條件"
        )

    states = (random_state(rng, dim), random_state(rng, dim))
    return OperatorInstance(
        shape=shape,
        matrices=tuple(ComplexMatrix(m) for m in matrices),
        states=states,
        ensemble=ensemble,
        seed_path=seed_path,
    )


def conjugate_instance(inst: OperatorInstance, U: MatrixLike) -> OperatorInstance:
    """酉共軛 A → U*AU、x → U*x（套用到所有矩陣與向量）"""
    u = as_array(U)
    uh = u.conj().T
    return OperatorInstance(
        shape=inst.shape,
        matrices=tuple(ComplexMatrix(uh @ m.entries @ u) for m in inst.matrices),
        states=tuple(StateVector.normalized(uh @ s.x) for s in inst.states),
        vectors=tuple(uh @ v for v in inst.vectors),
        ensemble=inst.ensemble,
        seed_path=inst.seed_path,
    )


def compatible_ensembles(shape: InstanceShape, requested: Optional[Sequence[str]], requires_psd: bool) -> List[str]:
    """requested 中與形狀相容的 ensemble（保持原順序）"""
    allowed = SHAPE_ENSEMBLES[shape]
    if requires_psd and shape in (InstanceShape.SINGLE, InstanceShape.OPERATOR_STATE, InstanceShape.PAIR):
        allowed = ("psd",)
    if not requested:
        return list(allowed)
    return [e for e in requested if e in allowed]
