#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
不等式評估器
對單一實例計算 lhs、rhs、slack 與違反旗標，數值錯誤轉為 Inconclusive
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np

from utils.settings_manager import get_tolerances
from .ensembles import InstanceShape, OperatorInstance, condition_residual
from .errors import CALLER_ERRORS, ShapeMismatch, ToolkitError
from .inequalities import InequalityDescriptor, InequalityParams, Status, get_descriptor
from .linalg import is_psd

logger = logging.getLogger(__name__)

TOL = get_tolerances()

# 描述的形狀 → 可接受的實例形狀（每個實例都帶兩個狀態向量）
_ACCEPTS = {
    InstanceShape.SINGLE: {InstanceShape.SINGLE, InstanceShape.OPERATOR_STATE},
    InstanceShape.OPERATOR_STATE: {InstanceShape.SINGLE, InstanceShape.OPERATOR_STATE},
    InstanceShape.PAIR: {
        InstanceShape.PAIR,
        InstanceShape.PAIR_COMMUTING,
        InstanceShape.PAIR_REID,
        InstanceShape.PAIR_KITTANEH,
    },
    InstanceShape.PAIR_COMMUTING: {InstanceShape.PAIR_COMMUTING},
    InstanceShape.PAIR_REID: {InstanceShape.PAIR_REID},
    InstanceShape.PAIR_KITTANEH: {InstanceShape.PAIR_KITTANEH},
    InstanceShape.VECTOR_TRIPLE: {InstanceShape.VECTOR_TRIPLE},
}


def round_sig(value: Optional[float], digits: int = 12) -> Optional[float]:
    """四捨五入到有效位數（報告用）"""
    if value is None or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


@dataclass
class EvaluationReport:
    """
    一次評估的結果

    elapsed 只記錄在日誌中，不寫入 JSON。
    """

    id: str
    status: Status
    lhs: Optional[float]
    rhs: Optional[float]
    slack: Optional[float]
    tol: Optional[float]
    violated: bool
    witness: Optional[OperatorInstance]
    params: InequalityParams
    details: Dict[str, float] = field(default_factory=dict)
    inconclusive: bool = False
    error: Optional[str] = None
    elapsed: float = 0.0

    @property
    def outcome(self) -> str:
        if self.inconclusive:
            return "INCONCLUSIVE"
        return "VIOLATED" if self.violated else "HOLDS"

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "status": self.status.value,
            "outcome": self.outcome,
            "lhs": round_sig(self.lhs),
            "rhs": round_sig(self.rhs),
            "slack": round_sig(self.slack),
            "tol": round_sig(self.tol),
            "violated": self.violated,
            "inconclusive": self.inconclusive,
            "error": self.error,
            "params": self.params.to_json(),
            "details": {k: round_sig(v) for k, v in sorted(self.details.items())},
            "witness": self.witness.to_json() if self.witness is not None else None,
        }


def check_instance(descriptor: InequalityDescriptor, inst: OperatorInstance) -> None:
    """
    實例形狀與條件檢查

    Raises:
        ShapeMismatch: 形狀不符、缺少狀態向量、非半正定或條件不成立
    """
    if inst.shape not in _ACCEPTS[descriptor.shape]:
        raise ShapeMismatch(f"{descriptor.id} 需要 {descriptor.shape.value}，實例為 {inst.shape.value}")
    if descriptor.shape is InstanceShape.VECTOR_TRIPLE:
        if len(inst.vectors) != 3:
            raise ShapeMismatch(f"{descriptor.id} 需要三個向量 (x, y, e)")
        return
    if descriptor.shape is InstanceShape.OPERATOR_STATE or descriptor.shape.operator_count == 2:
        if not inst.states:
            raise ShapeMismatch(f"{descriptor.id} 需要狀態向量")
    for s in inst.states:
        if s.n != inst.dim:
            raise ShapeMismatch(f"狀態向量維度 {s.n} 與矩陣維度 {inst.dim} 不一致")
    if descriptor.requires_psd and not all(is_psd(m) for m in inst.matrices):
        raise ShapeMismatch(f"{descriptor.id} 需要半正定矩陣")
    if condition_residual(inst.shape, inst.matrices) > TOL.condition_tolerance:
        raise ShapeMismatch(f"實例不滿足 {inst.shape.value} 條件")


def evaluate(
    inequality_id: str,
    inst: OperatorInstance,
    params: Union[None, InequalityParams, Mapping[str, Any]] = None,
) -> EvaluationReport:
    """
    評估一條不等式

    Args:
        inequality_id: 登錄鍵
        inst: 實例
        params: 參數（None 時使用預設值）

    Returns:
        EvaluationReport；數值錯誤記為 Inconclusive

    Raises:
        UnknownInequality: id 不存在
        ShapeMismatch: 實例形狀或參數不符
    """
    descriptor = get_descriptor(inequality_id)
    check_instance(descriptor, inst)
    resolved = descriptor.resolve_params(params)

    start = time.perf_counter()
    try:
        outcome = descriptor.predicate(inst, resolved)
    except CALLER_ERRORS:
        raise
    except (ToolkitError, np.linalg.LinAlgError, ValueError, OverflowError) as e:
        elapsed = time.perf_counter() - start
        logger.warning(f"{descriptor.id} 無法判定 ({inst.seed_path}): {type(e).__name__}: {e}")
        return EvaluationReport(
            id=descriptor.id,
            status=descriptor.status,
            lhs=None,
            rhs=None,
            slack=None,
            tol=None,
            violated=False,
            witness=inst,
            params=resolved,
            inconclusive=True,
            error=f"{type(e).__name__}: {e}",
            elapsed=elapsed,
        )
    elapsed = time.perf_counter() - start

    lhs, rhs = float(outcome.lhs), float(outcome.rhs)
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        logger.warning(f"{descriptor.id} 結果非有限值: lhs={lhs}, rhs={rhs}")
        return EvaluationReport(
            id=descriptor.id,
            status=descriptor.status,
            lhs=None,
            rhs=None,
            slack=None,
            tol=None,
            violated=False,
            witness=inst,
            params=resolved,
            details=outcome.details,
            inconclusive=True,
            error="NonFinite: lhs or rhs is not finite",
            elapsed=elapsed,
        )

    tol = TOL.violation_tolerance * descriptor.tol_factor * max(1.0, abs(lhs), abs(rhs), outcome.scale)
    slack = rhs - lhs
    violated = slack < -tol
    logger.debug(f"{descriptor.id}: lhs={lhs:.12g}, rhs={rhs:.12g}, slack={slack:.3e} ({elapsed * 1000:.1f} ms)")
    return EvaluationReport(
        id=descriptor.id,
        status=descriptor.status,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        tol=tol,
        violated=violated,
        witness=inst,
        params=resolved,
        details=outcome.details,
        elapsed=elapsed,
    )


@dataclass(frozen=True)
class HomogeneityCheck:
    """縮放 c 後 lhs、rhs 的次數是否一致"""

    id: str
    c: float
    lhs_degree: Optional[float]
    rhs_degree: Optional[float]
    homogeneous: bool


def _degree(before: float, after: float, c: float) -> Optional[float]:
    if before == 0.0 or after == 0.0 or (before > 0) != (after > 0):
        return None
    return math.log(after / before) / math.log(c)


def check_homogeneity(
    inequality_id: str,
    inst: OperatorInstance,
    params: Union[None, InequalityParams, Mapping[str, Any]] = None,
    c: float = 2.0,
) -> HomogeneityCheck:
    """
    縮放檢查：實例乘上 c > 0 後，lhs 與 rhs 應以相同的次數縮放

    描述有 homogeneity_degree 時以它為準，否則比較估計出的兩個次數。
    """
    if c <= 0 or c == 1.0:
        raise ValueError(f"縮放因子必須為正且不等於 1: {c}")
    base = evaluate(inequality_id, inst, params)
    scaled = evaluate(inequality_id, inst.scaled(c), params)
    if base.inconclusive or scaled.inconclusive:
        return HomogeneityCheck(base.id, c, None, None, False)

    lhs_degree = _degree(base.lhs, scaled.lhs, c)
    rhs_degree = _degree(base.rhs, scaled.rhs, c)
    expected = get_descriptor(inequality_id).homogeneity_degree
    if expected is None:
        expected = lhs_degree if lhs_degree is not None else rhs_degree
    if expected is None:
        return HomogeneityCheck(base.id, c, lhs_degree, rhs_degree, True)

    factor = c ** expected
    homogeneous = bool(
        np.isclose(scaled.lhs, factor * base.lhs, rtol=1e-8, atol=1e-12 * max(1.0, factor))
        and np.isclose(scaled.rhs, factor * base.rhs, rtol=1e-8, atol=1e-12 * max(1.0, factor))
    )
    return HomogeneityCheck(base.id, c, lhs_degree, rhs_degree, homogeneous)
