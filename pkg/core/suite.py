#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
不等式套件執行器
對每個 id 跑隨機試驗、彙整 slack 與違反次數，並搜尋最緊或違反的見證
"""

import dataclasses
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.logger import log_suite_end, log_suite_start
from utils.settings_manager import get_tolerances
from .ensembles import compatible_ensembles, sample_instance, trial_rng
from .errors import ConditionUnsatisfiable
from .evaluator import EvaluationReport, evaluate, round_sig
from .inequalities import InequalityDescriptor, InequalityParams, Status, get_descriptor
from .models import SuiteConfig

logger = logging.getLogger(__name__)

# 整體判定的優先順序
_VERDICT_ORDER = ("FAIL", "FINDING", "PASS", "EMPTY")


def _ensemble_pool(descriptor: InequalityDescriptor, requested: Optional[Sequence[str]]) -> List[str]:
    """指定的 ensemble 與形狀不相容時，退回描述的預設值"""
    if requested:
        pool = compatible_ensembles(descriptor.shape, requested, descriptor.requires_psd)
        if pool:
            return pool
    return list(descriptor.default_ensembles)


def _override(sampled: InequalityParams, fixed: Optional[InequalityParams]) -> InequalityParams:
    if fixed is None:
        return sampled
    changes = {f.name: getattr(fixed, f.name) for f in dataclasses.fields(fixed) if getattr(fixed, f.name) is not None}
    return dataclasses.replace(sampled, **changes)


def _draw_trial(
    descriptor: InequalityDescriptor,
    rng: np.random.Generator,
    dims: Sequence[int],
    pool: Sequence[str],
    seed_path: str,
    fixed: Optional[InequalityParams] = None,
) -> EvaluationReport:
    """抽維度、ensemble、實例與參數後評估一次"""
    dim = int(dims[int(rng.integers(len(dims)))])
    ensemble = pool[int(rng.integers(len(pool)))]
    try:
        inst = sample_instance(descriptor.shape, ensemble, dim, rng, seed_path=seed_path)
    except ConditionUnsatisfiable as e:
        logger.warning(f"{descriptor.id} 第 {seed_path} 次試驗無法產生實例: {e}")
        return EvaluationReport(
            id=descriptor.id,
            status=descriptor.status,
            lhs=None,
            rhs=None,
            slack=None,
            tol=None,
            violated=False,
            witness=None,
            params=descriptor.resolve_params(fixed),
            inconclusive=True,
            error=f"{type(e).__name__}: {e}",
        )
    params = _override(descriptor.sample_params(rng), fixed)
    return evaluate(descriptor.id, inst, params)


@dataclass
class IdResult:
    """單一 id 的彙整結果；reports 依試驗編號排序"""

    descriptor: InequalityDescriptor
    ensembles: List[str]
    reports: List[EvaluationReport] = field(default_factory=list)

    @property
    def conclusive(self) -> List[Tuple[int, EvaluationReport]]:
        return [(t, r) for t, r in enumerate(self.reports) if not r.inconclusive]

    @property
    def violations(self) -> int:
        return sum(1 for r in self.reports if r.violated)

    @property
    def inconclusive(self) -> int:
        return sum(1 for r in self.reports if r.inconclusive)

    @property
    def inconclusive_errors(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for r in self.reports:
            if r.inconclusive:
                name = (r.error or "Unknown").split(":", 1)[0]
                counts[name] = counts.get(name, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def min_slack(self) -> Optional[float]:
        slacks = [r.slack for _, r in self.conclusive]
        return min(slacks) if slacks else None

    @property
    def mean_slack(self) -> Optional[float]:
        slacks = [r.slack for _, r in self.conclusive]
        return math.fsum(slacks) / len(slacks) if slacks else None

    @property
    def worst(self) -> Optional[Tuple[int, EvaluationReport]]:
        """slack 最小的試驗（相同時取編號較小者）"""
        candidates = self.conclusive
        if not candidates:
            return None
        return min(candidates, key=lambda item: (item[1].slack, item[0]))

    @property
    def verdict(self) -> str:
        if not self.conclusive:
            return "EMPTY"
        if self.violations:
            return self.descriptor.status.violation_verdict
        return "PASS"

    def to_json(self) -> Dict[str, Any]:
        worst = self.worst
        witness = None
        if worst is not None:
            trial, report = worst
            # 見證保留完整 repr 以便重現
            witness = {
                "trial": trial,
                "lhs": report.lhs,
                "rhs": report.rhs,
                "slack": report.slack,
                "params": report.params.to_json(),
                "details": {k: v for k, v in sorted(report.details.items())},
                "instance": report.witness.to_json(),
            }
        return {
            "id": self.descriptor.id,
            "status": self.descriptor.status.value,
            "statement": self.descriptor.statement,
            "shape": self.descriptor.shape.value,
            "inhomogeneous": self.descriptor.inhomogeneous,
            "verdict": self.verdict,
            "ensembles": list(self.ensembles),
            "trials": len(self.reports),
            "evaluated": len(self.conclusive),
            "violations": self.violations,
            "inconclusive": self.inconclusive,
            "inconclusive_errors": self.inconclusive_errors,
            "min_slack": round_sig(self.min_slack),
            "mean_slack": round_sig(self.mean_slack),
            "worst_witness": witness,
        }


@dataclass
class SuiteReport:
    """套件報告；結果依 id 排序"""

    config: SuiteConfig
    results: List[IdResult]

    @property
    def verdict(self) -> str:
        verdicts = {r.verdict for r in self.results}
        for candidate in _VERDICT_ORDER:
            if candidate in verdicts:
                return candidate
        return "EMPTY"

    @property
    def failed(self) -> bool:
        return self.verdict == "FAIL"

    def result(self, inequality_id: str) -> IdResult:
        key = get_descriptor(inequality_id).id
        for r in self.results:
            if r.descriptor.id == key:
                return r
        raise KeyError(inequality_id)

    def to_json(self) -> Dict[str, Any]:
        return {
            "seed": self.config.seed,
            "trials": self.config.trials,
            "dims": list(self.config.dims),
            "ensembles": list(self.config.ensembles) if self.config.ensembles is not None else None,
            "verdict": self.verdict,
            "toolkit_tolerances": get_tolerances().model_dump(),
            "results": [r.to_json() for r in self.results],
        }


def run_id(descriptor: InequalityDescriptor, config: SuiteConfig) -> IdResult:
    """
    對單一 id 執行 config.trials 次試驗

    第 t 次試驗的亂數流只由 (seed, id, t) 決定，因此可平行執行。
    """
    pool = _ensemble_pool(descriptor, config.ensembles)

    def trial(t: int) -> EvaluationReport:
        rng = trial_rng(config.seed, descriptor.id, t)
        return _draw_trial(descriptor, rng, config.dims, pool, f"{config.seed}/{descriptor.id}/{t}")

    if config.workers > 1 and config.trials > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            reports = list(executor.map(trial, range(config.trials)))
    else:
        reports = [trial(t) for t in range(config.trials)]

    result = IdResult(descriptor=descriptor, ensembles=pool, reports=reports)
    logger.info(
        f"{descriptor.id}: {result.verdict}，違反 {result.violations}/{config.trials}，"
        f"無法判定 {result.inconclusive}"
    )
    return result


def run_suite(config: SuiteConfig) -> SuiteReport:
    """
    執行不等式套件

    Args:
        config: 套件設定（id 已驗證）

    Returns:
        SuiteReport；同一設定的 JSON 逐位元組相同
    """
    start = time.perf_counter()
    log_suite_start(config.seed, len(config.ids), config.trials)
    descriptors = sorted((get_descriptor(i) for i in config.ids), key=lambda d: d.id)
    report = SuiteReport(config=config, results=[run_id(d, config) for d in descriptors])
    log_suite_end(report.verdict, time.perf_counter() - start)
    return report


def tightness_search(
    inequality_id: str,
    ensemble: Optional[str],
    dims: Sequence[int],
    budget: int,
    rng: np.random.Generator,
    params: Optional[InequalityParams] = None,
) -> Optional[EvaluationReport]:
    """
    在隨機實例中搜尋最緊的見證

    established：|slack| 最小者（最接近等號）；
    paper-novel / as-printed：若有違反則取 slack 最負者，否則同 established。

    Args:
        inequality_id: 登錄鍵
        ensemble: ensemble（None 時用描述的預設值）
        dims: 維度清單
        budget: 試驗次數
        rng: 亂數產生器
        params: 固定的參數（其餘欄位隨機抽樣）

    Returns:
        最佳的 EvaluationReport；沒有可判定的試驗時為 None
    """
    descriptor = get_descriptor(inequality_id)
    pool = [ensemble] if ensemble else list(descriptor.default_ensembles)
    logger.info(f"搜尋 {descriptor.id}: ensemble={pool}, dims={list(dims)}, budget={budget}")

    closest: Optional[EvaluationReport] = None
    most_violated: Optional[EvaluationReport] = None
    for t in range(budget):
        report = _draw_trial(descriptor, rng, dims, pool, f"search/{descriptor.id}/{t}", fixed=params)
        if report.inconclusive:
            continue
        if closest is None or abs(report.slack) < abs(closest.slack):
            closest = report
        if report.violated and (most_violated is None or report.slack < most_violated.slack):
            most_violated = report

    if descriptor.status is not Status.ESTABLISHED and most_violated is not None:
        logger.info(f"{descriptor.id} 找到違反見證: slack={most_violated.slack:.6g}")
        return most_violated
    if closest is None:
        logger.warning(f"{descriptor.id} 在 {budget} 次試驗中沒有可判定的結果")
    return closest
