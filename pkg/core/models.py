#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
報告與設定的資料模型
這些 pydantic 模型定義 CLI 輸出的 JSON 結構，schemas/ 下的檔案由它們產生
"""

import json
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .ensembles import ALL_ENSEMBLES, MAX_DIM, MIN_DIM
from .inequalities import canonical_id, list_ids, REGISTRY

# novel 的正式名稱為 paper-novel；--ids 與 profile 仍接受 novel
StatusName = Literal["established", "paper-novel", "as-printed"]


class MatrixModel(BaseModel):
    """{"n": int, "entries": [[[re, im], ...], ...]}"""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    entries: List[List[List[float]]]


class VectorModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    entries: List[List[float]]


class InstanceModel(BaseModel):
    """實例（見證）的完整序列化"""

    model_config = ConfigDict(extra="forbid")

    shape: str
    ensemble: str
    seed_path: str
    dim: int
    matrices: List[MatrixModel]
    states: List[VectorModel]
    vectors: List[List[List[float]]]


class EvaluationReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    status: StatusName = Field(description="established | paper-novel | as-printed")
    outcome: str
    lhs: Optional[float]
    rhs: Optional[float]
    slack: Optional[float]
    tol: Optional[float]
    violated: bool
    inconclusive: bool
    error: Optional[str]
    params: Dict[str, Any]
    details: Dict[str, Optional[float]]
    witness: Optional[InstanceModel]


class WitnessModel(BaseModel):
    """某個 id 中 slack 最小的試驗"""

    model_config = ConfigDict(extra="forbid")

    trial: int
    lhs: float
    rhs: float
    slack: float
    params: Dict[str, Any]
    details: Dict[str, Optional[float]]
    instance: InstanceModel


class IdResultModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    status: StatusName = Field(description="established | paper-novel | as-printed")
    statement: str
    shape: str
    inhomogeneous: bool
    verdict: str
    ensembles: List[str]
    trials: int
    evaluated: int
    violations: int
    inconclusive: int
    inconclusive_errors: Dict[str, int]
    min_slack: Optional[float]
    mean_slack: Optional[float]
    worst_witness: Optional[WitnessModel]


class SuiteReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int
    trials: int
    dims: List[int]
    ensembles: Optional[List[str]]
    verdict: str
    toolkit_tolerances: Dict[str, Any]
    results: List[IdResultModel]


class ExpansionTermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int
    coefficient: int
    matrix: MatrixModel


class ExpansionReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    n: int
    terms: List[ExpansionTermModel]
    total: MatrixModel = Field(alias="sum")
    residual_norm: float


class SuiteConfig(BaseModel):
    """run_suite 的設定（CLI 參數與套件設定檔都轉成這個模型）"""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(42, ge=0)
    ids: List[str] = Field(default_factory=list_ids)
    dims: List[int] = Field(default_factory=lambda: list(range(2, 9)))
    trials: int = Field(100, ge=0)
    ensembles: Optional[List[str]] = None
    workers: int = Field(1, ge=1)

    @field_validator("ids")
    @classmethod
    def _known_ids(cls, value: List[str]) -> List[str]:
        resolved = []
        for item in value:
            key = canonical_id(item)
            if key not in REGISTRY:
                raise ValueError(f"unknown inequality id: {item}")
            if key not in resolved:
                resolved.append(key)
        return resolved

    @field_validator("dims")
    @classmethod
    def _dims_in_range(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("dims must not be empty")
        for d in value:
            if not MIN_DIM <= d <= MAX_DIM:
                raise ValueError(f"dimension {d} outside [{MIN_DIM}, {MAX_DIM}]")
        return sorted(set(value))

    @field_validator("ensembles")
    @classmethod
    def _known_ensembles(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        if value is None:
            return None
        unknown = [e for e in value if e not in ALL_ENSEMBLES]
        if unknown:
            raise ValueError(f"unknown ensembles: {', '.join(unknown)}")
        return value


SCHEMA_MODELS = {
    "suite": SuiteReportModel,
    "evaluation": EvaluationReportModel,
    "expansion": ExpansionReportModel,
}


def dump_json(model: BaseModel) -> str:
    """以 Python 的 float repr 輸出（位元組可重現）"""
    data = model.model_dump(mode="json", by_alias=True)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def schema_json(kind: str) -> str:
    schema = SCHEMA_MODELS[kind].model_json_schema(by_alias=True)
    return json.dumps(schema, indent=2, ensure_ascii=False, sort_keys=True) + "\n"
