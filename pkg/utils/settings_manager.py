#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
設定管理器
管理 NumRadX 的數值容許值設定
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = Path(__file__).parent.parent / "config" / "toolkit.json"


class ToolkitTolerances(BaseModel):
    """所有引擎共用的容許值與迭代預算"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    # core-linalg
    eig_reconstruction: float = Field(1e-12, gt=0)
    hermitian_check: float = Field(1e-12, gt=0)
    polar_tolerance: float = Field(1e-10, gt=0)
    dimension_cap: int = Field(64, ge=1)
    gelfand_rtol: float = Field(1e-6, gt=0)
    gelfand_max_steps: int = Field(40, ge=1)
    gelfand_accuracy: float = Field(1e-5, gt=0)

    # spectral-calculus
    psd_clamp: float = Field(1e-10, ge=0)
    variance_clamp: float = Field(1e-12, ge=0)
    imaginary_tolerance: float = Field(1e-10, gt=0)

    # radius
    theta_grid: int = Field(1024, ge=8)
    refine_top: int = Field(8, ge=1)
    theta_tolerance: float = Field(1e-10, gt=0)
    boundary_window: float = Field(1e-10, ge=0)

    # noncomm-binomial
    binomial_cap: int = Field(32, ge=1)
    expansion_tolerance: float = Field(1e-9, gt=0)

    # inequality-suite
    violation_tolerance: float = Field(1e-8, gt=0)
    spectral_radius_violation_tolerance: float = Field(1e-4, gt=0)
    condition_tolerance: float = Field(1e-10, gt=0)
    max_condition_attempts: int = Field(100, ge=1)


class SettingsManager:
    """設定管理器"""

    def __init__(self, config_file: Optional[Union[str, Path]] = None):
        """
        初始化設定管理器

        Args:
            config_file: 設定檔案路徑，預設為 config/toolkit.json
        """
        self.config_file = Path(config_file) if config_file else DEFAULT_CONFIG_FILE
        self.tolerances = self._load_tolerances()

    def _load_tolerances(self) -> ToolkitTolerances:
        """載入容許值，檔案不存在時回退到預設值"""
        if not self.config_file.exists():
            logger.warning(f"設定檔案不存在，使用預設容許值: {self.config_file}")
            return ToolkitTolerances()

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                raw = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"設定檔案讀取失敗: {e}")
            return ToolkitTolerances()

        # 以 "_" 開頭的鍵是註解
        values = {k: v for k, v in raw.get("tolerances", raw).items() if not k.startswith("_")}
        try:
            tolerances = ToolkitTolerances(**values)
        except ValidationError as e:
            logger.error(f"設定值驗證失敗，使用預設容許值: {e}")
            return ToolkitTolerances()

        logger.debug(f"從 {self.config_file} 載入容許值")
        return tolerances

    def as_dict(self) -> Dict[str, Any]:
        """回傳可序列化的容許值（報告中回顯）"""
        return self.tolerances.model_dump()


@lru_cache(maxsize=1)
def get_tolerances() -> ToolkitTolerances:
    """獲取全程序共用的容許值（唯讀）"""
    return SettingsManager().tolerances
