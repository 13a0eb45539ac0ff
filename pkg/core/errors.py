#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具包例外類別
所有數值引擎共用的錯誤層級
"""

from typing import Optional


class ToolkitError(Exception):
    """NumRadX 錯誤基類"""


class InvalidMatrix(ToolkitError):
    """矩陣非方陣、含 NaN/Inf 或 JSON 結構錯誤"""


class DimensionCapExceeded(InvalidMatrix):
    """維度超過 API 上限 (n ≤ 64)"""


class DimensionMismatch(ToolkitError):
    """運算元維度不一致"""


class NotHermitian(ToolkitError):
    """矩陣不是 Hermitian"""


class NotPSD(ToolkitError):
    """矩陣不是半正定"""


class DomainError(ToolkitError):
    """純量函數在譜上沒有定義（或溢位）"""


class NoConvergence(ToolkitError):
    """迭代超過預算仍未收斂"""

    def __init__(self, message: str, estimate: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate


class CapExceeded(ToolkitError):
    """二項式展開次數超過上限 (n ≤ 32)"""


class ConsistencyError(ToolkitError):
    """數值一致性檢查失敗（實數量的虛部殘差、分解的重建誤差）"""


class ShapeMismatch(ToolkitError):
    """實例形狀與不等式描述不符"""


class InvalidParameters(ShapeMismatch):
    """參數超出描述的範圍"""


class UnknownInequality(ToolkitError):
    """登錄表中不存在的不等式 id"""


class ConditionUnsatisfiable(ToolkitError):
    """ensemble 產生器在重試上限內無法滿足條件"""


class InputFormatError(ToolkitError):
    """CLI 輸入檔案無法解析"""


# evaluate 遇到這些錯誤時不轉為 Inconclusive，而是直接拋出
CALLER_ERRORS = (ShapeMismatch, UnknownInequality)
