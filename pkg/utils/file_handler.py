#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
檔案處理工具
統一管理 CLI 的檔案讀寫（矩陣 JSON、報告、CSV）
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from core.errors import InputFormatError, InvalidMatrix
from core.linalg import ComplexMatrix

logger = logging.getLogger(__name__)


class FileHandler:
    """檔案處理工具"""

    def __init__(self, encoding: str = 'utf-8'):
        """
        初始化檔案處理工具

        Args:
            encoding: 文字檔編碼
        """
        self.encoding = encoding

    def load_json_data(self, file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        載入JSON資料

        Args:
            file_path: 檔案路徑

        Returns:
            JSON資料

        Raises:
            InputFormatError: 檔案不存在或不是合法 JSON
        """
        file_path = Path(file_path)
        try:
            with open(file_path, 'r', encoding=self.encoding) as f:
                return json.load(f)
        except FileNotFoundError as e:
            logger.debug(f"檔案不存在: {file_path}")
            raise InputFormatError(f"file not found: {file_path}") from e
        except (OSError, json.JSONDecodeError, UnicodeDecodeError) as e:
            logger.debug(f"JSON載入失敗: {e}")
            raise InputFormatError(f"cannot parse {file_path}: {e}") from e

    def load_matrix(self, file_path: Union[str, Path]) -> ComplexMatrix:
        """載入矩陣 JSON（{"n": ..., "entries": [[[re, im], ...], ...]}）"""
        data = self.load_json_data(file_path)
        try:
            matrix = ComplexMatrix.from_json(data)
        except InvalidMatrix as e:
            logger.debug(f"矩陣格式錯誤: {file_path}: {e}")
            raise InputFormatError(f"invalid matrix in {file_path}: {e}") from e
        logger.debug(f"已載入 {matrix.n}×{matrix.n} 矩陣: {file_path}")
        return matrix

    def save_matrix(self, matrix: ComplexMatrix, file_path: Union[str, Path]) -> Path:
        return self.save_json_data(matrix.to_json(), file_path)

    def save_json_data(self, data: Dict[str, Any], file_path: Union[str, Path]) -> Path:
        """
        保存JSON資料

        Args:
            data: JSON資料
            file_path: 檔案路徑

        Returns:
            保存的檔案路徑
        """
        return self.save_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", file_path)

    def save_text(self, text: str, file_path: Union[str, Path]) -> Path:
        """保存文字（報告、CSV），必要時建立上層目錄"""
        file_path = Path(file_path)
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            with open(file_path, 'w', encoding=self.encoding, newline='') as f:
                f.write(text)
        except OSError as e:
            logger.debug(f"檔案保存失敗: {e}")
            raise InputFormatError(f"cannot write {file_path}: {e}") from e
        logger.info(f"檔案已保存: {file_path}")
        return file_path
