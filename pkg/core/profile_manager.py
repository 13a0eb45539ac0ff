#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
套件Profile管理器
管理 verify 的預設設定（id、維度、試驗次數、種子、ensemble）
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import ValidationError

from .errors import InputFormatError
from .inequalities import Status, list_ids
from .models import SuiteConfig

logger = logging.getLogger(__name__)

# ids 欄位可用的群組名稱
ID_GROUPS = {
    "all": None,
    "established": Status.ESTABLISHED,
    "paper-novel": Status.NOVEL,
    "novel": Status.NOVEL,
    "as-printed": Status.AS_PRINTED,
}

CONFIG_KEYS = ("seed", "ids", "dims", "trials", "ensembles", "workers")


def expand_ids(value: Union[str, List[str], None]) -> Optional[List[str]]:
    """
    展開 id 清單

    Args:
        value: "all"、狀態群組名稱、逗號分隔字串或清單

    Returns:
        id 清單；None 表示未指定
    """
    if value is None:
        return None
    if isinstance(value, str):
        if value in ID_GROUPS:
            return list_ids(ID_GROUPS[value])
        value = [item.strip() for item in value.split(",") if item.strip()]
    ids: List[str] = []
    for item in value:
        if item in ID_GROUPS:
            ids.extend(list_ids(ID_GROUPS[item]))
        else:
            ids.append(item)
    return ids


class SuiteProfileManager:
    """套件Profile管理器"""

    def __init__(self, profiles_dir: Union[str, Path] = "profiles"):
        """
        初始化Profile管理器

        Args:
            profiles_dir: profiles 根目錄，內建設定檔在 base/ 子目錄
        """
        self.profiles_dir = Path(profiles_dir)
        self.base_profiles_dir = self.profiles_dir / "base"
        logger.debug(f"套件Profile目錄: {self.base_profiles_dir}")

    def _resolve(self, name: Union[str, Path]) -> Path:
        path = Path(name)
        if path.suffix.lower() in (".yml", ".yaml", ".json") and path.exists():
            return path
        if not path.suffix:
            for suffix in (".yml", ".yaml", ".json"):
                candidate = self.base_profiles_dir / f"{path.name}{suffix}"
                if candidate.exists():
                    return candidate
        candidate = self.base_profiles_dir / path.name
        if candidate.exists():
            return candidate
        raise InputFormatError(f"profile not found: {name}")

    def load_profile(self, name: Union[str, Path]) -> Dict[str, Any]:
        """
        載入Profile

        Args:
            name: Profile名稱（base/ 下）或檔案路徑

        Returns:
            Profile配置

        Raises:
            InputFormatError: 找不到檔案或格式錯誤
        """
        path = self._resolve(name)
        logger.info(f"載入Profile檔案: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as f:
                if path.suffix.lower() == '.json':
                    profile = json.load(f)
                else:
                    profile = yaml.safe_load(f)
        except (OSError, json.JSONDecodeError, yaml.YAMLError) as e:
            logger.debug(f"Profile載入失敗: {e}")
            raise InputFormatError(f"cannot parse profile {path}: {e}") from e
        if not isinstance(profile, dict):
            raise InputFormatError(f"profile {path} must be a mapping")
        return profile

    def save_profile(self, profile: Dict[str, Any], name: str) -> Path:
        """
        保存Profile到 base/（YAML）

        Returns:
            保存的檔案路徑
        """
        self.base_profiles_dir.mkdir(parents=True, exist_ok=True)
        path = self.base_profiles_dir / f"{name}.yml"
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(profile, f, allow_unicode=True, sort_keys=False)
        logger.info(f"Profile已保存: {path}")
        return path

    def list_profiles(self) -> List[Dict[str, str]]:
        """列出 base/ 下的Profile"""
        profiles = []
        if not self.base_profiles_dir.exists():
            return profiles
        for path in sorted(self.base_profiles_dir.iterdir()):
            if path.suffix.lower() not in (".yml", ".yaml", ".json"):
                continue
            try:
                profile = self.load_profile(path)
            except InputFormatError as e:
                logger.warning(f"略過無法讀取的Profile {path.name}: {e}")
                continue
            profiles.append({
                "name": profile.get("name", path.stem),
                "description": profile.get("description", ""),
                "path": str(path),
            })
        return profiles

    def to_suite_config(
        self,
        profile: Optional[Dict[str, Any]] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> SuiteConfig:
        """
        Profile 與命令列參數合併成 SuiteConfig（命令列優先）

        Raises:
            InputFormatError: 合併後的設定不合法
        """
        values: Dict[str, Any] = {}
        for source in (profile or {}, overrides or {}):
            for key in CONFIG_KEYS:
                if source.get(key) is not None:
                    values[key] = source[key]
        if "ids" in values:
            values["ids"] = expand_ids(values["ids"])
        try:
            return SuiteConfig(**values)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "config"
            raise InputFormatError(f"invalid suite config ({location}): {first['msg']}") from e
