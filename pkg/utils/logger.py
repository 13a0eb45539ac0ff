#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
日誌設定工具
統一管理 NumRadX 的日誌；stdout 保留給指令結果，日誌一律寫到 stderr
"""

import functools
import logging
import logging.handlers
import sys
import time
from pathlib import Path
from typing import Optional, Union

LOGGER_NAME = "numradx"

# 引擎模組以 __name__ 取得日誌器，共用同一組處理器
PACKAGE_LOGGERS = ("core", "utils")


def setup_logger(
    name: str = LOGGER_NAME,
    level: str = "INFO",
    log_dir: Optional[Union[str, Path]] = None,
) -> logging.Logger:
    """
    設定日誌器

    Args:
        name: 日誌器名稱
        level: 日誌級別
        log_dir: 日誌目錄；None 時只輸出到 stderr

    Returns:
        配置好的日誌器
    """
    logger = logging.getLogger(name)
    logger.setLevel(getattr(logging, level.upper()))

    # 避免重複添加處理器，只更新級別
    if logger.handlers:
        for package in PACKAGE_LOGGERS:
            logging.getLogger(package).setLevel(logger.level)
        for handler in logger.handlers:
            if not isinstance(handler, logging.handlers.RotatingFileHandler):
                handler.setLevel(logger.level)
                # sys.stderr 可能已被替換（例如測試擷取）
                handler.setStream(sys.stderr)
        return logger

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 控制台處理器
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level.upper()))
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_dir is not None:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)

        # 檔案處理器 - 所有日誌
        file_handler = logging.handlers.RotatingFileHandler(
            log_dir / "numradx.log",
            maxBytes=10*1024*1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        # 錯誤日誌檔案
        error_handler = logging.handlers.RotatingFileHandler(
            log_dir / "error.log",
            maxBytes=5*1024*1024,  # 5MB
            backupCount=3,
            encoding='utf-8'
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(formatter)
        logger.addHandler(error_handler)

    for package in PACKAGE_LOGGERS:
        child = logging.getLogger(package)
        child.setLevel(logger.level)
        for handler in logger.handlers:
            if handler not in child.handlers:
                child.addHandler(handler)

    return logger


def get_logger(name: str = LOGGER_NAME) -> logging.Logger:
    """獲取日誌器"""
    return logging.getLogger(name)


def log_function_call(func):
    """函數調用日誌裝飾器（含耗時）"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger()
        logger.debug(f"調用函數: {func.__name__}")
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            logger.debug(f"函數 {func.__name__} 執行完成，耗時 {time.perf_counter() - start:.3f} 秒")
            return result
        except Exception as e:
            logger.debug(f"函數 {func.__name__} 執行失敗: {e}")
            raise
    return wrapper


def log_suite_start(seed: int, ids_count: int, trials: int):
    """記錄套件執行開始"""
    logger = get_logger()
    logger.info(f"開始執行不等式套件: seed={seed}, 不等式 {ids_count} 條, 每條 {trials} 次試驗")


def log_suite_end(verdict: str, duration: Optional[float] = None):
    """記錄套件執行結束"""
    logger = get_logger()
    duration_str = f", 耗時: {duration:.2f}秒" if duration else ""
    logger.info(f"不等式套件完成: {verdict}{duration_str}")
