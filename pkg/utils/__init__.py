"""
NumRadX 工具函數
"""

from .logger import setup_logger
from .settings_manager import SettingsManager, get_tolerances

# FileHandler 依賴 core，請直接從 utils.file_handler 匯入
__all__ = [
    'setup_logger',
    'SettingsManager',
    'get_tolerances'
]
