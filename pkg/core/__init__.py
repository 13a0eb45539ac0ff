"""
NumRadX Core Engine
數值域、數值半徑與算子不等式的有限維工具包核心引擎
"""

__version__ = "1.0.0"
__author__ = "NumRadX Team"

from .linalg import ComplexMatrix, operator_norm, spectral_radius
from .radius import minimal_numerical_radius, numerical_radius, range_boundary
from .binomial import expand_binomial
from .evaluator import EvaluationReport, evaluate
from .suite import SuiteReport, run_suite, tightness_search
from .profile_manager import SuiteProfileManager

__all__ = [
    'ComplexMatrix',
    'operator_norm',
    'spectral_radius',
    'numerical_radius',
    'minimal_numerical_radius',
    'range_boundary',
    'expand_binomial',
    'EvaluationReport',
    'evaluate',
    'SuiteReport',
    'run_suite',
    'tightness_search',
    'SuiteProfileManager'
]
