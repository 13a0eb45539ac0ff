#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
NumRadX 主執行檔案
命令列介面：計算量值、執行不等式套件、輸出數值域邊界、二項式展開、搜尋見證
"""

import argparse
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from utils.logger import get_logger, log_function_call, setup_logger
from utils.file_handler import FileHandler
from core.binomial import expand_binomial
from core.errors import (
    CapExceeded,
    DimensionMismatch,
    InputFormatError,
    InvalidMatrix,
    ShapeMismatch,
    ToolkitError,
    UnknownInequality,
)
from core.ensembles import ALL_ENSEMBLES, MAX_DIM, MIN_DIM
from core.evaluator import round_sig
from core.inequalities import InequalityParams
from core.linalg import ComplexMatrix, aluthge, ell, operator_norm, spectral_radius
from core.models import (
    SCHEMA_MODELS,
    EvaluationReportModel,
    ExpansionReportModel,
    SuiteReportModel,
    dump_json,
    schema_json,
)
from core.profile_manager import SuiteProfileManager
from core.radius import (
    boundary_thetas,
    minimal_numerical_radius,
    numerical_radius,
    range_area,
    range_boundary,
    write_boundary_csv,
)
from core.suite import run_suite, tightness_search

PROJECT_ROOT = Path(__file__).resolve().parent

# 退出碼
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# 呼叫者造成的錯誤（退出碼 2）
USAGE_ERRORS = (InputFormatError, InvalidMatrix, DimensionMismatch, CapExceeded, ShapeMismatch, UnknownInequality)

QUANTITIES: Dict[str, Callable[[ComplexMatrix], float]] = {
    "w": numerical_radius,
    "wmin": minimal_numerical_radius,
    "norm": operator_norm,
    "ell": ell,
    "r": lambda T: spectral_radius(T, strict=True),
    "range-area": range_area,
    "aluthge-w": lambda T: numerical_radius(aluthge(T)),
}

logger = get_logger()


class UsageError(Exception):
    """命令列參數錯誤"""


class _Parser(argparse.ArgumentParser):
    """參數錯誤時拋出 UsageError 而不是直接結束程式"""

    def error(self, message):
        raise UsageError(message)


def parse_dims(text: str) -> List[int]:
    """
    解析維度：'2..8'、'2,3,5' 或 '4'

    Raises:
        argparse.ArgumentTypeError: 格式錯誤或超出 [2, 16]
    """
    try:
        if ".." in text:
            lo, hi = (int(part) for part in text.split("..", 1))
            dims = list(range(lo, hi + 1))
        else:
            dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dims: {text!r}") from None
    if not dims or any(not MIN_DIM <= d <= MAX_DIM for d in dims):
        raise argparse.ArgumentTypeError(f"dims must be non-empty within [{MIN_DIM}, {MAX_DIM}]: {text!r}")
    return dims


def parse_seed(text: str) -> int:
    """64 位元無號十進位整數"""
    try:
        seed = int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed: {text!r}") from None
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer: {text!r}")
    return seed


def parse_ensembles(text: str) -> Optional[List[str]]:
    if text == "default":
        return None
    names = [item.strip() for item in text.split(",") if item.strip()]
    unknown = [n for n in names if n not in ALL_ENSEMBLES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown ensembles: {', '.join(unknown)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="numradx", description="Numerical radius and operator inequality toolkit")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="log level (stderr)")
    parser.add_argument("--log-dir", default=None, help="also write rotating log files here")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    compute = sub.add_parser("compute", help="compute a quantity of a matrix file")
    compute.add_argument("--input", "--in", dest="input", required=True, help="matrix JSON file")
    compute.add_argument("--quantity", required=True, choices=sorted(QUANTITIES))

    verify = sub.add_parser("verify", help="run the inequality suite")
    verify.add_argument("--ids", default=None, help="all | established | paper-novel (novel) | as-printed | comma separated ids")
    verify.add_argument("--dims", type=parse_dims, default=None, help="e.g. 2..8")
    verify.add_argument("--trials", type=int, default=None, help="trials per id")
    verify.add_argument("--seed", type=parse_seed, default=None)
    verify.add_argument("--ensembles", type=parse_ensembles, default=None, help="default | comma separated tags")
    verify.add_argument("--profile", default=None, help="suite profile name or file")
    verify.add_argument("--workers", type=int, default=None, help="parallel trial threads")
    verify.add_argument("--out", default=None, help="report file (default: stdout)")

    boundary = sub.add_parser("range", help="sample the numerical range boundary")
    boundary.add_argument("--input", "--in", dest="input", required=True)
    boundary.add_argument("--points", type=int, default=512)
    boundary.add_argument("--out", default=None, help="CSV file (default: stdout)")

    expand = sub.add_parser("expand", help="non-commutative binomial expansion of (A+B)^n")
    expand.add_argument("--a", required=True, help="matrix JSON file for A")
    expand.add_argument("--b", required=True, help="matrix JSON file for B")
    expand.add_argument("--n", type=int, required=True)
    expand.add_argument("--out", default=None)

    search = sub.add_parser("search", help="search for the tightest or violating witness")
    search.add_argument("--id", required=True)
    search.add_argument("--ensemble", default=None, choices=list(ALL_ENSEMBLES))
    search.add_argument("--dims", type=parse_dims, default=parse_dims("2..8"))
    search.add_argument("--budget", type=int, default=1000)
    search.add_argument("--seed", type=parse_seed, default=42)
    search.add_argument("--alpha", type=float, default=None)
    search.add_argument("--n", type=int, default=None)
    search.add_argument("--p", type=float, default=None)
    search.add_argument("--out", default=None)

    schema = sub.add_parser("schema", help="write the JSON schema of an output")
    schema.add_argument("--kind", required=True, choices=sorted(SCHEMA_MODELS))
    schema.add_argument("--out", default=None)
    return parser


def _emit(text: str, out: Optional[str], files: FileHandler) -> None:
    if out:
        files.save_text(text, out)
    else:
        sys.stdout.write(text)


@log_function_call
def cmd_compute(args, files: FileHandler) -> int:
    matrix = files.load_matrix(args.input)
    try:
        value = QUANTITIES[args.quantity](matrix)
    except ToolkitError as e:
        print(f"error: {args.quantity} is inconclusive: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"{value:#.12g}")
    return EXIT_OK


@log_function_call
def cmd_verify(args, files: FileHandler) -> int:
    manager = SuiteProfileManager(PROJECT_ROOT / "profiles")
    profile = manager.load_profile(args.profile) if args.profile else None
    overrides = {
        "ids": args.ids,
        "dims": args.dims,
        "trials": args.trials,
        "seed": args.seed,
        "ensembles": args.ensembles,
        "workers": args.workers,
    }
    config = manager.to_suite_config(profile, overrides)
    report = run_suite(config)
    text = dump_json(SuiteReportModel.model_validate(report.to_json()))
    _emit(text, args.out, files)
    if args.out:
        failed = [r.descriptor.id for r in report.results if r.verdict == "FAIL"]
        findings = [r.descriptor.id for r in report.results if r.verdict == "FINDING"]
        print(f"verdict: {report.verdict} ({len(report.results)} ids, "
              f"FAIL {len(failed)}, FINDING {len(findings)})")
    return EXIT_FAIL if report.failed else EXIT_OK


@log_function_call
def cmd_range(args, files: FileHandler) -> int:
    matrix = files.load_matrix(args.input)
    thetas = boundary_thetas(args.points)
    try:
        points = range_boundary(matrix, args.points)
    except ToolkitError as e:
        print(f"error: range boundary is inconclusive: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(write_boundary_csv(points, thetas), args.out, files)
    return EXIT_OK


@log_function_call
def cmd_expand(args, files: FileHandler) -> int:
    if args.n < 0:
        raise InputFormatError(f"n must be non-negative: {args.n}")
    a = files.load_matrix(args.a)
    b = files.load_matrix(args.b)
    expansion = expand_binomial(a, b, args.n)
    if not expansion.consistent:
        logger.warning(f"展開殘差 {expansion.residual_norm:.3e} 超出容許值")
    model = ExpansionReportModel.model_validate({
        "n": expansion.n,
        "terms": [
            {"k": t.k, "coefficient": t.coefficient, "matrix": t.matrix.to_json()}
            for t in expansion.terms
        ],
        "sum": expansion.total.to_json(),
        "residual_norm": round_sig(expansion.residual_norm),
    })
    _emit(dump_json(model), args.out, files)
    return EXIT_OK


@log_function_call
def cmd_search(args, files: FileHandler) -> int:
    fixed = InequalityParams(alpha=args.alpha, n=args.n, p=args.p)
    report = tightness_search(
        args.id,
        args.ensemble,
        args.dims,
        args.budget,
        np.random.default_rng(args.seed),
        params=fixed,
    )
    if report is None:
        print(f"error: no conclusive trial for {args.id} in {args.budget} attempts", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(dump_json(EvaluationReportModel.model_validate(report.to_json())), args.out, files)
    return EXIT_OK


def cmd_schema(args, files: FileHandler) -> int:
    _emit(schema_json(args.kind), args.out, files)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "range": cmd_range,
    "expand": cmd_expand,
    "search": cmd_search,
    "schema": cmd_schema,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """
    執行一個子命令

    Args:
        argv: 參數列表（None 時讀取 sys.argv）

    Returns:
        退出碼：0 成功、1 established 不等式 FAIL、2 輸入或參數錯誤、3 數值無法判定
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    setup_logger(level=args.log_level, log_dir=args.log_dir)
    files = FileHandler()
    try:
        return COMMANDS[args.command](args, files)
    except USAGE_ERRORS as e:
        logger.debug(f"{args.command} 失敗: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ToolkitError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    """主函數"""
    sys.exit(run_command())


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\ninterrupted", file=sys.stderr)
        sys.exit(130)
