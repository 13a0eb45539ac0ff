#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
不等式登錄表
每一條不等式都是可否證的述詞：對一個實例回傳 (lhs, rhs)，宣稱 lhs ≤ rhs。
左右兩邊只透過工具包的運算（w、w_min、‖·‖、ℓ、|·|、f(A)、r、二項式展開）計算。
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np

from utils.settings_manager import get_tolerances
from .binomial import expand_binomial
from .ensembles import InstanceShape, OperatorInstance
from .errors import ConsistencyError, DomainError, InvalidParameters, UnknownInequality
from .linalg import (
    ComplexMatrix,
    abs_adjoint,
    abs_op,
    aluthge,
    ell,
    mat_power,
    operator_norm,
    spectral_radius,
)
from .radius import minimal_numerical_radius, numerical_radius
from .spectral import (
    PowerPair,
    ScalarFn,
    apply_fn,
    cheb_double_sum,
    cheb_functional,
    qform,
    variance,
)

logger = logging.getLogger(__name__)

TOL = get_tolerances()


class Status(Enum):
    """登錄狀態：established 的違反是工具包缺陷，paper-novel 與 as-printed 的違反是發現"""
    ESTABLISHED = "established"
    NOVEL = "paper-novel"
    AS_PRINTED = "as-printed"

    @property
    def violation_verdict(self) -> str:
        return "FAIL" if self is Status.ESTABLISHED else "FINDING"


class FnFamily(Enum):
    """述詞需要的純量函數參數"""
    PAIR = "pair"            # 兩個非負函數 f, g
    SINGLE = "single"        # 一個非負函數 f
    MONOTONE = "monotone"    # 同調（或反調）的 f, g，附 mode


@dataclass(frozen=True)
class ParamSpec:
    """參數範圍；None 表示述詞不使用該參數"""

    alpha: Optional[Tuple[float, float]] = None
    n: Optional[Tuple[int, int]] = None
    p: Optional[Tuple[float, float]] = None
    fns: Optional[FnFamily] = None

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.alpha is not None:
            data["alpha"] = list(self.alpha)
        if self.n is not None:
            data["n"] = list(self.n)
        if self.p is not None:
            data["p"] = list(self.p)
        if self.fns is not None:
            data["fns"] = self.fns.value
        return data


@dataclass(frozen=True)
class InequalityParams:
    """一次評估的參數"""

    alpha: Optional[float] = None
    n: Optional[int] = None
    p: Optional[float] = None
    f: Optional[ScalarFn] = None
    g: Optional[ScalarFn] = None
    mode: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        if self.alpha is not None:
            data["alpha"] = self.alpha
        if self.n is not None:
            data["n"] = self.n
        if self.p is not None:
            data["p"] = self.p
        if self.f is not None:
            data["f"] = self.f.to_json()
        if self.g is not None:
            data["g"] = self.g.to_json()
        if self.mode is not None:
            data["mode"] = self.mode
        return data

    @classmethod
    def from_json(cls, data: Optional[Mapping[str, Any]]) -> "InequalityParams":
        if not data:
            return cls()
        try:
            return cls(
                alpha=float(data["alpha"]) if data.get("alpha") is not None else None,
                n=int(data["n"]) if data.get("n") is not None else None,
                p=float(data["p"]) if data.get("p") is not None else None,
                f=ScalarFn.from_json(data["f"]) if data.get("f") is not None else None,
                g=ScalarFn.from_json(data["g"]) if data.get("g") is not None else None,
                mode=data.get("mode"),
            )
        except (TypeError, ValueError, DomainError) as e:
            raise InvalidParameters(f"參數無法解析: {e}") from e


@dataclass
class Outcome:
    """
    述詞結果；details 保留鏈結與分支的數值

    scale: 相減前各項的量級，容許值以 max(1, |lhs|, |rhs|, scale) 為基準
    """

    lhs: float
    rhs: float
    details: Dict[str, float] = field(default_factory=dict)
    scale: float = 0.0


Predicate = Callable[[OperatorInstance, InequalityParams], Outcome]


@dataclass(frozen=True)
class InequalityDescriptor:
    """
    不等式描述

    Attributes:
        id: 登錄鍵
        statement: 不等式本身（lhs ≤ rhs 的文字）
        status: established / paper-novel / as-printed
        shape: 需要的實例形狀
        predicate: (實例, 參數) → Outcome
        params: 參數範圍
        requires_psd: 所有矩陣必須半正定
        default_ensembles: 未指定時使用的 ensemble
        inhomogeneous: 左右兩邊的齊次次數不同
        homogeneity_degree: 齊次時 lhs、rhs 的共同次數
        tol_factor: 違反容許值的倍數（使用 r(B) 的述詞放寬）
    """

    id: str
    statement: str
    status: Status
    shape: InstanceShape
    predicate: Predicate
    params: ParamSpec = ParamSpec()
    requires_psd: bool = False
    default_ensembles: Tuple[str, ...] = ()
    inhomogeneous: bool = False
    homogeneity_degree: Optional[float] = None
    tol_factor: float = 1.0

    def resolve_params(self, params: Union[None, InequalityParams, Mapping[str, Any]]) -> InequalityParams:
        """
        以預設值補齊參數並檢查範圍

        Raises:
            InvalidParameters: 參數超出範圍或缺少必要函數
        """
        if params is None or isinstance(params, Mapping):
            params = InequalityParams.from_json(params)
        ranges = self.params
        values: Dict[str, Any] = {}

        if ranges.alpha is not None:
            alpha = 0.5 if params.alpha is None else params.alpha
            lo, hi = ranges.alpha
            if not lo <= alpha <= hi:
                raise InvalidParameters(f"{self.id}: α = {alpha} 不在 [{lo}, {hi}]")
            values["alpha"] = alpha
        if ranges.n is not None:
            n = min(2, ranges.n[1]) if params.n is None else params.n
            lo, hi = ranges.n
            if not lo <= n <= hi:
                raise InvalidParameters(f"{self.id}: n = {n} 不在 [{lo}, {hi}]")
            values["n"] = n
        if ranges.p is not None:
            p = 1.0 if params.p is None else params.p
            lo, hi = ranges.p
            if not lo < p <= hi:
                raise InvalidParameters(f"{self.id}: p = {p} 不在 ({lo}, {hi}]")
            values["p"] = p
        if ranges.fns is not None:
            values["f"] = params.f or ScalarFn.identity()
            if ranges.fns is not FnFamily.SINGLE:
                values["g"] = params.g or ScalarFn.power(2.0)
            if ranges.fns is FnFamily.MONOTONE:
                mode = params.mode or "sync"
                if mode not in ("sync", "async"):
                    raise InvalidParameters(f"{self.id}: mode 必須是 sync 或 async: {mode}")
                values["mode"] = mode
        return InequalityParams(**values)

    def sample_params(self, rng: np.random.Generator) -> InequalityParams:
        """由參數範圍隨機抽樣"""
        ranges = self.params
        values: Dict[str, Any] = {}
        if ranges.alpha is not None:
            values["alpha"] = float(rng.uniform(*ranges.alpha))
        if ranges.n is not None:
            values["n"] = int(rng.integers(ranges.n[0], ranges.n[1] + 1))
        if ranges.p is not None:
            lo, hi = ranges.p
            values["p"] = float(hi - rng.uniform(0.0, hi - lo))
        if ranges.fns is FnFamily.PAIR:
            values["f"] = random_nonnegative_fn(rng)
            values["g"] = random_nonnegative_fn(rng)
        elif ranges.fns is FnFamily.SINGLE:
            values["f"] = random_nonnegative_fn(rng)
        elif ranges.fns is FnFamily.MONOTONE:
            mode = "sync" if rng.random() < 0.5 else "async"
            values["mode"] = mode
            values["f"] = random_increasing_fn(rng)
            values["g"] = random_increasing_fn(rng) if mode == "sync" else random_decreasing_fn(rng)
        return InequalityParams(**values)

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "statement": self.statement,
            "status": self.status.value,
            "shape": self.shape.value,
            "requires_psd": self.requires_psd,
            "params": self.params.to_json(),
            "default_ensembles": list(self.default_ensembles),
            "inhomogeneous": self.inhomogeneous,
            "homogeneity_degree": self.homogeneity_degree,
        }


# ----------------------------------------------------------------------
# 純量函數族
# ----------------------------------------------------------------------
def random_increasing_fn(rng: np.random.Generator) -> ScalarFn:
    """[0,∞) 上非遞減且非負的函數"""
    choice = int(rng.integers(0, 4))
    if choice == 0:
        return ScalarFn.power(float(rng.uniform(0.25, 3.0)))
    if choice == 1:
        return ScalarFn.poly(rng.uniform(0.0, 1.0, size=int(rng.integers(2, 5))).tolist())
    if choice == 2:
        return ScalarFn.log1p()
    return ScalarFn.identity()


def random_decreasing_fn(rng: np.random.Generator) -> ScalarFn:
    """常數項非負、其餘係數非正的多項式（在 [0,∞) 上遞減）"""
    coeffs = [float(rng.uniform(0.0, 1.0))] + (-rng.uniform(0.05, 1.0, size=int(rng.integers(1, 3)))).tolist()
    return ScalarFn.poly(coeffs)


def random_nonnegative_fn(rng: np.random.Generator) -> ScalarFn:
    """非負函數（f^{1/2}(A) 有定義）"""
    choice = int(rng.integers(0, 3))
    if choice == 0:
        return random_increasing_fn(rng)
    if choice == 1:
        return ScalarFn.const(float(rng.uniform(0.1, 2.0)))
    return ScalarFn.sqrt_of(ScalarFn.poly(rng.uniform(0.0, 1.0, size=3).tolist()))


# ----------------------------------------------------------------------
# 共用量
# ----------------------------------------------------------------------
def _w(m) -> float:
    return numerical_radius(m)


def _wmin(m) -> float:
    return minimal_numerical_radius(m)


def _norm(m) -> float:
    return operator_norm(m)


def _inner(u: np.ndarray, v: np.ndarray) -> complex:
    """⟨u, v⟩ = Σ u_i·conj(v_i)"""
    return complex(np.vdot(v, u))


def _re(z: complex, scale: float, what: str) -> float:
    if abs(z.imag) > TOL.imaginary_tolerance * max(1.0, scale):
        raise ConsistencyError(f"{what} 的虛部 {z.imag:.3e} 超過容許值")
    return z.real


def _fg_abs(f: ScalarFn, g: ScalarFn, M) -> np.ndarray:
    """f(|M|) + g(|M*|)"""
    return apply_fn(f, abs_op(M)).entries + apply_fn(g, abs_adjoint(M)).entries


def _chain(links: List[Tuple[str, float, float]], details: Optional[Dict[str, float]] = None) -> Outcome:
    """
    鏈結 a ≤ b ≤ c：每個鏈結寫入 details，回報 slack 最小的那一個
    """
    details = dict(details or {})
    for name, lhs, rhs in links:
        details[f"{name}.lhs"] = lhs
        details[f"{name}.rhs"] = rhs
    _, lhs, rhs = min(links, key=lambda link: link[2] - link[1])
    return Outcome(lhs=lhs, rhs=rhs, details=details)


# ----------------------------------------------------------------------
# 經典數值半徑不等式
# ----------------------------------------------------------------------
def _i11_left(inst, params) -> Outcome:
    return Outcome(lhs=0.5 * _norm(inst.A), rhs=_w(inst.A))


def _i11_right(inst, params) -> Outcome:
    return Outcome(lhs=_w(inst.A), rhs=_norm(inst.A))


def _i12(inst, params) -> Outcome:
    t = inst.A
    return Outcome(lhs=_w(t), rhs=0.5 * (_norm(t) + math.sqrt(_norm(t @ t))))


def _sum_of_squares_norm(a: ComplexMatrix) -> float:
    """‖A*A + AA*‖"""
    return _norm(a.H @ a + a @ a.H)


def _i13_left(inst, params) -> Outcome:
    return Outcome(lhs=0.25 * _sum_of_squares_norm(inst.A), rhs=_w(inst.A) ** 2)


def _i13_right(inst, params) -> Outcome:
    return Outcome(lhs=_w(inst.A) ** 2, rhs=0.5 * _sum_of_squares_norm(inst.A))


def _i14(inst, params) -> Outcome:
    t = inst.A
    norm = _norm(t)
    middle = 0.5 * (norm + _w(aluthge(t)))
    return _chain([
        ("aluthge", _w(t), middle),
        ("square", middle, 0.5 * (norm + math.sqrt(_norm(t @ t)))),
    ])


def _i15(inst, params) -> Outcome:
    t = inst.A
    return Outcome(lhs=_w(t) ** 2, rhs=0.5 * (_norm(t) + _w(t @ t)))


# ----------------------------------------------------------------------
# Čebyšev 泛函
# ----------------------------------------------------------------------
def _cheb_scale(f: ScalarFn, g: ScalarFn, a, x) -> float:
    """C(f,g;A;x) 兩項的量級 max(|⟨f g x,x⟩|, |⟨fx,x⟩⟨gx,x⟩|, ⟨f²x,x⟩^{1/2}⟨g²x,x⟩^{1/2})"""
    fa = apply_fn(f, a)
    ga = apply_fn(g, a)
    fx, gx = qform(fa, x), qform(ga, x)
    ff, gg = qform(fa @ fa, x), qform(ga @ ga, x)
    return max(abs(qform(fa @ ga, x)), abs(fx * gx), math.sqrt(abs(ff) * abs(gg)))


def _monotone(inst, params) -> Outcome:
    value = cheb_functional(params.f, params.g, inst.A, inst.x)
    scale = _cheb_scale(params.f, params.g, inst.A, inst.x)
    if params.mode == "sync":
        return Outcome(lhs=0.0, rhs=value, scale=scale)
    return Outcome(lhs=value, rhs=0.0, scale=scale)


def _pre_gruss(inst, params) -> Outcome:
    f, g, a, x = params.f, params.g, inst.A, inst.x
    c = cheb_functional(f, g, a, x)
    vf = variance(f, a, x)
    vg = variance(g, a, x)
    return Outcome(
        lhs=abs(c),
        rhs=math.sqrt(vf) * math.sqrt(vg),
        details={"double_sum": cheb_double_sum(f, g, a, x), "variance_f": vf, "variance_g": vg},
        scale=_cheb_scale(f, g, a, x),
    )


def _power_pre_gruss(inst, params) -> Outcome:
    pair = PowerPair(params.alpha)
    return _pre_gruss(inst, replace(params, f=pair.f, g=pair.g))


# ----------------------------------------------------------------------
# Schwarz 型不等式
# ----------------------------------------------------------------------
def _schwarz(inst, params) -> Outcome:
    a, x, y = inst.A, inst.x, inst.y
    axy = _inner(a.entries @ x.x, y.x)
    axx = qform(a, x)
    ayy = qform(a, y)
    scale = _norm(a)
    return Outcome(lhs=abs(axy) ** 2, rhs=_re(axx, scale, "⟨Ax,x⟩") * _re(ayy, scale, "⟨Ay,y⟩"))


def _reid_parts(inst) -> Tuple[float, float]:
    a, b, x = inst.A, inst.B, inst.x
    lhs = abs(qform(a @ b, x))
    axx = _re(qform(a, x), _norm(a), "⟨Ax,x⟩")
    return lhs, axx


def _reid(inst, params) -> Outcome:
    lhs, axx = _reid_parts(inst)
    return Outcome(lhs=lhs, rhs=_norm(inst.B) * axx)


def _halmos(inst, params) -> Outcome:
    lhs, axx = _reid_parts(inst)
    r = spectral_radius(inst.B)
    return Outcome(lhs=lhs, rhs=r * axx, details={"spectral_radius": r})


def _kato(inst, params) -> Outcome:
    a, x, y, alpha = inst.A, inst.x, inst.y, params.alpha
    lhs = abs(_inner(a.entries @ x.x, y.x)) ** 2
    left = qform(apply_fn(ScalarFn.power(2 * alpha), abs_op(a)), x)
    right = qform(apply_fn(ScalarFn.power(2 * (1 - alpha)), abs_adjoint(a)), y)
    scale = max(1.0, _norm(a)) ** 2
    return Outcome(lhs=lhs, rhs=_re(left, scale, "⟨|A|^{2α}x,x⟩") * _re(right, scale, "⟨|A*|^{2(1−α)}y,y⟩"))


def _kittaneh(inst, params) -> Outcome:
    a, b, x, y = inst.A, inst.B, inst.x, inst.y
    pair = PowerPair(params.alpha)
    lhs = abs(_inner((a @ b).entries @ x.x, y.x))
    fx = np.linalg.norm(apply_fn(pair.f, abs_op(a)).entries @ x.x)
    gy = np.linalg.norm(apply_fn(pair.g, abs_adjoint(a)).entries @ y.x)
    r = spectral_radius(b)
    return Outcome(lhs=lhs, rhs=r * float(fx) * float(gy), details={"spectral_radius": r})


def _kittaneh_squared(inst, params) -> Outcome:
    a, alpha = inst.A, params.alpha
    rhs = 0.5 * _norm(_fg_abs(ScalarFn.power(2 * alpha), ScalarFn.power(2 * (1 - alpha)), a))
    return Outcome(lhs=_w(a), rhs=rhs)


# ----------------------------------------------------------------------
# w_max − w_min 型不等式（A 半正定）
# ----------------------------------------------------------------------
def _ell_sq_root(f: ScalarFn, a) -> float:
    """ℓ²(f^{1/2}(A))"""
    return ell(apply_fn(ScalarFn.sqrt_of(f), a)) ** 2


def _bracket(f: ScalarFn, a) -> float:
    """‖f(A)‖² − ℓ²(f^{1/2}(A))，為負時右邊沒有定義"""
    value = _norm(apply_fn(f, a)) ** 2 - _ell_sq_root(f, a)
    if value < 0:
        raise DomainError(f"‖f(A)‖² − ℓ²(f^{{1/2}}(A)) = {value:.3e} < 0")
    return value


def _gap_general(f: ScalarFn, g: ScalarFn, a) -> Outcome:
    fa = apply_fn(f, a)
    ga = apply_fn(g, a)
    lhs = _w(fa @ ga) - _wmin(fa) * _wmin(ga)
    return Outcome(lhs=lhs, rhs=math.sqrt(_bracket(f, a)) * math.sqrt(_bracket(g, a)))


def _e42(inst, params) -> Outcome:
    return _gap_general(params.f, params.g, inst.A)


def _e43(inst, params) -> Outcome:
    pair = PowerPair(params.alpha)
    return _gap_general(pair.f, pair.g, inst.A)


def _e44(inst, params) -> Outcome:
    a = inst.A
    half = ScalarFn.power(0.5)
    lhs = _w(a) - _wmin(apply_fn(half, a)) ** 2
    rhs = _norm(apply_fn(half, a)) ** 2 - ell(apply_fn(ScalarFn.power(0.25), a)) ** 2
    return Outcome(lhs=lhs, rhs=rhs)


def _square_gap(f: ScalarFn, a) -> Outcome:
    fa = apply_fn(f, a)
    lhs = _w(fa @ fa) - _wmin(fa) ** 2
    return Outcome(lhs=lhs, rhs=_norm(fa) ** 2 - _ell_sq_root(f, a))


def _e45(inst, params) -> Outcome:
    return _square_gap(params.f, inst.A)


def _e46(inst, params) -> Outcome:
    return _square_gap(ScalarFn.power(params.p), inst.A)


def _kittaneh_gap(pair: PowerPair, a) -> Outcome:
    lhs = _w(a) - _wmin(apply_fn(pair.f, a)) * _wmin(apply_fn(pair.g, a))
    squares = _fg_abs(ScalarFn.power(2 * pair.alpha), ScalarFn.power(2 * (1 - pair.alpha)), a)
    rhs = 0.5 * _norm(squares) - _ell_sq_root(pair.f, a) * _ell_sq_root(pair.g, a)
    return Outcome(lhs=lhs, rhs=rhs)


def _e47(inst, params) -> Outcome:
    return _kittaneh_gap(PowerPair(params.alpha), inst.A)


def _e49(inst, params) -> Outcome:
    return _kittaneh_gap(PowerPair(0.5), inst.A)


# ----------------------------------------------------------------------
# 向量不等式
# ----------------------------------------------------------------------
def _triple(inst) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x, y, e = inst.vectors
    if abs(np.linalg.norm(e) - 1.0) > 1e-12:
        raise InvalidParameters("e 必須為單位向量")
    return x, y, e


def _key(inst, params) -> Outcome:
    x, y, e = _triple(inst)
    lhs = abs(_inner(x, e) * _inner(e, y))
    rhs = 0.5 * (abs(_inner(x, y)) + np.linalg.norm(x) * np.linalg.norm(y))
    return Outcome(lhs=lhs, rhs=float(rhs))


def _dragomir_cs(inst, params) -> Outcome:
    x, y, e = _triple(inst)
    projected = _inner(x, e) * _inner(e, y)
    xy = _inner(x, y)
    middle = abs(projected) + abs(xy - projected)
    return _chain([
        ("refinement", abs(xy), middle),
        ("cauchy_schwarz", middle, float(np.linalg.norm(x) * np.linalg.norm(y))),
    ])


# ----------------------------------------------------------------------
# 和與平方
# ----------------------------------------------------------------------
def _square_sum_parts(a: ComplexMatrix, b: ComplexMatrix) -> Dict[str, float]:
    s = a + b
    return {
        "w_sum_square": _w(s @ s),
        "w_a2": _w(a @ a),
        "w_b2": _w(b @ b),
        "branch_ab": _w(b @ a @ a @ b) + _norm(a @ b) ** 2,
        "branch_ba": _w(a @ b @ b @ a) + _norm(b @ a) ** 2,
    }


def _eq211(inst, params) -> Outcome:
    parts = _square_sum_parts(inst.A, inst.B)
    rhs = parts["w_a2"] + parts["w_b2"] + 0.25 * min(parts["branch_ab"], parts["branch_ba"])
    return Outcome(lhs=parts["w_sum_square"], rhs=rhs, details=parts)


def _eq211_half(inst, params) -> Outcome:
    parts = _square_sum_parts(inst.A, inst.B)
    rhs = parts["w_a2"] + parts["w_b2"] + 0.5 * parts["branch_ab"]
    return Outcome(lhs=parts["w_sum_square"], rhs=rhs, details=parts)


def _eq214(inst, params) -> Outcome:
    a = inst.A
    a2 = a @ a
    return Outcome(lhs=_w(a2), rhs=(_w(a2 @ a2) + _norm(a2) ** 2) / 8.0)


# ----------------------------------------------------------------------
# 非交換二項式界
# ----------------------------------------------------------------------
def _expansion_bound(inst, params) -> Tuple[float, ComplexMatrix, Dict[str, float]]:
    a, b, n = inst.A, inst.B, params.n
    pair = PowerPair(params.alpha)
    expansion = expand_binomial(a, b, n)
    if not expansion.consistent:
        raise ConsistencyError(
            f"展開殘差 {expansion.residual_norm:.3e} 超過 {TOL.expansion_tolerance:g}·{expansion.scale:.3e}"
        )
    rhs = 0.0
    details = {"residual_norm": expansion.residual_norm}
    for term in expansion.terms:
        contribution = term.coefficient * _norm(_fg_abs(pair.f, pair.g, term.matrix))
        details[f"term_{term.k}"] = contribution
        rhs += contribution
    return 0.5 * rhs, mat_power(a + b, n), details


def _eq218(inst, params) -> Outcome:
    rhs, power, details = _expansion_bound(inst, params)
    return Outcome(lhs=_w(power), rhs=rhs, details=details)


def _norm_rem(inst, params) -> Outcome:
    rhs, power, details = _expansion_bound(inst, params)
    return Outcome(lhs=_norm(power), rhs=rhs, details=details)


def _combined_bound(pair: PowerPair, a: ComplexMatrix, b: ComplexMatrix) -> float:
    """½‖f(|B|) + g(|B*|) + f(|A|) + g(|A*|)‖"""
    return 0.5 * _norm(_fg_abs(pair.f, pair.g, b) + _fg_abs(pair.f, pair.g, a))


def _eq219(inst, params) -> Outcome:
    # (A + d_B)1_H = A，遞迴給出 D_1 = 0
    pair = PowerPair(params.alpha)
    return Outcome(lhs=_w(inst.A + inst.B), rhs=_combined_bound(pair, inst.A, inst.B))


def _eq219_literal(inst, params) -> Outcome:
    a, b = inst.A, inst.B
    pair = PowerPair(params.alpha)
    c = a + b @ a - a @ b
    return Outcome(lhs=_w(a + b), rhs=_combined_bound(pair, c, b))


def _norm_219(inst, params) -> Outcome:
    pair = PowerPair(params.alpha)
    return Outcome(lhs=_norm(inst.A + inst.B), rhs=_combined_bound(pair, inst.A, inst.B))


def _commuting_bound(inst, params) -> Tuple[float, ComplexMatrix]:
    a, b, n = inst.A, inst.B, params.n
    pair = PowerPair(params.alpha)
    rhs = 0.0
    for k in range(n + 1):
        term = mat_power(a, k) @ mat_power(b, n - k)
        rhs += math.comb(n, k) * _norm(_fg_abs(pair.f, pair.g, term))
    return 0.5 * rhs, mat_power(a + b, n)


def _eq220(inst, params) -> Outcome:
    rhs, power = _commuting_bound(inst, params)
    return Outcome(lhs=_w(power), rhs=rhs)


def _norm_rem_commuting(inst, params) -> Outcome:
    rhs, power = _commuting_bound(inst, params)
    return Outcome(lhs=_norm(power), rhs=rhs)


def _norm_alpha(inst, params) -> Outcome:
    pair = PowerPair(params.alpha)
    return Outcome(lhs=_norm(inst.A + inst.B), rhs=_combined_bound(pair, inst.A, inst.B))


def _power_bound(inst, params) -> Outcome:
    n = params.n if params.n is not None else 1
    pair = PowerPair(params.alpha)
    power = mat_power(inst.A, n)
    return Outcome(lhs=_w(power), rhs=0.5 * _norm(_fg_abs(pair.f, pair.g, power)))


def _eq224(inst, params) -> Outcome:
    a = inst.A
    norm = _norm(a)
    middle = 0.5 * _norm(abs_op(a) + ComplexMatrix.identity(a.n))
    closed = 0.25 * (1.0 + norm + math.sqrt((norm - 1.0) ** 2 + 4.0 * norm))
    return _chain([("modulus", _w(a), middle), ("closed_form", middle, closed)])


def _root(a: ComplexMatrix) -> ComplexMatrix:
    return apply_fn(ScalarFn.power(0.5), a)


def _fk3(inst, params) -> Outcome:
    a, b = inst.A, inst.B
    na, nb = _norm(a), _norm(b)
    cross = _norm(_root(a) @ _root(b))
    rhs = 0.5 * (na + nb + math.sqrt((na - nb) ** 2 + 4.0 * cross ** 2))
    return Outcome(lhs=_norm(a + b), rhs=rhs)


def _cordes(inst, params) -> Outcome:
    a, b = inst.A, inst.B
    return Outcome(lhs=_norm(_root(a) @ _root(b)), rhs=math.sqrt(_norm(a @ b)))


# ----------------------------------------------------------------------
# 登錄表
# ----------------------------------------------------------------------
_GENERAL = ("ginibre", "hermitian", "psd", "unitary", "contraction", "jordan")
_PSD = ("psd",)
_UNIT = (0.0, 1.0)
_HALF = (0.0, 0.5)
_POWERS = (1, 8)
_R_TOL = TOL.spectral_radius_violation_tolerance / TOL.violation_tolerance

S = InstanceShape
E = Status.ESTABLISHED
N = Status.NOVEL


def _d(key, statement, status, shape, predicate, **kwargs) -> InequalityDescriptor:
    kwargs.setdefault("default_ensembles", _PSD if kwargs.get("requires_psd") else _GENERAL)
    return InequalityDescriptor(id=key, statement=statement, status=status, shape=shape, predicate=predicate, **kwargs)


_DESCRIPTORS = [
    _d("I1.1L", "½‖T‖ ≤ w(T)", E, S.SINGLE, _i11_left, homogeneity_degree=1),
    _d("I1.1R", "w(T) ≤ ‖T‖", E, S.SINGLE, _i11_right, homogeneity_degree=1),
    _d("I1.2", "w(T) ≤ ½(‖T‖ + ‖T²‖^{1/2})", E, S.SINGLE, _i12, homogeneity_degree=1),
    _d("I1.3L", "¼‖A*A + AA*‖ ≤ w²(A)", E, S.SINGLE, _i13_left, homogeneity_degree=2),
    _d("I1.3R", "w²(A) ≤ ½‖A*A + AA*‖", E, S.SINGLE, _i13_right, homogeneity_degree=2),
    _d("I1.4", "w(T) ≤ ½(‖T‖ + w(Ṫ)) ≤ ½(‖T‖ + ‖T²‖^{1/2})", E, S.SINGLE, _i14, homogeneity_degree=1),
    _d("I1.5", "w²(T) ≤ ½(‖T‖ + w(T²))", Status.AS_PRINTED, S.SINGLE, _i15, inhomogeneous=True),
    _d("T1.1", "C(f,g;A;x) ≥ 0 (f, g synchronous), ≤ 0 (asynchronous)", E, S.OPERATOR_STATE, _monotone,
       params=ParamSpec(fns=FnFamily.MONOTONE), requires_psd=True),
    _d("T2.1", "|C(f,g;A;x)| ≤ C^{1/2}(f,f;A;x)·C^{1/2}(g,g;A;x)", E, S.OPERATOR_STATE, _pre_gruss,
       params=ParamSpec(fns=FnFamily.PAIR), requires_psd=True),
    _d("C2.2α", "|C(t^α, t^{1−α};A;x)| ≤ C^{1/2}(t^α)·C^{1/2}(t^{1−α}), α ∈ [0, ½]", E, S.OPERATOR_STATE,
       _power_pre_gruss, params=ParamSpec(alpha=_HALF), requires_psd=True),
    _d("SCHWARZ", "|⟨Ax,y⟩|² ≤ ⟨Ax,x⟩⟨Ay,y⟩, A ≥ 0", E, S.OPERATOR_STATE, _schwarz,
       requires_psd=True, homogeneity_degree=2),
    _d("REID", "|⟨ABx,x⟩| ≤ ‖B‖⟨Ax,x⟩, A ≥ 0, AB selfadjoint", E, S.PAIR_REID, _reid,
       default_ensembles=("reid",), homogeneity_degree=2),
    _d("HALMOS", "|⟨ABx,x⟩| ≤ r(B)⟨Ax,x⟩, A ≥ 0, AB selfadjoint", E, S.PAIR_REID, _halmos,
       default_ensembles=("reid",), homogeneity_degree=2, tol_factor=_R_TOL),
    _d("KATO", "|⟨Ax,y⟩|² ≤ ⟨|A|^{2α}x,x⟩⟨|A*|^{2(1−α)}y,y⟩", E, S.OPERATOR_STATE, _kato,
       params=ParamSpec(alpha=_UNIT), homogeneity_degree=2),
    _d("KITT", "|⟨ABx,y⟩| ≤ r(B)‖f(|A|)x‖‖g(|A*|)y‖, |A|B = B*|A|, fg = t", E, S.PAIR_KITTANEH, _kittaneh,
       params=ParamSpec(alpha=_UNIT), default_ensembles=("kittaneh",), homogeneity_degree=2, tol_factor=_R_TOL),
    _d("KITT-SQ", "w(A) ≤ ½‖f²(|A|) + g²(|A*|)‖, f = t^α, g = t^{1−α}", E, S.SINGLE, _kittaneh_squared,
       params=ParamSpec(alpha=_UNIT), inhomogeneous=True),
    _d("E4.2", "w(f(A)g(A)) − w_min(f(A))·w_min(g(A)) ≤ [‖f(A)‖² − ℓ²(f^{1/2}(A))]^{1/2}·[‖g(A)‖² − ℓ²(g^{1/2}(A))]^{1/2}",
       N, S.SINGLE, _e42, params=ParamSpec(fns=FnFamily.PAIR), requires_psd=True),
    _d("E4.3", "w(A) − w_min(A^α)·w_min(A^{1−α}) ≤ [‖A^α‖² − ℓ²(A^{α/2})]^{1/2}·[‖A^{1−α}‖² − ℓ²(A^{(1−α)/2})]^{1/2}",
       N, S.SINGLE, _e43, params=ParamSpec(alpha=_UNIT), requires_psd=True, inhomogeneous=True),
    _d("E4.4", "w(A) − w²_min(A^{1/2}) ≤ ‖A^{1/2}‖² − ℓ²(A^{1/4})", N, S.SINGLE, _e44,
       requires_psd=True, inhomogeneous=True),
    _d("E4.5", "w(f²(A)) − w²_min(f(A)) ≤ ‖f(A)‖² − ℓ²(f^{1/2}(A))", N, S.SINGLE, _e45,
       params=ParamSpec(fns=FnFamily.SINGLE), requires_psd=True),
    _d("E4.6", "w(A^{2p}) − w²_min(A^p) ≤ ‖A^p‖² − ℓ²(A^{p/2}), p > 0", N, S.SINGLE, _e46,
       params=ParamSpec(p=(0.0, 3.0)), requires_psd=True, inhomogeneous=True),
    _d("E4.7", "w(A) − w_min(f(A))·w_min(g(A)) ≤ ½‖f²(|A|) + g²(|A*|)‖ − ℓ²(f^{1/2}(A))·ℓ²(g^{1/2}(A)), fg = t",
       N, S.SINGLE, _e47, params=ParamSpec(alpha=_UNIT), requires_psd=True, inhomogeneous=True),
    _d("E4.8", "w(A) − w_min(A^α)·w_min(A^{1−α}) ≤ ½‖|A|^{2α} + |A*|^{2(1−α)}‖ − ℓ²(A^{α/2})·ℓ²(A^{(1−α)/2})",
       N, S.SINGLE, _e47, params=ParamSpec(alpha=_UNIT), requires_psd=True, inhomogeneous=True),
    _d("E4.9", "w(A) − w²_min(A^{1/2}) ≤ ½‖|A| + |A*|‖ − ℓ⁴(A^{1/4})", N, S.SINGLE, _e49,
       requires_psd=True, inhomogeneous=True),
    _d("KEY", "|⟨x,e⟩⟨e,y⟩| ≤ ½(|⟨x,y⟩| + ‖x‖‖y‖), ‖e‖ = 1", E, S.VECTOR_TRIPLE, _key,
       default_ensembles=("vectors",), homogeneity_degree=2),
    _d("DCS", "|⟨x,y⟩| ≤ |⟨x,e⟩⟨e,y⟩| + |⟨x,y⟩ − ⟨x,e⟩⟨e,y⟩| ≤ ‖x‖‖y‖", E, S.VECTOR_TRIPLE, _dragomir_cs,
       default_ensembles=("vectors",), homogeneity_degree=2),
    _d("EQ2.11", "w((A+B)²) ≤ w(A²) + w(B²) + ¼·min{w(BA²B) + ‖AB‖², w(AB²A) + ‖BA‖²}", N, S.PAIR, _eq211,
       inhomogeneous=True),
    _d("EQ2.11-HALF", "w((A+B)²) ≤ w(A²) + w(B²) + ½(w(BA²B) + ‖AB‖²)", N, S.PAIR, _eq211_half,
       inhomogeneous=True),
    _d("EQ2.14", "w(A²) ≤ ⅛(w(A⁴) + ‖A²‖²)", N, S.SINGLE, _eq214, inhomogeneous=True),
    _d("EQ2.18", "w((A+B)ⁿ) ≤ ½Σ C(n,k)‖f(|T_k|) + g(|T_k*|)‖, T_k = {(A+d_B)^k 1}Bⁿ⁻ᵏ", N, S.PAIR, _eq218,
       params=ParamSpec(alpha=_UNIT, n=_POWERS), inhomogeneous=True),
    _d("NORM-REM", "‖(A+B)ⁿ‖ ≤ ½Σ C(n,k)‖f(|T_k|) + g(|T_k*|)‖", N, S.PAIR, _norm_rem,
       params=ParamSpec(alpha=_UNIT, n=_POWERS), inhomogeneous=True),
    _d("EQ2.19", "w(A+B) ≤ ½‖f(|B|) + g(|B*|) + f(|A|) + g(|A*|)‖", N, S.PAIR, _eq219,
       params=ParamSpec(alpha=_UNIT), inhomogeneous=True),
    _d("EQ2.19-literal", "w(A+B) ≤ ½‖f(|B|) + g(|B*|) + f(|C|) + g(|C*|)‖, C = A + BA − AB", N, S.PAIR,
       _eq219_literal, params=ParamSpec(alpha=_UNIT), inhomogeneous=True),
    _d("NORM-2.19", "‖A+B‖ ≤ ½‖f(|B|) + g(|B*|) + f(|A|) + g(|A*|)‖", N, S.PAIR, _norm_219,
       params=ParamSpec(alpha=_UNIT), inhomogeneous=True),
    _d("EQ2.20", "w((A+B)ⁿ) ≤ ½Σ C(n,k)‖f(|AᵏBⁿ⁻ᵏ|) + g(|(AᵏBⁿ⁻ᵏ)*|)‖, AB = BA", N, S.PAIR_COMMUTING, _eq220,
       params=ParamSpec(alpha=_UNIT, n=_POWERS), default_ensembles=("commuting",), inhomogeneous=True),
    _d("NORM-REM-C", "‖(A+B)ⁿ‖ ≤ ½Σ C(n,k)‖f(|AᵏBⁿ⁻ᵏ|) + g(|(AᵏBⁿ⁻ᵏ)*|)‖, AB = BA", N, S.PAIR_COMMUTING,
       _norm_rem_commuting, params=ParamSpec(alpha=_UNIT, n=_POWERS), default_ensembles=("commuting",),
       inhomogeneous=True),
    _d("NORM-ALPHA", "‖A+B‖ ≤ ½‖|B|^α + |B*|^{1−α} + |A|^α + |A*|^{1−α}‖, AB = BA", N, S.PAIR_COMMUTING,
       _norm_alpha, params=ParamSpec(alpha=_UNIT), default_ensembles=("commuting",), inhomogeneous=True),
    _d("EQ2.21", "w(Aⁿ) ≤ ½‖f(|Aⁿ|) + g(|(Aⁿ)*|)‖, fg = t", N, S.SINGLE, _power_bound,
       params=ParamSpec(alpha=_UNIT, n=_POWERS), inhomogeneous=True),
    _d("EQ2.22", "w(Aⁿ) ≤ ½‖|Aⁿ|^α + |(Aⁿ)*|^{1−α}‖", N, S.SINGLE, _power_bound,
       params=ParamSpec(alpha=_UNIT, n=_POWERS), inhomogeneous=True),
    _d("EQ2.23", "w(A) ≤ ½‖|A|^α + |A*|^{1−α}‖", N, S.SINGLE, _power_bound,
       params=ParamSpec(alpha=_UNIT), inhomogeneous=True),
    _d("EQ2.24", "w(A) ≤ ½‖|A| + 1‖ ≤ ¼(1 + ‖A‖ + √((‖A‖−1)² + 4‖A‖))", N, S.SINGLE, _eq224,
       inhomogeneous=True),
    _d("FK3", "‖A+B‖ ≤ ½(‖A‖ + ‖B‖ + √((‖A‖−‖B‖)² + 4‖A^{1/2}B^{1/2}‖²)), A, B ≥ 0", E, S.PAIR, _fk3,
       requires_psd=True, homogeneity_degree=1),
    _d("CORDES", "‖A^{1/2}B^{1/2}‖ ≤ ‖AB‖^{1/2}, A, B ≥ 0", E, S.PAIR, _cordes,
       requires_psd=True, homogeneity_degree=1),
]

REGISTRY: Dict[str, InequalityDescriptor] = {d.id: d for d in _DESCRIPTORS}

ALIASES = {"C2.2a": "C2.2α"}

if len(REGISTRY) != len(_DESCRIPTORS):
    raise RuntimeError("登錄表中有重複的 id")


def canonical_id(inequality_id: str) -> str:
    return ALIASES.get(inequality_id, inequality_id)


def get_descriptor(inequality_id: str) -> InequalityDescriptor:
    """
    取得不等式描述

    Raises:
        UnknownInequality: id 不存在
    """
    try:
        return REGISTRY[canonical_id(inequality_id)]
    except KeyError:
        raise UnknownInequality(f"未登錄的不等式: {inequality_id}") from None


def list_ids(status: Optional[Status] = None) -> List[str]:
    """已登錄的 id（排序），可依狀態篩選"""
    return sorted(i for i, d in REGISTRY.items() if status is None or d.status is status)
