#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
數值域幾何
w(T)、w_min(T) 與 W(T) 邊界取樣

以 T = H + iK 表示，H_θ = Re(e^{iθ}T) = cosθ·H − sinθ·K。
W(T) 在方向 θ 的支撐函數為 λ_max(H_{−θ})。
"""

import csv
import io
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import ConvexHull

from utils.settings_manager import get_tolerances
from .errors import InvalidParameters, NoConvergence
from .linalg import MatrixLike, as_array

logger = logging.getLogger(__name__)

TOL = get_tolerances()


@dataclass(frozen=True, eq=False)
class RadiusProfile:
    """θ 網格上 λ_max(H_θ) 與 λ_min(H_θ)，θ_k = 2πk/m"""

    thetas: np.ndarray
    lam_max: np.ndarray
    lam_min: np.ndarray


@dataclass(frozen=True)
class MinimalRadius:
    """
    w_min 計算結果

    Attributes:
        value: w_min(T)
        support: max_θ λ_min(H_θ)，為負表示 0 ∈ W(T)
        boundary: support 落在 [−1e−10, 0]，0 位於 W(T) 邊界附近
    """

    value: float
    support: float
    boundary: bool


def _parts(T: MatrixLike):
    t = as_array(T)
    h = (t + t.conj().T) / 2
    k = (t - t.conj().T) / 2j
    return h, k


def _eigvalsh(stack: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(stack)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"θ 掃描的特徵值求解失敗: {e}") from e


def radius_profile(T: MatrixLike, grid: Optional[int] = None) -> RadiusProfile:
    """
    在 θ ∈ [0, 2π) 的等距網格上計算 λ_max(H_θ)、λ_min(H_θ)

    只對 [0, π) 求解，另一半由 λ_max(H_{θ+π}) = −λ_min(H_θ) 得到。

    Args:
        T: 方陣
        grid: 網格點數（偶數），預設 theta_grid

    Returns:
        RadiusProfile
    """
    m = grid or TOL.theta_grid
    if m % 2:
        m += 1
    h, k = _parts(T)
    half = m // 2
    thetas = 2.0 * np.pi * np.arange(m) / m
    c = np.cos(thetas[:half])[:, None, None]
    s = np.sin(thetas[:half])[:, None, None]
    values = _eigvalsh(c * h[None] - s * k[None])
    top, bottom = values[:, -1], values[:, 0]
    lam_max = np.concatenate([top, -bottom])
    lam_min = np.concatenate([bottom, -top])
    return RadiusProfile(thetas=thetas, lam_max=lam_max, lam_min=lam_min)


def _refine(objective, thetas: np.ndarray, samples: np.ndarray) -> float:
    """在網格前幾個最大值的相鄰區間內以有界 Brent 法細化"""
    m = thetas.shape[0]
    step = 2.0 * np.pi / m
    best = float(np.max(samples))
    order = np.argsort(samples)[::-1][: TOL.refine_top]
    for idx in order:
        center = thetas[idx]
        result = minimize_scalar(
            lambda th: -objective(th),
            bounds=(center - step, center + step),
            method="bounded",
            options={"xatol": TOL.theta_tolerance},
        )
        if result.success:
            best = max(best, float(-result.fun))
    return best


def numerical_radius(T: MatrixLike) -> float:
    """
    w(T) = max_θ λ_max(H_θ)

    Args:
        T: 方陣

    Returns:
        w(T) ≥ 0
    """
    h, k = _parts(T)
    if not np.any(k):
        # Hermitian：w(T) = ‖T‖
        return float(np.max(np.abs(_eigvalsh(h))))

    profile = radius_profile(T)

    def top(theta: float) -> float:
        return float(_eigvalsh(np.cos(theta) * h - np.sin(theta) * k)[-1])

    value = max(0.0, _refine(top, profile.thetas, profile.lam_max))
    logger.debug(f"w(T) = {value:.12g}")
    return value


def minimal_radius_detail(T: MatrixLike) -> MinimalRadius:
    """w_min(T) = max(0, max_θ λ_min(H_θ))，附帶邊界旗標"""
    h, k = _parts(T)
    profile = radius_profile(T)

    def bottom(theta: float) -> float:
        return float(_eigvalsh(np.cos(theta) * h - np.sin(theta) * k)[0])

    support = _refine(bottom, profile.thetas, profile.lam_min)
    boundary = -TOL.boundary_window <= support <= 0.0
    value = max(0.0, support)
    if boundary:
        logger.debug(f"0 位於 W(T) 邊界附近: support = {support:.3e}")
    return MinimalRadius(value=value, support=support, boundary=boundary)


def minimal_numerical_radius(T: MatrixLike) -> float:
    """w_min(T) = inf{|⟨Tx,x⟩| : ‖x‖ = 1}"""
    return minimal_radius_detail(T).value


def minimal_radius_oracle(
    T: MatrixLike,
    restarts: int = 10_000,
    steps: int = 200,
    step: float = 0.1,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """
    以隨機重啟的投影梯度法最小化 |⟨Tx,x⟩|（交叉驗證用）

    每個重啟獨立地在目標值上升時將步長減半。
    """
    t = as_array(T)
    scale = np.linalg.norm(t, 2)
    if scale == 0.0:
        return 0.0
    t = t / scale
    th = t.conj().T
    rng = rng if rng is not None else np.random.default_rng(0)
    n = t.shape[0]

    x = rng.standard_normal((restarts, n)) + 1j * rng.standard_normal((restarts, n))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    steps_size = np.full(restarts, float(step))

    def evaluate(v):
        tv = v @ t.T
        q = np.einsum("ri,ri->r", v.conj(), tv)
        return q, tv

    q, tv = evaluate(x)
    objective = np.abs(q) ** 2
    for _ in range(steps):
        grad = np.conj(q)[:, None] * tv + q[:, None] * (x @ th.T)
        candidate = x - steps_size[:, None] * grad
        candidate /= np.linalg.norm(candidate, axis=1, keepdims=True)
        q_new, tv_new = evaluate(candidate)
        obj_new = np.abs(q_new) ** 2
        accept = obj_new <= objective
        x = np.where(accept[:, None], candidate, x)
        q = np.where(accept, q_new, q)
        tv = np.where(accept[:, None], tv_new, tv)
        objective = np.where(accept, obj_new, objective)
        steps_size = np.where(accept, steps_size, steps_size / 2)

    return float(np.sqrt(np.min(objective)) * scale)


def boundary_thetas(m: int) -> np.ndarray:
    if m < 3:
        raise InvalidParameters(f"邊界取樣點數必須 ≥ 3: {m}")
    return 2.0 * np.pi * np.arange(m) / m


def range_boundary(T: MatrixLike, m: int) -> List[complex]:
    """
    W(T) 邊界取樣：對每個 θ_k = 2πk/m 取 Re(e^{−iθ_k}T) 的最大特徵向量 u，回傳 ⟨Tu,u⟩

    Args:
        T: 方陣
        m: 取樣點數（≥ 3）

    Returns:
        m 個複數點，凸包由內側逼近 W(T)
    """
    thetas = boundary_thetas(m)
    t = as_array(T)
    h, k = _parts(t)
    stack = np.cos(thetas)[:, None, None] * h[None] + np.sin(thetas)[:, None, None] * k[None]
    try:
        _, vectors = np.linalg.eigh(stack)
    except np.linalg.LinAlgError as e:
        raise NoConvergence(f"邊界取樣的特徵分解失敗: {e}") from e
    u = vectors[:, :, -1]
    points = np.einsum("ki,ij,kj->k", u.conj(), t, u)
    return [complex(z) for z in points]


def range_area(T: MatrixLike, m: int = 512) -> float:
    """邊界取樣點凸包的面積，退化（線段或點）時為 0"""
    points = np.asarray(range_boundary(T, m))
    xy = np.column_stack([points.real, points.imag])
    spread = xy - xy.mean(axis=0)
    if np.linalg.matrix_rank(spread, tol=1e-12 * max(1.0, np.max(np.abs(xy)))) < 2:
        return 0.0
    try:
        return float(ConvexHull(xy).volume)
    except (RuntimeError, ValueError) as e:
        logger.debug(f"凸包退化: {e}")
        return 0.0


def write_boundary_csv(points: Sequence[complex], thetas: Sequence[float]) -> str:
    """邊界點 CSV（theta,re,im，17 位有效數字）"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["theta", "re", "im"])
    for theta, z in zip(thetas, points):
        writer.writerow([f"{theta:.17g}", f"{z.real:.17g}", f"{z.imag:.17g}"])
    return buffer.getvalue()
