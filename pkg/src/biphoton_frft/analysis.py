"""Gaussian fits of coincidence profiles and Table-I style variance tables."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import FitDegenerate
from .frft import FrftOrder, OrderLike, SampledAxis, as_order, joint_frft
from .gaussian import (
    DoubleGaussianParams,
    conditional_variance,
    initial_moments,
    propagate_moments,
    violates_epr_bound,
)
from .twophoton import (
    ConditionalProfile,
    JointDensity,
    analytic_density,
    build_double_gaussian,
    conditional_profile,
    joint_density,
)

__all__ = [
    "GaussianFit",
    "VarianceTableRow",
    "EprResult",
    "TABLE_SCENARIOS",
    "fit_gaussian",
    "fit_gaussian_xy",
    "auto_axes",
    "scenario_density",
    "variance_table",
    "epr_from_variances",
]

_P = math.pi
TABLE_SCENARIOS: list[tuple[float, float]] = [
    (_P / 2, _P / 2),
    (_P, _P),
    (_P / 2, _P),
    (_P, _P / 2),
    (3 * _P / 4, 5 * _P / 4),
    (_P / 4, 3 * _P / 4),
    (_P / 4, 5 * _P / 4),
    (3 * _P / 4, 3 * _P / 4),
]

MAX_AUTO_SAMPLES = 4096


@dataclass(frozen=True)
class GaussianFit:
    amplitude: float
    mean: float
    variance: float
    offset: float
    rms_residual: float


@dataclass(frozen=True)
class VarianceTableRow:
    alpha: FrftOrder
    beta: FrftOrder
    var_rho2_given_rho1: float
    var_rho1_given_rho2: float


@dataclass(frozen=True)
class EprResult:
    product: float
    violated: bool


def _model(p, x):
    return p[0] * np.exp(-0.5 * (x - p[1]) ** 2 / p[2]) + p[3]


def _jac(p, x):
    e = np.exp(-0.5 * (x - p[1]) ** 2 / p[2])
    d = x - p[1]
    return np.column_stack([
        e,
        p[0] * e * d / p[2],
        p[0] * e * d * d / (2 * p[2] ** 2),
        np.ones_like(x),
    ])


def fit_gaussian_xy(x: np.ndarray, y: np.ndarray) -> GaussianFit:
    """Least-squares fit of ``A exp(-(x - mu)^2 / 2v) + c`` to samples."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 8:
        raise FitDegenerate(f"need at least 8 samples, got {x.size}")
    ymax, ymin = float(np.max(y)), float(np.min(y))
    if not ymax > 0 or ymax - ymin < 1e-12 * abs(ymax):
        raise FitDegenerate("profile is flat")

    c0 = max(ymin, 0.0)
    w = y - c0
    mu0 = float(np.sum(w * x) / np.sum(w))
    v0 = float(np.sum(w * (x - mu0) ** 2) / np.sum(w))
    dx = float(np.min(np.diff(x))) if x.size > 1 else 1.0
    v0 = max(v0, dx * dx / 4)
    p0 = np.array([ymax - c0, mu0, v0, c0])

    lower = [0.0, -np.inf, 1e-300, 0.0]
    res = least_squares(
        lambda p: _model(p, x) - y,
        p0,
        jac=lambda p: _jac(p, x),
        bounds=(lower, np.inf),
        method="trf",
        x_scale="jac",
        xtol=1e-10,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=200,
    )
    A, mu, v, c = (float(t) for t in res.x)
    span = float(x[-1] - x[0])
    if not np.all(np.isfinite(res.x)) or v <= 0 or v > 1e6 * span * span or A <= 0:
        raise FitDegenerate(f"fit diverged (status {res.status}: {res.message})")
    rms = math.sqrt(float(np.mean(res.fun ** 2)))
    return GaussianFit(A, mu, v, c, rms)


def fit_gaussian(profile: ConditionalProfile) -> GaussianFit:
    return fit_gaussian_xy(profile.axis.points, profile.values)


def auto_axes(params: DoubleGaussianParams, alpha: OrderLike, beta: OrderLike,
              slit_width: float = 0.0) -> tuple[SampledAxis, SampledAxis]:
    """Per-photon grids covering +-6 marginal sd and resolving the conditionals."""
    m = propagate_moments(initial_moments(params), alpha, beta)
    cond = min(conditional_variance(m, "rho1_given_rho2"), conditional_variance(m, "rho2_given_rho1"))
    feature = math.sqrt(cond)
    if slit_width > 0:
        feature = min(feature, slit_width)
    extents = [12.0 * math.sqrt(m.var(i)) + 2.0 * slit_width for i in (0, 2)]
    # coarsen rather than truncate when the sample budget is exceeded
    spacing = max(feature / 6.0, max(extents) / MAX_AUTO_SAMPLES)
    axes = []
    for extent in extents:
        n = int(math.ceil(extent / spacing / 2.0)) * 2
        axes.append(SampledAxis(max(n, 8), spacing))
    return axes[0], axes[1]


def scenario_density(
    params: DoubleGaussianParams,
    alpha: OrderLike,
    beta: OrderLike,
    method: str = "analytic",
    axes: tuple[SampledAxis, SampledAxis] | None = None,
    path: str = "auto",
    slit_width: float = 0.0,
) -> JointDensity:
    """Joint density after (alpha, beta).

    ``"numeric"`` samples the initial amplitude and runs the FRFT engine;
    ``"analytic"`` samples the Gaussian implied by the rotated moments,
    which is exact for this state and needs far fewer samples when
    sigma_plus / sigma_minus is large.
    """
    alpha, beta = as_order(alpha), as_order(beta)
    if method == "analytic":
        ax1, ax2 = axes if axes is not None else auto_axes(params, alpha, beta, slit_width)
        m = propagate_moments(initial_moments(params), alpha, beta)
        return analytic_density(m, ax1, ax2)
    if method == "numeric":
        if axes is None:
            ax = SampledAxis.self_dual(1024)
            axes = (ax, ax)
        psi = build_double_gaussian(params, *axes)
        return joint_density(joint_frft(psi, alpha, beta, path=path))
    raise ValueError(f"unknown method {method!r}")


def _row(params, scenario, slit_width, method, axes, path) -> VarianceTableRow:
    alpha, beta = (as_order(o) for o in scenario)
    d = scenario_density(params, alpha, beta, method, axes, path, slit_width)
    fit21 = fit_gaussian(conditional_profile(d, 1, 0.0, slit_width))
    fit12 = fit_gaussian(conditional_profile(d, 2, 0.0, slit_width))
    return VarianceTableRow(alpha, beta, fit21.variance, fit12.variance)


def variance_table(
    params: DoubleGaussianParams,
    scenarios: Iterable[Sequence[OrderLike]] = TABLE_SCENARIOS,
    slit_width: float = 0.0,
    method: str = "analytic",
    axes: tuple[SampledAxis, SampledAxis] | None = None,
    path: str = "auto",
    workers: int = 1,
) -> list[VarianceTableRow]:
    """Fitted conditional variances at rho_fixed = 0 for each (alpha, beta)."""
    scenarios = list(scenarios)
    job = lambda sc: _row(params, sc, slit_width, method, axes, path)  # noqa: E731
    if workers <= 1:
        return [job(sc) for sc in scenarios]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, scenarios))


def epr_from_variances(v_rho: float, v_q: float) -> EprResult:
    if v_rho <= 0 or v_q <= 0:
        raise ValueError("variances must be positive")
    product = v_rho * v_q
    return EprResult(product, violates_epr_bound(product))
