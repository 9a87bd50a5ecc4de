"""Biphoton amplitudes on per-photon grids, joint densities and slit scans."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares
from scipy.special import fresnel

from .errors import GridInadequate, OutOfGrid
from .frft import JointAmplitude, SampledAxis
from .gaussian import BiphotonMoments, DoubleGaussianParams, position_density

__all__ = [
    "PumpSincParams",
    "JointDensity",
    "ConditionalProfile",
    "build_double_gaussian",
    "build_pump_sinc",
    "sinc_relative_profile",
    "sinc_equivalent_sigma_minus",
    "joint_density",
    "analytic_density",
    "conditional_profile",
    "slit_width_dimensionless",
]

SINC_Q_SAMPLES = 4096


@dataclass(frozen=True)
class PumpSincParams:
    """Gaussian pump envelope times the crystal phase-matching sinc.

    ``sigma_pump`` is dimensionless; the remaining fields are SI.
    """

    sigma_pump: float
    crystal_length_L: float
    pump_wavenumber_K: float
    scale_s: float

    def __post_init__(self):
        for name in ("sigma_pump", "crystal_length_L", "pump_wavenumber_K", "scale_s"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def sinc_coefficient(self) -> float:
        """b in sinc(b q^2) for dimensionless relative momentum q."""
        return self.crystal_length_L / (4.0 * self.pump_wavenumber_K * self.scale_s ** 2)


@dataclass
class JointDensity:
    axis1: SampledAxis
    axis2: SampledAxis
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.axis1.n, self.axis2.n):
            raise ValueError("density shape does not match axes")
        if np.any(self.values < 0):
            raise ValueError("density has negative entries")

    def integral(self) -> float:
        return float(np.sum(self.values)) * self.axis1.spacing * self.axis2.spacing

    def grid_moments(self) -> tuple[float, float, float]:
        """(Var rho1, Var rho2, Cov) by grid quadrature."""
        x, y = self.axis1.points, self.axis2.points
        p = self.values / np.sum(self.values)
        p1, p2 = p.sum(axis=1), p.sum(axis=0)
        m1, m2 = p1 @ x, p2 @ y
        v1 = p1 @ (x - m1) ** 2
        v2 = p2 @ (y - m2) ** 2
        c = (x - m1) @ p @ (y - m2)
        return float(v1), float(v2), float(c)

    def correlation(self) -> float:
        v1, v2, c = self.grid_moments()
        return c / math.sqrt(v1 * v2)


@dataclass
class ConditionalProfile:
    """Coincidence scan of one photon with the partner held at ``fixed_rho``.

    ``values`` are normalised to unit area on ``axis``; ``fixed_rho`` is the
    grid point actually used.
    """

    fixed_rho: float
    fixed_photon: int
    axis: SampledAxis
    values: np.ndarray
    slit_width: float = 0.0


def _check_axes_for(sigma_wide: float, sigma_narrow: float, axes, narrow_name: str) -> None:
    for k, ax in enumerate(axes, start=1):
        if ax.extent < 6.0 * sigma_wide:
            raise GridInadequate(
                f"axis{k} extent {ax.extent:.4g} < 6 * sigma_plus = {6 * sigma_wide:.4g}"
            )
        if ax.spacing > sigma_narrow / 3.0:
            raise GridInadequate(
                f"axis{k} spacing {ax.spacing:.4g} > {narrow_name} / 3 = {sigma_narrow / 3:.4g}"
            )


def build_double_gaussian(
    params: DoubleGaussianParams, axis1: SampledAxis, axis2: SampledAxis
) -> JointAmplitude:
    """Sample exp(-(r1+r2)^2/4s+^2) exp(-(r1-r2)^2/4s-^2) / sqrt(pi s+ s-)."""
    sp, sm = params.sigma_plus, params.sigma_minus
    _check_axes_for(sp, sm, (axis1, axis2), "sigma_minus")
    x1 = axis1.points[:, None]
    x2 = axis2.points[None, :]
    psi = np.exp(-((x1 + x2) ** 2) / (4 * sp * sp) - ((x1 - x2) ** 2) / (4 * sm * sm))
    return JointAmplitude(axis1, axis2, psi / math.sqrt(math.pi * sp * sm))


def _sinc_closed_form(b: float, v: np.ndarray) -> np.ndarray:
    """g(v) = int sinc(b q^2) cos(q v / 2) dq, exactly.

    Writing sinc(b q^2) = int_0^1 cos(t b q^2) dt and doing the Fresnel
    integral over q leaves sqrt(pi/b) Re[exp(-i pi/4) I(A)] with
    I(A) = int_1^inf u^(-3/2) exp(i A u) du and A = v^2 / (16 b).  Parts
    integration turns I into Fresnel integrals.
    """
    A = v * v / (16.0 * b)
    pos = A > 0
    S, C = fresnel(np.sqrt(2.0 * A[pos] / math.pi))
    # A * int_1^inf exp(i A x^2) dx; vanishes as A -> 0
    corr = np.zeros_like(A, dtype=complex)
    corr[pos] = 4j * A[pos] * np.sqrt(math.pi / (2.0 * A[pos])) * ((0.5 - C) + 1j * (0.5 - S))
    I = 2.0 * np.exp(1j * A) + corr
    return math.sqrt(math.pi / b) * np.real(np.exp(-0.25j * math.pi) * I)


def _sinc_quadrature(b: float, v: np.ndarray, n_q: int) -> np.ndarray:
    # midpoint sum with the step chosen so that neither the chirp sin(b q^2)
    # nor cos(q v / 2) aliases: b n dq^2 + vmax dq / 2 = pi / 2
    vmax = float(np.max(np.abs(v))) if v.size else 0.0
    dq = (-vmax / 2 + math.sqrt(vmax * vmax / 4 + 2 * math.pi * b * n_q)) / (2 * b * n_q)
    q = (np.arange(n_q) - n_q / 2 + 0.5) * dq
    G = np.sinc(b * q * q / math.pi)  # numpy sinc is sin(pi x)/(pi x)
    return (np.cos(0.5 * np.outer(v, q)) @ G) * dq


@lru_cache(maxsize=32)
def _sinc_profile_on_lattice(b: float, v0: float, dv: float, count: int, method: str, n_q: int) -> np.ndarray:
    v = v0 + dv * np.arange(count)
    g = _sinc_closed_form(b, v) if method == "exact" else _sinc_quadrature(b, v, n_q)
    g.setflags(write=False)
    return g


def sinc_relative_profile(
    params: PumpSincParams, v: np.ndarray, method: str = "exact", n_q: int = SINC_Q_SAMPLES
) -> np.ndarray:
    """Relative-coordinate amplitude g(v) on a uniform lattice ``v`` (unnormalised).

    G(q) = sinc(b q^2) is even, so g is its cosine transform; the
    relative momentum q pairs with v / 2.  ``method="exact"`` uses the
    Fresnel-integral closed form.  ``method="quadrature"`` sums ``n_q``
    midpoint samples of G; it is accurate only while the stationary point
    q = v / 4b of the integrand stays inside the sampled q range.
    """
    if method not in ("exact", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    v = np.asarray(v, dtype=float)
    dv = float(v[1] - v[0]) if v.size > 1 else 1.0
    g = _sinc_profile_on_lattice(params.sinc_coefficient, float(v[0]), dv, v.size, method, n_q)
    return np.array(g)


def sinc_equivalent_sigma_minus(params: PumpSincParams, method: str = "fit", n_v: int = 4001) -> float:
    """Double-Gaussian sigma_minus standing in for the sinc relative profile.

    ``method="rms"`` matches the rms width of |g|^2, whose 1/v^4 tails make
    it noticeably wider than the core. ``method="fit"`` least-squares fits
    exp(-v^2 / 2 s^2) to the peak-normalised |g|^2 over the core.
    """
    root_b = math.sqrt(params.sinc_coefficient)
    if method == "rms":
        v = np.linspace(-400.0 * root_b, 400.0 * root_b, 20 * n_v + 1)
        dens = sinc_relative_profile(params, v) ** 2
        return math.sqrt(float(np.sum(v * v * dens) / np.sum(dens)))
    if method != "fit":
        raise ValueError(f"unknown method {method!r}")
    v = np.linspace(-40.0 * root_b, 40.0 * root_b, n_v)
    dens = sinc_relative_profile(params, v) ** 2
    dens = dens / dens.max()
    res = least_squares(
        lambda p: p[0] * np.exp(-0.5 * v * v / (p[1] * p[1])) - dens,
        x0=[1.0, 2.0 * root_b],
        xtol=1e-12,
    )
    return abs(float(res.x[1]))


def build_pump_sinc(
    params: PumpSincParams, axis1: SampledAxis, axis2: SampledAxis
) -> JointAmplitude:
    """Psi = f(rho1 + rho2) g(rho1 - rho2) with g the transform of the sinc."""
    if not math.isclose(axis1.spacing, axis2.spacing, rel_tol=1e-12):
        raise GridInadequate("pump-sinc state needs equal spacing on both axes")
    dx = axis1.spacing
    # rho1_i - rho2_j only takes 2n-1 distinct values on a common-spacing grid
    i = np.arange(axis1.n)[:, None]
    j = np.arange(axis2.n)[None, :]
    offset = (axis1.points[0] - axis2.points[-1])
    lattice_index = i - j + (axis2.n - 1)
    v_lattice = offset + dx * np.arange(axis1.n + axis2.n - 1)
    sigma_eq = sinc_equivalent_sigma_minus(params)
    _check_axes_for(params.sigma_pump, sigma_eq, (axis1, axis2), "fitted width of g")
    g = sinc_relative_profile(params, v_lattice)

    u = axis1.points[:, None] + axis2.points[None, :]
    psi = np.exp(-(u ** 2) / (4 * params.sigma_pump ** 2)) * g[lattice_index]
    amp = JointAmplitude(axis1, axis2, psi)
    return JointAmplitude(axis1, axis2, psi / amp.norm())


def joint_density(psi: JointAmplitude) -> JointDensity:
    return JointDensity(psi.axis1, psi.axis2, np.abs(psi.samples) ** 2)


def analytic_density(m: BiphotonMoments, axis1: SampledAxis, axis2: SampledAxis) -> JointDensity:
    """Joint density of the Gaussian state with moments ``m``, sampled on a grid."""
    vals = position_density(m, axis1.points[:, None], axis2.points[None, :])
    return JointDensity(axis1, axis2, vals)


def _boxcar(width: float, dx: float) -> np.ndarray:
    """Discrete unit-sum boxcar: overlap of each cell with [-w/2, w/2]."""
    half = width / 2.0
    m = int(math.ceil(half / dx + 0.5))
    k = np.arange(-m, m + 1) * dx
    lo = np.maximum(k - dx / 2, -half)
    hi = np.minimum(k + dx / 2, half)
    w = np.clip(hi - lo, 0.0, None)
    w = w[w > 0] if np.any(w > 0) else np.array([1.0])
    return w / w.sum()


def conditional_profile(
    d: JointDensity, fixed_photon: int, fixed_rho: float, slit_width: float = 0.0
) -> ConditionalProfile:
    """Coincidence profile of the scanned photon with a slit at ``fixed_rho``."""
    if fixed_photon not in (1, 2):
        raise ValueError(f"fixed_photon must be 1 or 2, got {fixed_photon!r}")
    if slit_width < 0:
        raise ValueError("slit_width must be >= 0")
    values = d.values if fixed_photon == 1 else d.values.T
    fixed_axis, scan_axis = (d.axis1, d.axis2) if fixed_photon == 1 else (d.axis2, d.axis1)
    if not fixed_axis.contains(fixed_rho):
        raise OutOfGrid(
            f"fixed_rho={fixed_rho} outside [{fixed_axis.lo:.4g}, {fixed_axis.hi:.4g}]"
        )
    idx = fixed_axis.nearest_index(fixed_rho)
    snapped = float(fixed_axis.points[idx])

    if slit_width == 0.0:
        prof = values[idx].copy()
    else:
        wf = _boxcar(slit_width, fixed_axis.spacing)
        half = len(wf) // 2
        lo, hi = idx - half, idx + half + 1
        if lo < 0 or hi > fixed_axis.n:
            raise OutOfGrid("slit extends past the edge of the fixed-photon axis")
        prof = wf @ values[lo:hi]
        ws = _boxcar(slit_width, scan_axis.spacing)
        prof = np.convolve(prof, ws, mode="same")

    area = float(np.sum(prof)) * scan_axis.spacing
    if area > 0:
        prof = prof / area
    return ConditionalProfile(snapped, fixed_photon, scan_axis, prof, float(slit_width))


def slit_width_dimensionless(width_m: float, scale_per_m: float) -> float:
    if width_m < 0 or scale_per_m <= 0:
        raise ValueError("slit width must be >= 0 and scale > 0")
    return width_m * scale_per_m
