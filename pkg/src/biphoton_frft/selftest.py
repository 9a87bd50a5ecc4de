"""Invariant checks runnable from the command line.

Each group takes the transform and moment-propagation callables explicitly,
so that deliberately broken versions can be substituted to confirm that the
group is sensitive to the fault it guards against.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import frft as _frft
from . import gaussian as _g
from .analysis import scenario_density
from .optics import OpticalSystem, compose, match_frft, type1_elements
from .twophoton import analytic_density

FAULTS = ("kernel-phase", "cov-transpose")


@dataclass
class GroupResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class Toolkit:
    frft_1d: Callable
    propagate_moments: Callable


def _kernel_phase_fault(frft_1d):
    # the 2D prefactor exp(i a/2) used as if it were the 1D one
    def broken(field, order, path="auto", workers=None):
        out = frft_1d(field, order, path, workers)
        a = _frft.as_order(order).alpha
        return _frft.ComplexField1D(out.axis, out.samples * np.exp(0.5j * a))
    return broken


def _cov_transpose_fault(m, alpha, beta):
    R = _g.rotation_matrix(alpha, beta)
    cov = R @ m.cov @ R
    return _g.BiphotonMoments(0.5 * (cov + cov.T))


def toolkit(inject: str | None = None) -> Toolkit:
    kit = Toolkit(_frft.frft_1d, _g.propagate_moments)
    if inject is None:
        return kit
    if inject == "kernel-phase":
        kit.frft_1d = _kernel_phase_fault(kit.frft_1d)
    elif inject == "cov-transpose":
        kit.propagate_moments = _cov_transpose_fault
    else:
        raise ValueError(f"unknown fault {inject!r}; choose from {FAULTS}")
    return kit


def random_field(rng: np.random.Generator, axis: _frft.SampledAxis, n_modes: int = 12) -> _frft.ComplexField1D:
    """Random smooth field: complex combination of low Hermite-Gauss modes."""
    coeffs = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    samples = sum(c * _frft.hermite_gauss(k, axis).samples for k, c in enumerate(coeffs))
    return _frft.ComplexField1D(axis, samples).normalized()


def check_additivity(kit: Toolkit, rng, trials: int = 20, n: int = 1024) -> tuple[bool, str]:
    axis = _frft.SampledAxis.self_dual(n)
    worst = 0.0
    for _ in range(trials):
        f = random_field(rng, axis)
        a, b = rng.uniform(0, 2 * math.pi, size=2)
        two = kit.frft_1d(kit.frft_1d(f, a), b).samples
        one = kit.frft_1d(f, a + b).samples
        worst = max(worst, np.linalg.norm(two - one) / np.linalg.norm(f.samples))
    return worst <= 1e-5, f"max relative error {worst:.3g} (tol 1e-5)"


def check_unitarity(kit: Toolkit, rng, trials: int = 20, n: int = 1024) -> tuple[bool, str]:
    axis = _frft.SampledAxis.self_dual(n)
    worst = 0.0
    for _ in range(trials):
        f = random_field(rng, axis)
        g = kit.frft_1d(f, rng.uniform(0, 2 * math.pi))
        worst = max(worst, abs(g.norm() - f.norm()) / f.norm())
    return worst <= 1e-6, f"max relative norm change {worst:.3g} (tol 1e-6)"


def check_eigenfunctions(kit: Toolkit, rng, trials: int = 20, n: int = 1024) -> tuple[bool, str]:
    axis = _frft.SampledAxis.self_dual(n)
    modes = [_frft.hermite_gauss(k, axis) for k in range(11)]
    worst = 0.0
    for a in rng.uniform(0, 2 * math.pi, size=trials):
        for k, hg in enumerate(modes):
            out = kit.frft_1d(hg, a).samples
            err = np.linalg.norm(out - np.exp(-1j * k * a) * hg.samples) / np.linalg.norm(hg.samples)
            worst = max(worst, err)
    return worst <= 1e-6, f"max eigen-relation error {worst:.3g} (tol 1e-6)"


def check_lohmann(kit: Toolkit, rng, trials: int = 1000) -> tuple[bool, str]:
    wavelength = 810e-9
    k = 2 * math.pi / wavelength
    worst = 0.0
    for _ in range(trials):
        f = rng.uniform(0.01, 2.0)
        a = rng.uniform(1e-3, math.pi - 1e-3)
        s = math.sqrt(f * math.sin(a) / k)
        got = match_frft(compose(OpticalSystem(type1_elements(f, a), wavelength, s)))
        worst = max(worst, got.distance(a))
    return worst <= 1e-9, f"max |alpha_hat - alpha| {worst:.3g} (tol 1e-9)"


def check_no_correlation(kit: Toolkit, rng, trials: int = 1000) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(trials):
        p = _g.DoubleGaussianParams(rng.uniform(0.5, 8.0), rng.uniform(0.05, 2.0))
        a = rng.uniform(0, 2 * math.pi)
        m0 = _g.initial_moments(p)
        for b in _g.no_correlation_beta(p, a):
            m = kit.propagate_moments(m0, a, b)
            rel = abs(m.covar(_g.RHO1, _g.RHO2)) / math.sqrt(m.var(_g.RHO1) * m.var(_g.RHO2))
            worst = max(worst, rel)
    return worst <= 1e-12, f"max |r| at solved beta {worst:.3g} (tol 1e-12)"


def check_crosscheck(kit: Toolkit, rng, n: int = 1024) -> tuple[bool, str]:
    p = _g.DoubleGaussianParams(4.0, 0.25)
    axis = _frft.SampledAxis.self_dual(n)
    worst = 0.0
    for a, b in ((math.pi / 2, math.pi / 2), (3 * math.pi / 4, 5 * math.pi / 4)):
        num = scenario_density(p, a, b, method="numeric", axes=(axis, axis))
        m = kit.propagate_moments(_g.initial_moments(p), a, b)
        ref = analytic_density(m, axis, axis)
        worst = max(worst, float(np.max(np.abs(num.values - ref.values))))
    return worst <= 1e-4, f"max |P_numeric - P_moments| {worst:.3g} (tol 1e-4)"


GROUPS: list[tuple[str, Callable]] = [
    ("additivity", check_additivity),
    ("unitarity", check_unitarity),
    ("eigenfunctions", check_eigenfunctions),
    ("lohmann", check_lohmann),
    ("no-correlation", check_no_correlation),
    ("crosscheck", check_crosscheck),
]


def run(inject: str | None = None, seed: int = 20240611, echo: Callable[[str], None] | None = print) -> list[GroupResult]:
    kit = toolkit(inject)
    results = []
    for name, check in GROUPS:
        rng = np.random.default_rng([seed, len(results)])
        t0 = time.perf_counter()
        try:
            passed, detail = check(kit, rng)
        except Exception as exc:  # a crash inside a group is a failure of that group
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        res = GroupResult(name, bool(passed), detail, time.perf_counter() - t0)
        results.append(res)
        if echo is not None:
            echo(f"{'PASS' if res.passed else 'FAIL'} {name}: {detail} [{res.seconds:.2f}s]")
    return results
