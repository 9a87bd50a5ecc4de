"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a single PASS/FAIL line; the lines are printed as they
run (visible with ``-s``) and again in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from biphoton_frft import cli
from biphoton_frft.analysis import TABLE_SCENARIOS, epr_from_variances, fit_gaussian, scenario_density, variance_table
from biphoton_frft.frft import ComplexField1D, SampledAxis, frft_1d, hermite_gauss
from biphoton_frft.gaussian import (
    DoubleGaussianParams,
    conditional_variance,
    epr_product,
    initial_moments,
    no_correlation_beta,
    position_correlation,
    propagate_moments,
)
from biphoton_frft.optics import OpticalSystem, compose, match_frft, scale_per_meter, type1_design, type1_elements
from biphoton_frft.selftest import FAULTS
from biphoton_frft.twophoton import analytic_density, conditional_profile

from conftest import ACCEPTANCE_LINES, PI

LAM = 810e-9


def record(number: int, title: str, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert passed, line


def random_field(rng, axis, n_modes=12):
    coeffs = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    samples = sum(c * hermite_gauss(k, axis).samples for k, c in enumerate(coeffs))
    return ComplexField1D(axis, samples)


def test_c01_additivity():
    rng = np.random.default_rng(101)
    axis = SampledAxis.self_dual(1024)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        f = random_field(rng, axis)
        a, b = rng.uniform(0, 2 * PI, size=2)
        two = frft_1d(frft_1d(f, a), b).samples
        one = frft_1d(f, a + b).samples
        worst = max(worst, np.linalg.norm(two - one) / np.linalg.norm(f.samples))
    dt = time.perf_counter() - t0
    record(1, "FRFT additivity", worst <= 1e-5 and dt <= 30,
           f"max rel error {worst:.2e} (<= 1e-5), {dt:.1f} s (<= 30 s)")


def test_c02_eigenfunctions():
    rng = np.random.default_rng(102)
    axis = SampledAxis.self_dual(1024)
    modes = [hermite_gauss(k, axis) for k in range(11)]
    worst = 0.0
    for a in rng.uniform(0, 2 * PI, size=20):
        for k, hg in enumerate(modes):
            out = frft_1d(hg, a).samples
            want = np.exp(-1j * k * a) * hg.samples
            worst = max(worst, np.linalg.norm(out - want) / np.linalg.norm(want))
    record(2, "Hermite-Gauss eigenfunctions", worst <= 1e-6, f"max rel error {worst:.2e} (<= 1e-6)")


def test_c03_lohmann():
    rng = np.random.default_rng(103)
    k = 2 * PI / LAM
    worst = 0.0
    for _ in range(1000):
        f = rng.uniform(0.01, 2.0)
        a = rng.uniform(1e-6, PI - 1e-6)
        s = math.sqrt(f * math.sin(a) / k)
        got = match_frft(compose(OpticalSystem(type1_elements(f, a), LAM, s)))
        worst = max(worst, got.distance(a))
    z34 = type1_design(0.25, 3 * PI / 4).z_alpha * 100
    z14 = type1_design(0.25, PI / 4).z_alpha * 100
    ok = worst <= 1e-9 and round(z34, 2) == 42.68 and round(z14, 2) == 7.32
    record(3, "Lohmann type-I round trip", ok,
           f"max |alpha error| {worst:.2e} (<= 1e-9), z(3pi/4) {z34:.2f} cm, z(pi/4) {z14:.2f} cm")


def test_c04_scaling_constant():
    got = scale_per_meter(0.25 / math.sqrt(2), LAM) / 1e3
    record(4, "scaling constant", abs(got - 6.62) <= 0.01, f"{got:.4f} per mm (6.62 +- 0.01)")


def test_c05_no_correlation_condition():
    rng = np.random.default_rng(105)
    t0 = time.perf_counter()
    worst = 0.0
    count = 0
    for _ in range(10_000):
        p = DoubleGaussianParams(rng.uniform(0.05, 10.0), rng.uniform(0.05, 10.0))
        a = rng.uniform(0, 2 * PI)
        m0 = initial_moments(p)
        for b in no_correlation_beta(p, a):
            worst = max(worst, abs(propagate_moments(m0, a, b).covar(0, 2)))
            count += 1
    dt = time.perf_counter() - t0
    record(5, "no-correlation orders", worst <= 1e-12 and dt <= 5,
           f"{count} solved orders, max |Cov| {worst:.2e} (<= 1e-12), {dt:.2f} s (<= 5 s)")


def test_c06_correlation_signs():
    p = DoubleGaussianParams.reference()
    m0 = initial_moments(p)
    want = [
        ((3 * PI / 4, 5 * PI / 4), "r >= +0.99", lambda r: r >= 0.99),
        ((PI, PI), "r >= +0.99", lambda r: r >= 0.99),
        ((PI / 4, 3 * PI / 4), "r <= -0.99", lambda r: r <= -0.99),
        ((PI / 2, PI / 2), "r <= -0.99", lambda r: r <= -0.99),
        ((PI / 4, 5 * PI / 4), "|r| <= 0.15", lambda r: abs(r) <= 0.15),
        ((PI / 2, PI), "|r| <= 0.15", lambda r: abs(r) <= 0.15),
        ((3 * PI / 4, 3 * PI / 4), "|r| <= 0.15", lambda r: abs(r) <= 0.15),
    ]
    misses = []
    for (a, b), label, ok in want:
        r = position_correlation(propagate_moments(m0, a, b)).r
        if not ok(r):
            misses.append(f"({a / PI:g}pi,{b / PI:g}pi) r={r:+.6f} wants {label}")
    # known to fail on the two mixed rows: the moments give |r| = 0.8607 there
    record(6, "correlation signs", not misses,
           "all seven orders on target" if not misses else "; ".join(misses))


def test_c07_analytic_numeric():
    p = DoubleGaussianParams(4.0, 0.25)
    axis = SampledAxis.self_dual(1024)
    parts, ok = [], True
    for a, b in ((PI / 2, PI / 2), (3 * PI / 4, 5 * PI / 4)):
        t0 = time.perf_counter()
        num = scenario_density(p, a, b, method="numeric", axes=(axis, axis))
        dt = time.perf_counter() - t0
        ref = analytic_density(propagate_moments(initial_moments(p), a, b), axis, axis)
        diff = float(np.max(np.abs(num.values - ref.values)))
        ok &= diff <= 1e-4 and dt <= 60
        parts.append(f"({a / PI:g}pi,{b / PI:g}pi) max-abs {diff:.2e} in {dt:.2f} s")
    record(7, "analytic vs numeric density", ok, "; ".join(parts) + " (<= 1e-4, <= 60 s each)")


def test_c08_epr_model():
    p = DoubleGaussianParams.reference()
    closed = p.sigma_plus ** 2 * p.sigma_minus ** 2 / (p.sigma_plus ** 2 + p.sigma_minus ** 2) ** 2
    m0 = initial_moments(p)
    v_pos = conditional_variance(propagate_moments(m0, 0.0, 0.0), "rho1_given_rho2")
    v_mom = conditional_variance(propagate_moments(m0, PI / 2, PI / 2), "rho1_given_rho2")
    product = v_pos * v_mom
    via_api = epr_product(p, 0.0, 0.0)
    sep = epr_product(DoubleGaussianParams(1.3, 1.3), PI, PI)
    ok = (abs(product - closed) <= 1e-12 and abs(via_api.pos_product - closed) <= 1e-12 and via_api.violated
          and round(closed, 6) == 2.70e-4 and sep.pos_product == 0.25 and not sep.violated)
    record(8, "EPR product from the model", ok,
           f"product {product:.6e} vs closed form {closed:.6e}, separable {sep.pos_product!r} violated={sep.violated}")


def test_c09_variance_ratio():
    rows = variance_table(DoubleGaussianParams.reference(), TABLE_SCENARIOS)

    def total(r):
        return (r.alpha.alpha + r.beta.alpha) % (2 * PI)

    sharp, broad = [], []
    for r in rows:
        t = total(r)
        pair = (r.var_rho1_given_rho2, r.var_rho2_given_rho1)
        if min(abs(t - PI), abs(t), abs(t - 2 * PI)) < 1e-9:
            sharp.extend(pair)
        elif abs(t - 3 * PI / 2) < 1e-9:
            broad.extend(pair)
    ratio = min(broad) / max(sharp)
    record(9, "conditional-variance ratio", bool(sharp and broad) and ratio >= 10,
           f"min broad / max sharp = {ratio:.1f} (>= 10) over {len(broad)}/{len(sharp)} values")


def test_c10_peak_displacement():
    p = DoubleGaussianParams.reference()
    parts, ok = [], True
    for (a, b), sign in (((3 * PI / 4, 5 * PI / 4), 1), ((PI / 4, 3 * PI / 4), -1)):
        d = scenario_density(p, a, b)
        for rho in (1.99, -1.99):
            peak = fit_gaussian(conditional_profile(d, 1, rho, 0.0)).mean
            target = sign * rho
            ok &= abs(peak - target) <= 0.1
            parts.append(f"({a / PI:g}pi,{b / PI:g}pi) rho1={rho:+.2f} -> {peak:+.4f}")
    record(10, "peak displacement", ok, "; ".join(parts) + " (+-0.1)")


def test_c11_epr_from_variances():
    e = epr_from_variances(0.28, 0.14)
    record(11, "EPR from measured variances", round(e.product, 4) == 0.0392 and e.violated,
           f"product {e.product:.4f}, violated={e.violated}")


def test_c12_selftest(capsys):
    t0 = time.perf_counter()
    code = cli.main(["selftest"])
    dt = time.perf_counter() - t0
    sentinels = {"kernel-phase": "eigenfunctions", "cov-transpose": "no-correlation"}
    assert set(sentinels) == set(FAULTS)
    caught = {}
    for fault, group in sentinels.items():
        capsys.readouterr()
        fcode = cli.main(["selftest", "--inject", fault])
        caught[fault] = fcode == 1 and f"FAIL {group}" in capsys.readouterr().out
    ok = code == 0 and dt <= 120 and all(caught.values())
    record(12, "selftest", ok, f"exit {code} in {dt:.1f} s (<= 120 s), sentinels caught {caught}")
