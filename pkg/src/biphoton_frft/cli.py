"""Command-line entry point: ``biphoton-frft {density,scan,design,selftest}``.

Settings come from built-in defaults, then an optional ``--config`` file of
``key = value`` lines, then command-line flags.  Exit codes: 0 success,
1 selftest failure, 2 configuration error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import struct
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import selftest
from .analysis import auto_axes, fit_gaussian
from .errors import ConfigError, NotAnFrft, NumericError
from .frft import FrftOrder, SampledAxis, joint_frft
from .gaussian import (
    DoubleGaussianParams,
    REFERENCE_SIGMA_MINUS,
    REFERENCE_SIGMA_PLUS,
    initial_moments,
    position_correlation,
    propagate_moments,
)
from .optics import compose, match_frft, parse_system, realization, type1_design
from .twophoton import (
    JointDensity,
    PumpSincParams,
    analytic_density,
    build_double_gaussian,
    build_pump_sinc,
    conditional_profile,
    joint_density,
    slit_width_dimensionless,
)

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

STATES = ("double-gaussian", "pump-sinc")
METHODS = ("auto", "numeric", "analytic")
PATHS = ("auto", "dense", "chirp")


@dataclass
class RunConfig:
    """Every setting a subcommand may read.

    ``extent`` of ``None`` means the self-dual extent ``sqrt(2 pi n)``; for
    the analytic method with neither ``grid_n`` nor ``extent`` set, grids
    are chosen automatically from the propagated moments.  ``slit`` is the
    dimensionless slit width and, when set, overrides ``slit_um``.
    """

    state: str = "double-gaussian"
    sigma_plus: float = REFERENCE_SIGMA_PLUS
    sigma_minus: float = REFERENCE_SIGMA_MINUS
    sigma_pump: float = 4.0
    crystal_length_m: float = 5e-3
    pump_wavelength_m: float = 405e-9
    alpha: FrftOrder = field(default_factory=lambda: FrftOrder(math.pi))
    beta: FrftOrder = field(default_factory=lambda: FrftOrder(math.pi))
    grid_n: int | None = None
    extent: float | None = None
    slit_um: float = 0.0
    scale_per_mm: float = 6.62
    slit: float | None = None
    method: str = "auto"
    path: str = "auto"
    fixed_photon: int = 1
    fixed_rho: list[float] = field(default_factory=lambda: [0.0])
    focal_m: float = 0.25
    order: FrftOrder = field(default_factory=lambda: FrftOrder(3 * math.pi / 4))
    wavelength_m: float = 810e-9
    system: str | None = None
    out: str = "."
    raw: bool = False

    @property
    def slit_width(self) -> float:
        if self.slit is not None:
            return self.slit
        return slit_width_dimensionless(self.slit_um * 1e-6, self.scale_per_mm * 1e3)


# config key = field name; parsers turn the text form into the field type
def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_optional(inner):
    def parse(text: str):
        return None if text.strip().lower() in ("", "none") else inner(text)
    return parse


def _parse_float_list(text: str) -> list[float]:
    return [float(t) for t in text.replace(",", " ").split()]


def _parse_choice(choices):
    def parse(text: str) -> str:
        t = text.strip()
        if t not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}, got {t!r}")
        return t
    return parse


_PARSERS = {
    "state": _parse_choice(STATES),
    "sigma_plus": float,
    "sigma_minus": float,
    "sigma_pump": float,
    "crystal_length_m": float,
    "pump_wavelength_m": float,
    "alpha": FrftOrder.parse,
    "beta": FrftOrder.parse,
    "grid_n": _parse_optional(int),
    "extent": _parse_optional(float),
    "slit_um": float,
    "scale_per_mm": float,
    "slit": _parse_optional(float),
    "method": _parse_choice(METHODS),
    "path": _parse_choice(PATHS),
    "fixed_photon": int,
    "fixed_rho": _parse_float_list,
    "focal_m": float,
    "order": FrftOrder.parse,
    "wavelength_m": float,
    "system": _parse_optional(str),
    "out": str,
    "raw": _parse_bool,
}
assert set(_PARSERS) == {f.name for f in dataclasses.fields(RunConfig)}


def _set(cfg: RunConfig, key: str, text: str, where: str) -> None:
    if key not in _PARSERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    try:
        setattr(cfg, key, _PARSERS[key](text))
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from None


def load_config(path: str | Path, cfg: RunConfig | None = None) -> RunConfig:
    """Apply a ``key = value`` file on top of ``cfg`` (defaults if omitted)."""
    cfg = cfg if cfg is not None else RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        _set(cfg, key.strip().replace("-", "_"), value.strip(), f"{path}:{lineno}")
    return cfg


def validate(cfg: RunConfig) -> None:
    def need(ok: bool, key: str, msg: str) -> None:
        if not ok:
            raise ConfigError(f"{key}: {msg}")

    for key in ("sigma_plus", "sigma_minus", "sigma_pump", "crystal_length_m",
                "pump_wavelength_m", "scale_per_mm", "focal_m", "wavelength_m"):
        v = getattr(cfg, key)
        need(math.isfinite(v) and v > 0, key, f"must be finite and > 0, got {v!r}")
    need(cfg.grid_n is None or cfg.grid_n >= 8, "grid_n", f"must be >= 8, got {cfg.grid_n}")
    need(cfg.extent is None or (math.isfinite(cfg.extent) and cfg.extent > 0),
         "extent", f"must be > 0, got {cfg.extent!r}")
    need(math.isfinite(cfg.slit_um) and cfg.slit_um >= 0, "slit_um", "must be >= 0")
    need(cfg.slit is None or (math.isfinite(cfg.slit) and cfg.slit >= 0), "slit", "must be >= 0")
    need(cfg.fixed_photon in (1, 2), "fixed_photon", f"must be 1 or 2, got {cfg.fixed_photon}")
    need(not (cfg.state == "pump-sinc" and cfg.method == "analytic"), "method",
         "the analytic method exists only for the double-gaussian state")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--state", help="double-gaussian or pump-sinc")
    p.add_argument("--grid-n", dest="grid_n", help="samples per photon axis")
    p.add_argument("--extent", help="axis extent (dimensionless)")
    p.add_argument("--alpha", help="order on photon 1, radians or p*pi/q")
    p.add_argument("--beta", help="order on photon 2, radians or p*pi/q")
    p.add_argument("--sigma-plus", dest="sigma_plus")
    p.add_argument("--sigma-minus", dest="sigma_minus")
    p.add_argument("--sigma-pump", dest="sigma_pump")
    p.add_argument("--slit-um", dest="slit_um", help="slit width in micrometres")
    p.add_argument("--scale-per-mm", dest="scale_per_mm", help="scaling parameter in 1/mm")
    p.add_argument("--slit", help="dimensionless slit width (overrides --slit-um)")
    p.add_argument("--method", help="auto, numeric or analytic")
    p.add_argument("--path", choices=PATHS, help="FRFT evaluation path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biphoton-frft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="joint detection density after (alpha, beta)")
    _common_flags(p)
    p.add_argument("--raw", action="store_const", const="true",
                   help="also write density.bin (two u64 dims, then f64 row-major)")

    p = sub.add_parser("scan", help="coincidence scans at fixed partner positions")
    _common_flags(p)
    p.add_argument("--fixed-rho", dest="fixed_rho",
                   help="comma-separated fixed positions; empty string is an error")
    p.add_argument("--fixed-photon", dest="fixed_photon", help="1 or 2")

    p = sub.add_parser("design", help="lens-system design and ray-matrix matching")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--focal-m", dest="focal_m", help="lens focal length in metres")
    p.add_argument("--order", help="target order, radians or p*pi/q")
    p.add_argument("--wavelength", dest="wavelength_m", help="wavelength in metres")
    p.add_argument("--system", help="system description file to compose and match")

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--inject", choices=selftest.FAULTS, help="deliberately break one component")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        load_config(args.config, cfg)
    for key in _PARSERS:
        value = getattr(args, key, None)
        if value is not None:
            _set(cfg, key, value, "--" + key.replace("_", "-"))
    validate(cfg)
    return cfg


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    if isinstance(x, FrftOrder):
        return "%.17g" % x.alpha
    return str(x)


def _write_report(path: Path, items: Sequence[tuple[str, object]]) -> None:
    path.write_text("".join(f"{k}={_fmt(v)}\n" for k, v in items))


def _write_csv(path: Path, header: str, columns: Sequence[np.ndarray]) -> None:
    table = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", newline="\n") as fh:
        np.savetxt(fh, table, fmt="%.17g", delimiter=",", header=header, comments="")


def _write_raw(path: Path, values: np.ndarray) -> None:
    v = np.ascontiguousarray(values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(struct.pack("<QQ", *v.shape))
        fh.write(v.tobytes(order="C"))


def _configured_axis(cfg: RunConfig) -> SampledAxis:
    n = cfg.grid_n if cfg.grid_n is not None else 1024
    if cfg.extent is None:
        return SampledAxis.self_dual(n)
    return SampledAxis.with_extent(n, cfg.extent)


def compute_density(cfg: RunConfig) -> tuple[JointDensity, list[tuple[str, object]]]:
    """Density for the configured state plus report lines describing how."""
    report: list[tuple[str, object]] = [("state", cfg.state), ("alpha", cfg.alpha), ("beta", cfg.beta)]
    if cfg.state == "pump-sinc":
        k_pump = 2 * math.pi / cfg.pump_wavelength_m
        scale_m = 1.0 / (cfg.scale_per_mm * 1e3)
        params = PumpSincParams(cfg.sigma_pump, cfg.crystal_length_m, k_pump, scale_m)
        ax = _configured_axis(cfg)
        psi = build_pump_sinc(params, ax, ax)
        out = joint_frft(psi, cfg.alpha, cfg.beta, path=cfg.path)
        report += [("method", "numeric"), ("norm_in", psi.norm()), ("norm_out", out.norm())]
        return _with_grid_summary(joint_density(out), report)

    params = DoubleGaussianParams(cfg.sigma_plus, cfg.sigma_minus)
    moments = propagate_moments(initial_moments(params), cfg.alpha, cfg.beta)
    verdict = position_correlation(moments)
    report += [("sigma_plus", cfg.sigma_plus), ("sigma_minus", cfg.sigma_minus),
               ("r", verdict.r), ("kind", verdict.kind.value)]

    method = cfg.method
    psi = None
    if method in ("auto", "numeric"):
        ax = _configured_axis(cfg)
        try:
            psi = build_double_gaussian(params, ax, ax)
            method = "numeric"
        except NumericError:
            if method == "numeric":
                raise
            method = "analytic"
    if method == "numeric":
        out = joint_frft(psi, cfg.alpha, cfg.beta, path=cfg.path)
        density = joint_density(out)
        report += [("norm_in", psi.norm()), ("norm_out", out.norm())]
    else:
        if cfg.grid_n is None and cfg.extent is None:
            ax1, ax2 = auto_axes(params, cfg.alpha, cfg.beta, cfg.slit_width)
        else:
            ax1 = ax2 = _configured_axis(cfg)
        density = analytic_density(moments, ax1, ax2)
    report.insert(3, ("method", method))
    return _with_grid_summary(density, report)


def _with_grid_summary(density: JointDensity, report: list[tuple[str, object]]):
    report += [("grid_n1", density.axis1.n), ("grid_n2", density.axis2.n),
               ("spacing1", density.axis1.spacing), ("spacing2", density.axis2.spacing),
               ("integral", density.integral()), ("r_grid", density.correlation())]
    return density, report


def cmd_density(cfg: RunConfig) -> int:
    density, report = compute_density(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    r1 = np.repeat(density.axis1.points, density.axis2.n)
    r2 = np.tile(density.axis2.points, density.axis1.n)
    _write_csv(out / "density.csv", "rho1,rho2,p", [r1, r2, density.values.ravel()])
    if cfg.raw:
        _write_raw(out / "density.bin", density.values)
    _write_report(out / "report.txt", report)
    for k, v in report:
        print(f"{k}={_fmt(v)}")
    return EXIT_OK


def cmd_scan(cfg: RunConfig) -> int:
    if not cfg.fixed_rho:
        raise ConfigError("fixed_rho: list of fixed positions is empty")
    density, report = compute_density(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    scanned = "rho2" if cfg.fixed_photon == 1 else "rho1"
    slit = cfg.slit_width
    rows = []
    for i, rho in enumerate(cfg.fixed_rho):
        prof = conditional_profile(density, cfg.fixed_photon, rho, slit)
        fit = fit_gaussian(prof)
        _write_csv(out / f"scan_{i}.csv", f"{scanned},counts", [prof.axis.points, prof.values])
        rows.append([rho, prof.fixed_rho, fit.mean, fit.variance, fit.amplitude, fit.offset, fit.rms_residual])
        print(f"fixed_rho={_fmt(rho)} snapped={_fmt(prof.fixed_rho)} "
              f"peak={_fmt(fit.mean)} variance={_fmt(fit.variance)}")
    cols = np.array(rows).T
    _write_csv(out / "fits.csv", "fixed_rho,snapped_rho,mean,variance,amplitude,offset,rms_residual", cols)
    _write_report(out / "report.txt", report + [("slit", slit), ("fixed_photon", cfg.fixed_photon)])
    return EXIT_OK


def cmd_design(cfg: RunConfig) -> int:
    lines: list[tuple[str, object]] = []
    if cfg.system is None:
        d = type1_design(cfg.focal_m, cfg.order)
        real = realization(cfg.focal_m, cfg.order, cfg.wavelength_m)
        lines += [("order", cfg.order), ("focal_m", cfg.focal_m), ("z_alpha_m", d.z_alpha),
                  ("f_prime_m", d.f_prime), ("scale_per_mm", real.scale_per_m / 1e3)]
    else:
        try:
            system = parse_system(Path(cfg.system).read_text())
        except OSError as exc:
            raise ConfigError(f"system: cannot read {cfg.system}: {exc.strerror}") from None
        except ValueError as exc:
            raise ConfigError(f"system: {exc}") from None
        m = compose(system)
        lines += [("a", m.a), ("b", m.b), ("c", m.c), ("d", m.d), ("det", m.det)]
        try:
            order = match_frft(m)
            lines += [("frft", "yes"), ("order", order), ("order_over_pi", order.alpha / math.pi)]
        except NotAnFrft as exc:
            lines += [("frft", "NotAnFrft")] + [(f"residual[{k}]", v) for k, v in exc.residuals.items()]
    for k, v in lines:
        print(f"{k}={_fmt(v)}")
    if cfg.out != ".":
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_report(out / "design.txt", lines)
    return EXIT_OK


def cmd_selftest(inject: str | None = None) -> int:
    results = selftest.run(inject=inject)
    ok = all(r.passed for r in results)
    print("selftest: " + ("all groups passed" if ok else "FAILED"))
    return EXIT_OK if ok else EXIT_SELFTEST


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            return cmd_selftest(args.inject)
        cfg = resolve_config(args)
        return {"density": cmd_density, "scan": cmd_scan, "design": cmd_design}[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
