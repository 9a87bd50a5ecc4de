import math
import struct
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from biphoton_frft import cli
from biphoton_frft.errors import ConfigError

SYSTEMS = Path(__file__).resolve().parents[1] / "scripts" / "systems"


def report(path):
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_density_half_turn_correlated(tmp_path, capsys):
    assert cli.main(["density", "--alpha", "pi", "--beta", "pi", "--grid-n", "128", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path / "report.txt")
    assert rep["kind"] == "Correlated"
    assert float(rep["r"]) == pytest.approx(0.99946, abs=1e-5)
    header = (tmp_path / "density.csv").read_text().split("\n", 1)[0]
    assert header == "rho1,rho2,p"


def test_density_quarter_five_quarter_is_correlated(tmp_path):
    # the moments give r = +0.861 here, not a decorrelated state
    assert cli.main(["density", "--alpha", "pi/4", "--beta", "5pi/4", "--grid-n", "64", "--out", str(tmp_path)]) == 0
    rep = report(tmp_path / "report.txt")
    assert float(rep["r"]) == pytest.approx(0.86073, abs=1e-5)
    assert rep["kind"] == "Correlated"


def test_density_numeric_when_grid_allows(tmp_path):
    args = ["density", "--sigma-plus", "4", "--sigma-minus", "0.25", "--grid-n", "1024",
            "--alpha", "pi/2", "--beta", "pi/2", "--out", str(tmp_path), "--raw"]
    assert cli.main(args) == 0
    rep = report(tmp_path / "report.txt")
    assert rep["method"] == "numeric"
    assert float(rep["norm_out"]) == pytest.approx(1.0, abs=1e-6)
    raw = (tmp_path / "density.bin").read_bytes()
    n1, n2 = struct.unpack("<QQ", raw[:16])
    values = np.frombuffer(raw[16:], dtype="<f8").reshape(n1, n2)
    csv = np.loadtxt(tmp_path / "density.csv", delimiter=",", skiprows=1)
    assert (n1, n2) == (1024, 1024)
    np.testing.assert_array_equal(values.ravel(), csv[:, 2])


def test_density_byte_identical(tmp_path):
    args = ["density", "--alpha", "3pi/4", "--beta", "5pi/4", "--grid-n", "96"]
    assert cli.main(args + ["--out", str(tmp_path / "a")]) == 0
    assert cli.main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("density.csv", "report.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert b"\r" not in (tmp_path / "a" / "density.csv").read_bytes()


def test_csv_has_seventeen_digits(tmp_path):
    cli.main(["density", "--grid-n", "16", "--out", str(tmp_path)])
    row = (tmp_path / "density.csv").read_text().splitlines()[1].split(",")
    assert float(row[0]) == float("%.17g" % float(row[0]))
    assert "%.17g" % float(row[0]) == row[0]


def test_grid_too_small_exits_2(capsys):
    assert cli.main(["density", "--grid-n", "4"]) == 2
    assert "grid_n" in capsys.readouterr().err


def test_config_file_and_unknown_key(tmp_path, capsys):
    good = tmp_path / "good.cfg"
    good.write_text("# comment\nalpha = 3pi/4\nbeta = 5pi/4\ngrid_n = 64\n")
    cfg = cli.load_config(good)
    assert cfg.alpha == 3 * math.pi / 4 and cfg.grid_n == 64
    bad = tmp_path / "bad.cfg"
    bad.write_text("alpha = pi\ncolour = red\n")
    assert cli.main(["density", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "colour" in capsys.readouterr().err
    with pytest.raises(ConfigError, match="alpha"):
        cli.load_config(_write(tmp_path / "x.cfg", "alpha = sideways\n"))


def _write(path, text):
    path.write_text(text)
    return path


def test_flags_override_config(tmp_path):
    cfg_file = _write(tmp_path / "c.cfg", "alpha = pi/2\nsigma_plus = 3\n")
    args = cli.build_parser().parse_args(["density", "--config", str(cfg_file), "--alpha", "pi"])
    cfg = cli.resolve_config(args)
    assert cfg.alpha == math.pi and cfg.sigma_plus == 3.0


@pytest.mark.parametrize("flag,value,key", [
    ("--sigma-minus", "-1", "sigma_minus"),
    ("--path", "fast", None),
    ("--method", "guess", "method"),
    ("--slit-um", "-3", "slit_um"),
])
def test_bad_values_exit_2(flag, value, key, capsys):
    try:
        code = cli.main(["density", flag, value])
    except SystemExit as exc:  # argparse rejects choices itself
        code = exc.code
    assert code == 2
    if key:
        assert key in capsys.readouterr().err


def test_numeric_error_exits_3(tmp_path, capsys):
    # forcing the FRFT route on a grid that cannot hold the narrow width
    args = ["density", "--method", "numeric", "--grid-n", "64", "--out", str(tmp_path)]
    assert cli.main(args) == 3
    assert "GridInadequate" in capsys.readouterr().err


@pytest.mark.parametrize("a,b,sign", [("3pi/4", "5pi/4", 1), ("pi/4", "3pi/4", -1)])
def test_scan_peak_displacement(tmp_path, a, b, sign):
    args = ["scan", "--alpha", a, "--beta", b, "--fixed-rho=-1.99,0,1.99", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    fits = np.loadtxt(tmp_path / "fits.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(fits[:, 2], sign * np.array([-1.99, 0, 1.99]), atol=0.1)
    for i in range(3):
        assert (tmp_path / f"scan_{i}.csv").read_text().startswith("rho2,counts\n")


def test_scan_fixed_photon_two_header(tmp_path):
    assert cli.main(["scan", "--fixed-photon", "2", "--fixed-rho", "0", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "scan_0.csv").read_text().startswith("rho1,counts\n")


def test_scan_empty_list_exits_2(capsys):
    assert cli.main(["scan", "--fixed-rho="]) == 2
    assert "fixed_rho" in capsys.readouterr().err


def test_scan_with_physical_slit(tmp_path):
    args = ["scan", "--alpha", "pi", "--beta", "pi", "--fixed-rho", "0", "--slit-um", "100",
            "--scale-per-mm", "6.62", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    assert float(report(tmp_path / "report.txt")["slit"]) == pytest.approx(0.662)


def test_design_type1(capsys):
    assert cli.main(["design", "--focal-m", "0.25", "--order", "3pi/4"]) == 0
    out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert round(float(out["z_alpha_m"]) * 100, 2) == 42.68
    assert round(float(out["f_prime_m"]) * 100, 2) == 17.68
    assert round(float(out["scale_per_mm"]), 2) == 6.62


def test_design_out_of_range_exits_3():
    assert cli.main(["design", "--order", "5pi/4"]) == 3


def test_design_chain_file(capsys):
    assert cli.main(["design", "--system", str(SYSTEMS / "chain_5pi4.sys")]) == 0
    out = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert float(out["order_over_pi"]) == pytest.approx(1.25, abs=1e-9)


def test_design_mismatched_chain(capsys):
    assert cli.main(["design", "--system", str(SYSTEMS / "chain_mismatched.sys")]) == 0
    out = capsys.readouterr().out
    assert "frft=NotAnFrft" in out and "residual[a-d]" in out


def test_design_bad_system_file(tmp_path, capsys):
    bad = _write(tmp_path / "bad.sys", "wavelength=8.1e-7\nscale=1e-4\nmirror r=1\n")
    assert cli.main(["design", "--system", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_pump_sinc_state(tmp_path):
    # the far field of the sinc rows has 1/rho^2 tails, so the window must be wide
    args = ["density", "--state", "pump-sinc", "--sigma-pump", "1.5", "--grid-n", "1024", "--extent", "36",
            "--alpha", "pi/2", "--beta", "pi/2", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rep = report(tmp_path / "report.txt")
    assert rep["method"] == "numeric"
    assert float(rep["norm_in"]) == pytest.approx(1.0, abs=1e-9)
    assert float(rep["norm_out"]) > 0.98
    assert float(rep["r_grid"]) < -0.99


def test_console_script_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "biphoton_frft.cli", "design", "--order", "pi/2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    out = dict(line.split("=", 1) for line in res.stdout.splitlines())
    assert float(out["z_alpha_m"]) == pytest.approx(0.25, rel=1e-12)
