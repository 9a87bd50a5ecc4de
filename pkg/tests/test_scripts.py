import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def run(name, *args, cwd=None):
    return subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True,
                          check=False, cwd=cwd)


def test_peak_displacement_script():
    res = run("peak_displacement.py", "--fixed", "1.99")
    assert res.returncode == 0, res.stderr
    assert "peak +1.9768" in res.stdout and "peak -1.9768" in res.stdout


def test_figure_densities_script(tmp_path):
    res = run("figure_densities.py", "--out", str(tmp_path), "--sigma-plus", "2", "--sigma-minus", "0.5")
    assert res.returncode == 0, res.stderr
    assert len(list(tmp_path.glob("density_*.csv"))) == 7
    assert (tmp_path / "summary.csv").read_text().startswith("alpha_over_pi,beta_over_pi,r,kind")


@pytest.mark.parametrize("name", ["table_variances.py", "pump_sinc_fit.py"])
def test_script_help(name):
    assert run(name, "--help").returncode == 0
