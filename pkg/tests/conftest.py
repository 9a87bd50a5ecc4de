import math

import numpy as np
import pytest

from biphoton_frft.frft import ComplexField1D, SampledAxis, hermite_gauss
from biphoton_frft.gaussian import DoubleGaussianParams


@pytest.fixture(scope="session")
def axis1024():
    return SampledAxis.self_dual(1024)


@pytest.fixture(scope="session")
def ref_params():
    return DoubleGaussianParams.reference()


def hg_mix(coeffs, axis):
    """Normalised superposition of Hermite-Gauss modes with the given weights."""
    samples = sum(c * hermite_gauss(k, axis).samples for k, c in enumerate(coeffs))
    return ComplexField1D(axis, samples).normalized()


def rel_l2(a, b):
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


PI = math.pi


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
