"""Closed-form double-Gaussian biphoton: covariance rotation and EPR checks.

Moments are kept as a 4x4 covariance over (rho1, q1, rho2, q2); all means
are zero.  An FRFT of order a on one photon rotates that photon's (rho, q)
block by a, so the propagated covariance is ``R cov R^T`` with R block
diagonal.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularConditioning
from .frft import TWO_PI, FrftOrder, OrderLike, as_order

__all__ = [
    "DoubleGaussianParams",
    "BiphotonMoments",
    "CorrelationKind",
    "CorrelationVerdict",
    "EprProduct",
    "initial_moments",
    "rotation_matrix",
    "propagate_moments",
    "position_correlation",
    "no_correlation_beta",
    "conditional_variance",
    "epr_product",
    "violates_epr_bound",
    "position_density",
]

RHO1, Q1, RHO2, Q2 = 0, 1, 2, 3

# products within this relative distance of 1/4 count as the bound itself,
# so round-off on a separable state never reads as a violation
EPR_BOUND_RTOL = 1e-12

REFERENCE_SIGMA_PLUS = 4.076
REFERENCE_SIGMA_MINUS = 0.067


@dataclass(frozen=True)
class DoubleGaussianParams:
    sigma_plus: float
    sigma_minus: float

    def __post_init__(self):
        for name in ("sigma_plus", "sigma_minus"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")

    @classmethod
    def reference(cls) -> "DoubleGaussianParams":
        return cls(REFERENCE_SIGMA_PLUS, REFERENCE_SIGMA_MINUS)


@dataclass(frozen=True, eq=False)
class BiphotonMoments:
    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got {cov.shape}")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise ValueError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if np.min(np.linalg.eigvalsh(cov)) <= 0:
            raise ValueError("covariance is not positive definite")
        for r, q in ((RHO1, Q1), (RHO2, Q2)):
            if cov[r, r] * cov[q, q] < 0.25 * (1 - 1e-9):
                raise ValueError("single-photon uncertainty relation violated")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    def var(self, i: int) -> float:
        return float(self.cov[i, i])

    def covar(self, i: int, j: int) -> float:
        return float(self.cov[i, j])

    @property
    def position_block(self) -> np.ndarray:
        idx = [RHO1, RHO2]
        return self.cov[np.ix_(idx, idx)]


class CorrelationKind(str, enum.Enum):
    CORRELATED = "Correlated"
    ANTICORRELATED = "Anticorrelated"
    UNCORRELATED = "Uncorrelated"


@dataclass(frozen=True)
class CorrelationVerdict:
    kind: CorrelationKind
    r: float


@dataclass(frozen=True)
class EprProduct:
    pos_product: float
    violated: bool


def initial_moments(params: DoubleGaussianParams) -> BiphotonMoments:
    sp2, sm2 = params.sigma_plus ** 2, params.sigma_minus ** 2
    cov = np.zeros((4, 4))
    cov[RHO1, RHO1] = cov[RHO2, RHO2] = (sp2 + sm2) / 4
    cov[RHO1, RHO2] = cov[RHO2, RHO1] = (sp2 - sm2) / 4
    cov[Q1, Q1] = cov[Q2, Q2] = (1 / sp2 + 1 / sm2) / 4
    cov[Q1, Q2] = cov[Q2, Q1] = (1 / sp2 - 1 / sm2) / 4
    return BiphotonMoments(cov)


def rotation_matrix(alpha: OrderLike, beta: OrderLike) -> np.ndarray:
    R = np.zeros((4, 4))
    for off, order in ((0, alpha), (2, beta)):
        a = as_order(order).alpha
        c, s = math.cos(a), math.sin(a)
        R[off:off + 2, off:off + 2] = [[c, s], [-s, c]]
    return R


def propagate_moments(m: BiphotonMoments, alpha: OrderLike, beta: OrderLike) -> BiphotonMoments:
    R = rotation_matrix(alpha, beta)
    cov = R @ m.cov @ R.T
    return BiphotonMoments(0.5 * (cov + cov.T))


def position_correlation(
    m: BiphotonMoments, correlated_at: float = 0.5, anticorrelated_at: float = -0.5
) -> CorrelationVerdict:
    """Pearson coefficient of (rho1, rho2) and its qualitative class."""
    r = m.covar(RHO1, RHO2) / math.sqrt(m.var(RHO1) * m.var(RHO2))
    r = min(1.0, max(-1.0, r))
    if r >= correlated_at:
        kind = CorrelationKind.CORRELATED
    elif r <= anticorrelated_at:
        kind = CorrelationKind.ANTICORRELATED
    else:
        kind = CorrelationKind.UNCORRELATED
    return CorrelationVerdict(kind, r)


def no_correlation_beta(params: DoubleGaussianParams, alpha: OrderLike) -> list[FrftOrder]:
    """Orders beta for which photons 1 and 2 show no position correlation.

    Solves tan(alpha) tan(beta) = sigma_minus^2 sigma_plus^2.  Written as
    tan(beta) = k cos(alpha) / sin(alpha) it has exactly two solutions in
    [0, 2 pi) for every alpha, including tan(alpha) = 0 (beta = pi/2, 3pi/2)
    and cos(alpha) = 0 (beta = 0, pi).
    """
    a = as_order(alpha).alpha
    k = (params.sigma_plus * params.sigma_minus) ** 2
    b0 = math.atan2(k * math.cos(a), math.sin(a)) % math.pi
    return sorted((FrftOrder(b0), FrftOrder(b0 + math.pi)), key=lambda o: o.alpha)


def conditional_variance(m: BiphotonMoments, target: str = "rho1_given_rho2") -> float:
    if target == "rho1_given_rho2":
        a, b = RHO1, RHO2
    elif target == "rho2_given_rho1":
        a, b = RHO2, RHO1
    else:
        raise ValueError(f"unknown target {target!r}")
    vb = m.var(b)
    if vb < 1e-15:
        raise SingularConditioning(f"conditioning variance {vb:.3g} < 1e-15")
    # det form avoids cancellation when |r| -> 1
    va, cab = m.var(a), m.covar(a, b)
    return (va * vb - cab * cab) / vb


def epr_product(
    params: DoubleGaussianParams,
    alpha: OrderLike,
    beta: OrderLike,
    target: str = "rho1_given_rho2",
) -> EprProduct:
    """Conditional-variance product at (alpha, beta) and its conjugate planes.

    The conjugate-variable variance is the position variance after a further
    quarter turn on both photons.
    """
    alpha, beta = as_order(alpha), as_order(beta)
    m0 = initial_moments(params)
    quarter = math.pi / 2
    v_pos = conditional_variance(propagate_moments(m0, alpha, beta), target)
    v_mom = conditional_variance(propagate_moments(m0, alpha + quarter, beta + quarter), target)
    product = v_pos * v_mom
    return EprProduct(product, violates_epr_bound(product))


def violates_epr_bound(product: float) -> bool:
    return product < 0.25 * (1.0 - EPR_BOUND_RTOL)


def position_density(m: BiphotonMoments, rho1, rho2) -> np.ndarray:
    """Joint position density |Psi(rho1, rho2)|^2 implied by the moments."""
    S = m.position_block
    det = S[0, 0] * S[1, 1] - S[0, 1] ** 2
    x, y = np.broadcast_arrays(np.asarray(rho1, float), np.asarray(rho2, float))
    quad = (S[1, 1] * x * x - 2 * S[0, 1] * x * y + S[0, 0] * y * y) / det
    return np.exp(-0.5 * quad) / (TWO_PI * math.sqrt(det))
