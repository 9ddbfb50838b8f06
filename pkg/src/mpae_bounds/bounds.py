"""Converse and achievability bounds on the MPaE exponent per unit bandwidth.

Every function takes the moment order ``alpha`` and the linear SNR ``gamma``
and returns F in nats, with the convention MPaE ~ exp(-(N/2) F).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .kernels import DomainError, check_alpha, check_snr, e0, ex, gamma_alpha
from .optim import maximize_scalar
from .replication import lambda_alpha


class BoundKind(str, enum.Enum):
    DPT = "dpt"
    CHANNEL_CODING = "channel-coding-converse"
    SPHERICAL_CAP = "spherical-cap"
    SPECTRUM_REPLICATION = "spectrum-replication"
    UNLIMITED = "unlimited-bandwidth"
    ACHIEVABILITY = "achievability"

    @property
    def is_converse(self) -> bool:
        return self is not BoundKind.ACHIEVABILITY


@dataclass(frozen=True)
class BoundCurve:
    kind: BoundKind
    alpha: float
    samples: Tuple[Tuple[float, float], ...]

    @property
    def gammas(self) -> np.ndarray:
        return np.array([g for g, _ in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([f for _, f in self.samples])


def _gamma_coeff(alpha: float, override: Optional[float]) -> float:
    if override is None:
        return gamma_alpha(alpha).value
    if override > 0.5:
        warnings.warn(f"gamma_alpha override {override} exceeds 1/2; clamped", RuntimeWarning,
                      stacklevel=3)
        return 0.5
    if not override > 0:
        raise DomainError("gamma_alpha override must be positive")
    return float(override)


def dpt_bound(alpha: float, gamma: float) -> float:
    """Data-processing benchmark ``alpha * log(1 + gamma)``."""
    return check_alpha(alpha) * math.log1p(check_snr(gamma))


def unlimited_bound(alpha: float, gamma: float, gamma_override: Optional[float] = None) -> float:
    return _gamma_coeff(check_alpha(alpha), gamma_override) * check_snr(gamma)


def channel_coding_converse(alpha: float, gamma: float,
                            gamma_override: Optional[float] = None) -> float:
    """min{2 E0(alpha, gamma), gamma_alpha * gamma}.

    The Gallager parameter is set to ``alpha`` itself and may exceed 1.
    """
    alpha, gamma = check_alpha(alpha), check_snr(gamma)
    return min(2.0 * e0(alpha, gamma).value, _gamma_coeff(alpha, gamma_override) * gamma)


def spherical_cap_bound(alpha: float, gamma: float,
                        gamma_override: Optional[float] = None) -> float:
    alpha, gamma = check_alpha(alpha), check_snr(gamma)
    ga = _gamma_coeff(alpha, gamma_override)
    if gamma < alpha / ga:
        return ga * gamma
    return alpha * (math.log(ga * gamma / alpha) + 1.0)


def spectrum_replication_bound(alpha: float, gamma: float,
                               gamma_override: Optional[float] = None) -> float:
    alpha, gamma = check_alpha(alpha), check_snr(gamma)
    ga = _gamma_coeff(alpha, gamma_override)
    lam = lambda_alpha(alpha, gamma, gamma_a=ga)
    return ga * gamma - max(alpha * lam, 0.0)


def _expurgated_sup(alpha: float, gamma: float) -> float:
    plateau = gamma / 4.0
    cap = 2.0
    while True:
        res = maximize_scalar(lambda r: alpha * ex(r, gamma).value / (r + alpha), 1.0, cap,
                              tol=1e-9 * cap, points=256, scale="log")
        interior = res.argopt < cap / (1.0 + 1e-3)
        if interior or plateau - ex(cap, gamma).value <= 1e-6 or cap > 1e15:
            return res.value
        cap *= 2.0


def achievability_bound(alpha: float, gamma: float) -> float:
    """Quantize-and-code lower bound built from the E0 and Ex kernels."""
    alpha, gamma = check_alpha(alpha), check_snr(gamma)
    random_coding = maximize_scalar(lambda r: alpha * e0(r, gamma).value / (r + alpha),
                                    0.0, 1.0, tol=1e-9, points=256).value
    return 2.0 * max(random_coding, _expurgated_sup(alpha, gamma))


BOUND_FUNCTIONS: Dict[BoundKind, Callable[[float, float], float]] = {
    BoundKind.DPT: dpt_bound,
    BoundKind.CHANNEL_CODING: channel_coding_converse,
    BoundKind.SPHERICAL_CAP: spherical_cap_bound,
    BoundKind.SPECTRUM_REPLICATION: spectrum_replication_bound,
    BoundKind.UNLIMITED: unlimited_bound,
    BoundKind.ACHIEVABILITY: achievability_bound,
}


def evaluate(kind: BoundKind, alpha: float, gamma: float) -> float:
    return BOUND_FUNCTIONS[BoundKind(kind)](alpha, gamma)


def sample_curve(kind: BoundKind, alpha: float, gammas: Sequence[float]) -> BoundCurve:
    gammas = [float(g) for g in gammas]
    if any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise ValueError("SNR samples must be strictly increasing")
    kind = BoundKind(kind)
    return BoundCurve(kind, float(alpha), tuple((g, evaluate(kind, alpha, g)) for g in gammas))


class CapAreaRatio(tuple):
    """``(exact, asymptotic)`` pair returned by :func:`cap_area_ratio`."""

    __slots__ = ()

    def __new__(cls, exact: float, asymptotic: float):
        return super().__new__(cls, (exact, asymptotic))

    @property
    def exact(self) -> float:
        return self[0]

    @property
    def asymptotic(self) -> float:
        return self[1]


def _sin_power_integral(n_dim: int, lo: float, hi: float) -> float:
    # sin^{N-2} peaks sharply at pi/2 for large N; tell quad where
    pts = [math.pi / 2] if lo < math.pi / 2 < hi else None
    val, _ = integrate.quad(lambda p: math.sin(p) ** (n_dim - 2), lo, hi, points=pts,
                            epsabs=0.0, epsrel=1e-12, limit=500)
    return val


def cap_area_ratio(n_dim: int, theta: float) -> CapAreaRatio:
    """Fraction of the (N-1)-sphere covered by a cap of half-angle ``theta``.

    The exact value integrates sin^{N-2} over [0, theta] and normalizes by
    [0, pi]. The asymptotic companion is the large-N expression
    exp(N log sin theta) / (sqrt(2 pi N) sin theta cos theta), which is only
    meaningful for theta < pi/2 (NaN otherwise).
    """
    if int(n_dim) != n_dim or n_dim < 2:
        raise DomainError("n_dim must be an integer >= 2")
    n_dim = int(n_dim)
    theta = float(theta)
    if not 0.0 < theta < math.pi:
        raise DomainError("theta must lie in (0, pi)")
    if n_dim == 2:
        exact = theta / math.pi
    elif theta <= math.pi / 2:
        exact = _sin_power_integral(n_dim, 0.0, theta) / _sin_power_integral(n_dim, 0.0, math.pi)
    else:
        # complement keeps the small tail accurate
        exact = 1.0 - (_sin_power_integral(n_dim, 0.0, math.pi - theta)
                       / _sin_power_integral(n_dim, 0.0, math.pi))
    if theta < math.pi / 2:
        s, c = math.sin(theta), math.cos(theta)
        asym = math.exp(n_dim * math.log(s)) / (math.sqrt(2 * math.pi * n_dim) * s * c)
    else:
        asym = float("nan")
    return CapAreaRatio(exact, asym)
