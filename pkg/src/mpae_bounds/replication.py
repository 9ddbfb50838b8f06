"""Chernoff machinery behind the spectrum replication bound.

The replicated scheme decodes its frequency band non-coherently by picking
the band with the largest received energy. Per band the energy is a
chi-square variable with N degrees of freedom, non-central (noncentrality
N*gamma) in the active band. Everything below is normalized per N/2
channel uses unless stated otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .kernels import DomainError, check_alpha, check_snr, gamma_alpha
from .optim import OptScalarResult, maximize_scalar, minimize_scalar, solve_quadratic

RHO_MIN = 1e-6
ETA_TOL = 1e-9
RHO_TOL = 1e-9


@dataclass(frozen=True)
class ChiSquareExponents:
    eta: float
    upper_tail_central: float
    lower_tail_noncentral: float
    s_bar: float


@dataclass(frozen=True)
class ReplicationEval:
    rho: float
    eta_star: float
    phi: float
    lambda_alpha: float
    rate: float


def chi2_upper_exponent(eta: float) -> float:
    """Per-N Chernoff exponent of P[chi2_N >= eta N]; zero below the mean."""
    eta = float(eta)
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    if eta < 1.0:
        return 0.0
    return 0.5 * (eta - 1.0 - math.log(eta))


def _noncentral_closed_form(eta, gamma):
    # 0.5 * (eta + gamma + log[(s + 1) / (2 eta)] - s), s = sqrt(4 eta gamma + 1),
    # rearranged so both pieces vanish exactly at eta = 1 + gamma
    s = np.sqrt(4.0 * eta * gamma + 1.0)
    lin = (eta - gamma - 1.0) * (eta - gamma + 1.0) / (eta + gamma + s)
    log_term = np.log1p(2.0 * (1.0 + gamma - eta) / (s + 2.0 * eta - 1.0))
    return 0.5 * (lin + log_term)


def s_bar(eta: float, gamma: float) -> float:
    """Optimal Chernoff tilt for the non-central lower tail."""
    b = 0.5 - 0.25 / eta
    return b - math.sqrt(b * b + (1.0 + gamma - eta) / (4.0 * eta))


def tilted_objective(s: float, eta: float, gamma: float) -> float:
    """Chernoff objective whose supremum over the tilt gives the tail exponent."""
    return -s / (1.0 - 2.0 * s) * gamma + s * eta + 0.5 * math.log1p(-2.0 * s)


def noncentral_lower_exponent(eta: float, gamma: float) -> ChiSquareExponents:
    """Chernoff exponents (per N) of both energy statistics at threshold eta*N."""
    eta = float(eta)
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    gamma = check_snr(gamma)
    value = float(_noncentral_closed_form(eta, gamma))
    return ChiSquareExponents(eta, chi2_upper_exponent(eta), max(value, 0.0), s_bar(eta, gamma))


def phi_integrand(eta, rho: float, gamma: float):
    """rho*[eta - 1 - log eta] + twice the non-central tail exponent.

    Accepts scalars or numpy arrays in ``eta``.
    """
    eta = np.asarray(eta, dtype=float)
    return rho * (eta - 1.0 - np.log(eta)) + 2.0 * _noncentral_closed_form(eta, gamma)


def _phi_integrand_scalar(eta: float, rho: float, gamma: float) -> float:
    s = math.sqrt(4.0 * eta * gamma + 1.0)
    lin = (eta - gamma - 1.0) * (eta - gamma + 1.0) / (eta + gamma + s)
    log_term = math.log1p(2.0 * (1.0 + gamma - eta) / (s + 2.0 * eta - 1.0))
    return rho * (eta - 1.0 - math.log(eta)) + lin + log_term


def phi_integrand_derivative(eta: float, rho: float, gamma: float) -> float:
    s = math.sqrt(4.0 * eta * gamma + 1.0)
    return (1.0 + rho) * (1.0 - 1.0 / eta) - (s - 1.0) / (2.0 * eta)


def _eta_max(gamma: float) -> float:
    return max(10.0, 10.0 * gamma)


@lru_cache(maxsize=65536)
def _eta_star(rho: float, gamma: float) -> OptScalarResult:
    return minimize_scalar(lambda e: _phi_integrand_scalar(e, rho, gamma), 1.0, _eta_max(gamma),
                           tol=ETA_TOL * max(1.0, gamma),
                           grid_f=lambda e: phi_integrand(e, rho, gamma))


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"rho must lie in (0, 1], got {rho!r}")
    return rho


def eta_star(rho: float, gamma: float) -> float:
    """Minimizer over eta >= 1 of :func:`phi_integrand`, found numerically."""
    return _eta_star(_check_rho(rho), check_snr(gamma)).argopt


def eta_star_quadratic(rho: float, gamma: float, constant: float | None = None) -> float | None:
    """Larger root of the stationarity quadratic for the eta minimization.

    Setting the derivative of the integrand to zero gives
    ``(1+rho)^2 eta^2 - [(1+rho)(2 rho+1) + gamma] eta + rho^2 + rho = 0``.
    ``constant`` overrides the last coefficient (e.g. ``rho**2 + 1``).
    """
    a = (1.0 + rho) ** 2
    b = -((1.0 + rho) * (2.0 * rho + 1.0) + gamma)
    c = rho * rho + rho if constant is None else constant
    roots = solve_quadratic(a, b, c)
    return None if roots is None else roots[1]


def eta_star_printed(rho: float, gamma: float) -> float | None:
    """Closed form ``(G + sqrt(G^2 - 4(rho^2+1)(rho+1)^2)) / (2 (rho+1)^2)``.

    Only the leading high-SNR behaviour ``G/(rho+1)^2`` is trustworthy; kept
    for residual reporting.
    """
    disc = gamma * gamma - 4.0 * (rho * rho + 1.0) * (rho + 1.0) ** 2
    if disc < 0:
        return None
    return (gamma + math.sqrt(disc)) / (2.0 * (rho + 1.0) ** 2)


def phi(rho: float, gamma: float) -> float:
    """Phi(rho, gamma): the minimum over eta >= 1 of the integrand."""
    return _eta_star(_check_rho(rho), check_snr(gamma)).value


def phi_high_snr(rho: float, gamma: float) -> float:
    """Large-SNR expansion of Phi with eta* replaced by gamma/(rho+1)^2."""
    e = gamma / (rho + 1.0) ** 2
    return (rho * (e - 1.0 - math.log(e)) + e + gamma + math.log(rho + 1.0)
            - 2.0 * gamma / (rho + 1.0))


def _phi_or_zero(rho: float, gamma: float) -> float:
    return 0.0 if rho <= 0.0 else phi(rho, gamma)


def decoding_exponent_G(gamma: float, rate: float) -> float:
    """Error exponent (per N/2) of the maximum-energy band decoder at ``rate``."""
    gamma = check_snr(gamma)
    rate = float(rate)
    if rate < 0:
        raise DomainError("rate must be non-negative")
    res = maximize_scalar(lambda r: _phi_or_zero(r, gamma) - r * rate, 0.0, 1.0, tol=RHO_TOL)
    return max(res.value, 0.0)


def _lambda_opt(alpha: float, gamma: float, gamma_a: float | None = None) -> OptScalarResult:
    ga = gamma_alpha(alpha).value if gamma_a is None else gamma_a
    return maximize_scalar(lambda r: (phi(r, gamma) - ga * gamma) / r,
                           RHO_MIN, 1.0, tol=RHO_TOL, points=128, scale="log")


def lambda_alpha(alpha: float, gamma: float, gamma_a: float | None = None) -> float:
    """sup over rho in (0, 1] of (Phi(rho, gamma) - gamma_alpha*gamma) / rho.

    ``gamma_a`` overrides the unlimited-bandwidth coefficient.
    """
    alpha = check_alpha(alpha)
    gamma = check_snr(gamma)
    res = _lambda_opt(alpha, gamma, gamma_a)
    if res.argopt <= RHO_MIN * (1.0 + 1e-9):
        warnings.warn(f"Lambda sup attained at rho_min for alpha={alpha}, gamma={gamma}; "
                      "value may be unbounded", RuntimeWarning, stacklevel=2)
    return res.value


def replication_eval(alpha: float, gamma: float) -> ReplicationEval:
    """Bundle the optimizing rho, eta*, Phi and Lambda for one (alpha, gamma)."""
    alpha = check_alpha(alpha)
    gamma = check_snr(gamma)
    res = _lambda_opt(alpha, gamma)
    rho = res.argopt
    return ReplicationEval(rho, eta_star(rho, gamma), phi(rho, gamma), res.value,
                           max(res.value, 0.0))
