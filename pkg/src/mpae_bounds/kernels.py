"""Closed-form information-theoretic kernels for the power-limited AWGN channel.

Exponents are in nats. ``gamma`` is always the linear SNR P/(N0 W).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .optim import find_root, maximize_scalar


class DomainError(ValueError):
    """An argument lies outside the domain of a kernel."""


PSI_BRANCH = "psi-branch"
MIDDLE_BRANCH = "middle-branch"
HIGH_BRANCH = "high-branch"


@dataclass(frozen=True)
class GallagerEval:
    rho: float
    gamma: float
    beta: float
    value: float


@dataclass(frozen=True)
class GammaAlphaBound:
    value: float
    branch: str
    alpha0: float


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"moment order must be positive and finite, got {alpha!r}")
    return alpha


def check_snr(gamma: float) -> float:
    gamma = float(gamma)
    if not (gamma > 0 and math.isfinite(gamma)):
        raise DomainError(f"SNR must be positive and finite, got {gamma!r}")
    return gamma


def e0(rho: float, gamma: float) -> GallagerEval:
    """Gallager's random coding function for the power-constrained AWGN channel.

    Evaluated through an algebraically equivalent form in which every
    logarithm is a ``log1p`` of a quantity that vanishes with the SNR, so the
    quadratic low-SNR behaviour survives in floating point.
    """
    rho = float(rho)
    if not rho >= 0:
        raise DomainError(f"rho must be >= 0, got {rho!r}")
    gamma = check_snr(gamma)
    a = gamma / (1.0 + rho)
    d = 4.0 * gamma * rho / (1.0 + rho + gamma) ** 2
    root = math.sqrt(1.0 - d)
    # beta0 = (1 + a) (1 - h)
    h = d / (2.0 * (1.0 + root))
    beta = (1.0 + a) * (1.0 - h)
    value = 0.5 * (
        h * (1.0 + rho + gamma)
        + math.log1p(-h * (1.0 + a))
        + rho * math.log1p(a - h * (1.0 + a))
    )
    return GallagerEval(rho, gamma, beta, max(value, 0.0))


def ex(rho: float, gamma: float) -> GallagerEval:
    """Gallager's expurgated function; tends to ``gamma / 4`` as rho grows."""
    rho = float(rho)
    if not rho > 0:
        raise DomainError(f"rho must be > 0, got {rho!r}")
    gamma = check_snr(gamma)
    t = gamma / (2.0 * rho)
    root = math.sqrt(1.0 + t * t)
    beta = 0.5 * (1.0 + t + root)
    # (1 - beta) rho + gamma/2 = (rho/2) (1 - 1/(t + root))
    lin = (t + t * t / (1.0 + root)) / (t + root)
    logterm = math.log1p(t * t / (2.0 * (1.0 + root)))
    value = 0.5 * rho * (lin + logterm)
    return GallagerEval(rho, gamma, beta, max(value, 0.0))


def _alpha0_equation(alpha: float) -> float:
    return alpha * alpha - (alpha - 1.0) * math.sqrt(alpha + 1.0) - 2.0


@lru_cache(maxsize=1)
def alpha0() -> float:
    """Root on (1, 2) of ``a^2 - (a - 1) sqrt(a + 1) - 2``."""
    return find_root(_alpha0_equation, 1.0, 2.0, tol=1e-13)


def psi_objective(q: float, alpha: float) -> float:
    return (2.0 * alpha * q + 4.0 * q * math.sqrt(max((1.0 - q) * q * (1.0 + alpha), 0.0))
            - q * q * (3.0 * alpha + 1.0))


@lru_cache(maxsize=4096)
def psi(alpha: float) -> float:
    # q is confined to [1/2, 1] to keep the radicand non-negative
    res = maximize_scalar(lambda q: psi_objective(q, alpha), 0.5, 1.0, tol=1e-9, points=1000)
    return 1.0 + alpha - res.value


def _psi_branch(alpha: float) -> float:
    return min(alpha, psi(alpha)) / (1.0 + alpha)


def _middle_branch(alpha: float) -> float:
    return alpha / (2.0 * (1.0 + alpha)) * (
        1.0 + (alpha + 5.0 - 4.0 * math.sqrt(alpha + 1.0)) / (3.0 * alpha + 1.0))


def _high_branch(alpha: float) -> float:
    return alpha / (2.0 * (1.0 + alpha))


def gamma_alpha_piecewise(alpha: float) -> GammaAlphaBound:
    """The three-branch upper bound on the unlimited-bandwidth exponent as printed.

    At the branch junctions both neighbouring expressions are evaluated and
    the smaller one is kept. The result is *not* monotone in ``alpha``; use
    :func:`gamma_alpha` for the monotone version used by the bounds.
    """
    alpha = check_alpha(alpha)
    a0 = alpha0()
    cands = []
    if alpha <= a0:
        cands.append((_psi_branch(alpha), PSI_BRANCH))
    if a0 <= alpha <= 2.0:
        cands.append((_middle_branch(alpha), MIDDLE_BRANCH))
    if alpha >= 2.0:
        cands.append((_high_branch(alpha), HIGH_BRANCH))
    value, branch = min(cands)
    return GammaAlphaBound(value, branch, a0)


def gamma_alpha(alpha: float) -> GammaAlphaBound:
    """Upper bound on gamma_alpha, made non-decreasing in ``alpha``.

    gamma_alpha itself is non-decreasing in alpha, so any upper bound at a
    larger order also bounds it at a smaller order. The piecewise formula
    jumps down at ``alpha0`` and at 2; taking the infimum over the right
    tail removes both jumps. Each branch is increasing on its own range, so
    the infimum only needs the left end of every later branch.
    """
    alpha = check_alpha(alpha)
    a0 = alpha0()
    raw = gamma_alpha_piecewise(alpha)
    cands = [(raw.value, raw.branch)]
    if alpha < a0:
        cands.append((_middle_branch(a0), MIDDLE_BRANCH))
    if alpha < 2.0:
        cands.append((_high_branch(2.0), HIGH_BRANCH))
    if alpha >= 2.0:
        # exact closed form; no competing branch
        return GammaAlphaBound(_high_branch(alpha), HIGH_BRANCH, a0)
    value, branch = min(cands)
    return GammaAlphaBound(value, branch, a0)


def reliability_unlimited(rate: float, capacity: float) -> float:
    """Reliability function of the unlimited-bandwidth AWGN channel."""
    rate, capacity = float(rate), float(capacity)
    if not capacity > 0:
        raise DomainError("capacity must be positive")
    if rate < 0 or rate > capacity:
        raise DomainError(f"rate must lie in [0, capacity], got {rate!r}")
    if rate <= capacity / 4.0:
        return capacity / 2.0 - rate
    return (math.sqrt(capacity) - math.sqrt(rate)) ** 2


def unlimited_quantize_exponent(alpha: float, capacity: float, tol: float = 1e-12):
    """``2 max_R min{E(R, C), alpha R}`` by direct numerical maximization.

    Returns ``(rate, value)``.
    """
    alpha = check_alpha(alpha)
    res = maximize_scalar(
        lambda r: min(reliability_unlimited(r, capacity), alpha * r),
        0.0, capacity, tol=tol, points=256)
    return res.argopt, 2.0 * res.value
