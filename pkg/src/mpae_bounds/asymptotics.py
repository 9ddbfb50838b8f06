"""SNR asymptotics of the converse bounds, critical SNRs and constant crossovers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .bounds import (BoundKind, channel_coding_converse, evaluate, spectrum_replication_bound,
                     spherical_cap_bound)
from .kernels import DomainError, check_alpha, e0, gamma_alpha
from .optim import NoSignChangeError, find_root
from .replication import lambda_alpha

HIGH_SNR_KINDS = (BoundKind.CHANNEL_CODING, BoundKind.SPHERICAL_CAP,
                  BoundKind.SPECTRUM_REPLICATION)

GAMMA_SEARCH_MIN = 1e-6
GAMMA_SEARCH_MAX = 1e9


class NoCrossingError(RuntimeError):
    """No sign change could be bracketed inside the SNR search window."""


@dataclass(frozen=True)
class HighSnrConstant:
    kind: BoundKind
    alpha: float
    c: float
    valid: bool


@dataclass(frozen=True)
class CriticalSnr:
    kind: BoundKind
    alpha: float
    gamma_crit: float


def high_snr_constant(kind, alpha: float) -> HighSnrConstant:
    """Additive constant c in ``F <= alpha log(gamma) + c + o(1)``.

    The replication bound grows linearly for alpha < 2 and has no such
    constant there; the result is then flagged ``valid=False`` with NaN.
    """
    kind = BoundKind(kind)
    alpha = check_alpha(alpha)
    if kind is BoundKind.CHANNEL_CODING:
        c = alpha - (1.0 + alpha) * math.log1p(alpha)
    elif kind is BoundKind.SPHERICAL_CAP:
        c = alpha * math.log(gamma_alpha(alpha).value / alpha) + alpha
    elif kind is BoundKind.SPECTRUM_REPLICATION:
        if alpha < 2.0:
            return HighSnrConstant(kind, alpha, float("nan"), False)
        c = alpha * (1.0 - math.log(8.0))
    else:
        raise DomainError(f"no high-SNR constant for {kind.value}")
    return HighSnrConstant(kind, alpha, c, True)


def verify_high_snr(kind, alpha: float, gamma_large: float) -> float:
    """Residual ``bound - alpha log(gamma) - c`` at a large SNR."""
    if gamma_large < 1e3:
        raise DomainError("gamma_large must be at least 1e3")
    const = high_snr_constant(kind, alpha)
    if not const.valid:
        raise DomainError(f"{const.kind.value} has no high-SNR constant at alpha={alpha}")
    return evaluate(const.kind, alpha, gamma_large) - alpha * math.log(gamma_large) - const.c


def low_snr_slope(alpha: float) -> float:
    """Low-SNR slope alpha / (2 (1 + alpha))."""
    alpha = check_alpha(alpha)
    return alpha / (2.0 * (1.0 + alpha))


def _first_positive_crossing(d, tol: float = 1e-6) -> float:
    """Smallest-found SNR where ``d`` turns from <= 0 to > 0, bisected in log-SNR.

    The bracket is grown geometrically from gamma = 1.
    """
    lo = hi = 1.0
    if d(1.0) > 0:
        while d(lo) > 0:
            hi = lo
            lo /= 2.0
            if lo < GAMMA_SEARCH_MIN:
                raise NoCrossingError("difference positive down to the search floor")
    else:
        while d(hi) <= 0:
            lo = hi
            hi *= 2.0
            if hi > GAMMA_SEARCH_MAX:
                raise NoCrossingError("difference non-positive up to the search ceiling")
    try:
        x = find_root(lambda t: d(math.exp(t)), math.log(lo), math.log(hi), tol=tol)
    except NoSignChangeError as err:
        raise NoCrossingError(str(err)) from err
    return math.exp(x)


def critical_snr(kind, alpha: float) -> CriticalSnr:
    """Smallest SNR at which a band-limited bound departs from gamma_alpha * gamma."""
    kind = BoundKind(kind)
    alpha = check_alpha(alpha)
    ga = gamma_alpha(alpha).value
    if kind is BoundKind.SPHERICAL_CAP:
        g = alpha / ga
    elif kind is BoundKind.CHANNEL_CODING:
        g = _first_positive_crossing(lambda G: ga * G - 2.0 * e0(alpha, G).value)
    elif kind is BoundKind.SPECTRUM_REPLICATION:
        g = _first_positive_crossing(lambda G: lambda_alpha(alpha, G))
    else:
        raise DomainError(f"no critical SNR for {kind.value}")
    return CriticalSnr(kind, alpha, g)


def _constant(kind: BoundKind, alpha: float) -> float:
    return high_snr_constant(kind, alpha).c


def constant_crossovers(alpha_min: float = 0.1, alpha_max: float = 10.0,
                        points: int = 2000) -> List[Tuple[float, Tuple[BoundKind, BoundKind]]]:
    """Orders where two high-SNR constants cross, plus the replication validity edge.

    The replication constant only exists for alpha >= 2, which is reported as
    a pseudo-crossing between replication and itself at alpha = 2.
    """
    out: List[Tuple[float, Tuple[BoundKind, BoundKind]]] = []
    pairs = [(HIGH_SNR_KINDS[i], HIGH_SNR_KINDS[j])
             for i in range(3) for j in range(i + 1, 3)]
    for ka, kb in pairs:
        lo_dom = alpha_min
        if BoundKind.SPECTRUM_REPLICATION in (ka, kb):
            lo_dom = max(alpha_min, 2.0)
        if lo_dom >= alpha_max:
            continue

        def diff(a, ka=ka, kb=kb):
            return _constant(ka, a) - _constant(kb, a)

        grid = np.linspace(lo_dom, alpha_max, points)
        vals = [diff(a) for a in grid]
        for a0, a1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
            if v0 == 0.0:
                out.append((float(a0), (ka, kb)))
            elif (v0 > 0) != (v1 > 0) and v1 != 0.0:
                out.append((find_root(diff, float(a0), float(a1), tol=1e-12), (ka, kb)))
        if vals[-1] == 0.0:
            out.append((float(grid[-1]), (ka, kb)))
    if alpha_min <= 2.0 <= alpha_max:
        out.append((2.0, (BoundKind.SPECTRUM_REPLICATION, BoundKind.SPECTRUM_REPLICATION)))
    out.sort(key=lambda item: item[0])
    return out


def best_constant(alpha: float) -> BoundKind:
    """Converse with the smallest valid high-SNR constant at ``alpha``."""
    best = None
    for kind in HIGH_SNR_KINDS:
        hc = high_snr_constant(kind, alpha)
        if hc.valid and (best is None or hc.c < best.c):
            best = hc
    return best.kind
