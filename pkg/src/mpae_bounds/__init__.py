"""Converse and achievability bounds on the mean power-alpha error exponent.

The exponent is taken per unit bandwidth for a parameter modulated onto a
band-limited AWGN channel; see the submodules for kernels, bounds, SNR
asymptotics and Monte Carlo checks.
"""

__version__ = "0.1.0"

from .bounds import (BoundCurve, BoundKind, achievability_bound, cap_area_ratio,  # noqa: E402
                     channel_coding_converse, dpt_bound, evaluate, sample_curve,
                     spectrum_replication_bound, spherical_cap_bound, unlimited_bound)
from .kernels import DomainError, alpha0, e0, ex, gamma_alpha, psi  # noqa: E402

__all__ = [
    "BoundCurve", "BoundKind", "DomainError", "achievability_bound", "alpha0",
    "cap_area_ratio", "channel_coding_converse", "dpt_bound", "e0", "evaluate", "ex",
    "gamma_alpha", "psi", "sample_curve", "spectrum_replication_bound",
    "spherical_cap_bound", "unlimited_bound",
]
