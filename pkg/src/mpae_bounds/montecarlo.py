"""Monte Carlo checks on the N-dimensional AWGN vector channel.

Two schemes are simulated:

* quantize-and-orthogonal-signal: the parameter is quantized to M cells and
  the cell index is sent with one of M orthogonal signals of energy N*gamma;
  the receiver ML-decodes by maximum correlation and outputs the cell
  midpoint.
* the band-replication energy detector: one of M bands carries the signal,
  the decoder picks the band of largest received energy.

Noise has unit variance per dimension. Only the sufficient statistics are
drawn (the M correlator outputs, or the M band energies), so cost does not
grow with the unused dimensions.

Streams are derived from ``(seed, worker index)`` with ``SeedSequence.spawn``;
a fixed (config, seed, workers) triple reproduces a report bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

MAX_TRIALS = 10_000_000
BATCH = 1 << 15
EPS_U = 1e-9
DEFAULT_U_SWEEP = (0.0, 0.25, 0.5 - EPS_U, 0.5, 0.75, 1.0 - EPS_U)


class SimConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    n_dim: int
    snr: float
    alpha: float
    num_levels: int
    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if int(self.n_dim) != self.n_dim or self.n_dim < 2:
            raise SimConfigError("n_dim must be an integer >= 2")
        if not (self.snr >= 0 and math.isfinite(self.snr)):
            raise SimConfigError("snr must be finite and >= 0")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise SimConfigError("alpha must be positive")
        if int(self.num_levels) != self.num_levels or self.num_levels < 1:
            raise SimConfigError("num_levels must be a positive integer")
        if int(self.trials) != self.trials or not 1 <= self.trials <= MAX_TRIALS:
            raise SimConfigError(f"trials must be an integer in [1, {MAX_TRIALS}]")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise SimConfigError("seed must be a 64-bit unsigned integer")
        if int(self.workers) != self.workers or self.workers < 1:
            raise SimConfigError("workers must be a positive integer")

    @property
    def amplitude(self) -> float:
        """Signal amplitude sqrt(N*gamma), so that ||s||^2 / N == gamma."""
        return math.sqrt(self.n_dim * self.snr)

    @property
    def rate(self) -> float:
        """Replication rate R with M = exp((N/2) R)."""
        return 2.0 * math.log(self.num_levels) / self.n_dim

    def orthogonal_signal(self, index: int) -> np.ndarray:
        """The ``index``-th orthogonal signal as an explicit N-vector."""
        if not 0 <= index < self.num_levels:
            raise SimConfigError("signal index out of range")
        s = np.zeros(self.n_dim)
        s[index] = self.amplitude
        return s


@dataclass(frozen=True)
class SimReport:
    empirical_mpae: float
    empirical_error_prob: float
    wilson_ci: Tuple[float, float]
    trials_run: int
    empirical_exponent: float
    errors: int
    seed: int
    extras: Dict[str, float] = field(default_factory=dict)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    ci = stats.binomtest(int(successes), int(trials)).proportion_ci(confidence, method="wilson")
    return float(ci.low), float(ci.high)


def _exponent(estimate: float, n_dim: int) -> float:
    return math.inf if estimate <= 0 else -2.0 / n_dim * math.log(estimate)


def _shares(trials: int, workers: int) -> List[int]:
    base, extra = divmod(trials, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _run(config: SimConfig, worker_fn) -> List[dict]:
    """Split trials across workers, each with its own derived stream."""
    children = np.random.SeedSequence(config.seed).spawn(config.workers)
    shares = _shares(config.trials, config.workers)
    jobs = [(np.random.Generator(np.random.PCG64(ss)), n) for ss, n in zip(children, shares)]
    if config.workers == 1:
        return [worker_fn(*jobs[0])]
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        return list(pool.map(lambda job: worker_fn(*job), jobs))


def _merge(parts: Sequence[dict]) -> dict:
    out: Dict[str, float] = {}
    for part in parts:  # fixed worker order keeps the float sums reproducible
        for key, val in part.items():
            out[key] = out.get(key, 0) + val
    return out


def simulate_quantize_orthogonal(config: SimConfig, u_true: Optional[float] = 0.3) -> SimReport:
    """Quantize-and-orthogonal-signal modulation with ML decoding.

    ``u_true=None`` draws a fresh uniform parameter for every trial.
    """
    m_lv, n_dim = config.num_levels, config.n_dim
    if m_lv > n_dim:
        raise SimConfigError("num_levels cannot exceed n_dim for an orthogonal signal set")
    if u_true is not None and not 0.0 <= u_true < 1.0:
        raise SimConfigError("u_true must lie in [0, 1)")
    amp, alpha = config.amplitude, config.alpha

    def worker(rng: np.random.Generator, n: int) -> dict:
        acc = {"err_pow": 0.0, "errors": 0}
        done = 0
        while done < n:
            b = min(BATCH, n - done)
            u = rng.random(b) if u_true is None else np.full(b, u_true)
            cell = np.minimum((u * m_lv).astype(np.int64), m_lv - 1)
            corr = rng.standard_normal((b, m_lv))
            corr[np.arange(b), cell] += amp
            decoded = np.argmax(corr, axis=1)
            u_hat = (decoded + 0.5) / m_lv
            acc["err_pow"] += float(np.sum(np.abs(u_hat - u) ** alpha))
            acc["errors"] += int(np.count_nonzero(decoded != cell))
            done += b
        return acc

    tot = _merge(_run(config, worker))
    mpae = tot["err_pow"] / config.trials
    p_err = tot["errors"] / config.trials
    return SimReport(mpae, p_err, wilson_interval(tot["errors"], config.trials), config.trials,
                     _exponent(mpae, n_dim), tot["errors"], config.seed)


def simulate_replication_detector(config: SimConfig, band_true: int = 0) -> SimReport:
    """Maximum-energy band decoder over M replicated bands of N dimensions.

    The active band energy is (z + sqrt(N gamma))^2 + chi2(N - 1), i.e. the
    mean vector sits on one coordinate; idle bands are chi2(N). Both draws
    are exact. ``empirical_exponent`` is computed from the error
    probability; ``empirical_mpae`` uses band-midpoint estimates.
    """
    m_lv, n_dim = config.num_levels, config.n_dim
    if not 0 <= band_true < m_lv:
        raise SimConfigError("band_true out of range")
    amp, alpha = config.amplitude, config.alpha

    def worker(rng: np.random.Generator, n: int) -> dict:
        acc = {"err_pow": 0.0, "errors": 0, "act_sum": 0.0, "act_sq": 0.0,
               "idle_sum": 0.0, "idle_sq": 0.0, "idle_n": 0}
        done = 0
        while done < n:
            b = min(BATCH, n - done)
            q = rng.chisquare(n_dim, size=(b, m_lv))
            active = (rng.standard_normal(b) + amp) ** 2 + rng.chisquare(n_dim - 1, size=b)
            q[:, band_true] = active
            decoded = np.argmax(q, axis=1)
            wrong = decoded != band_true
            acc["errors"] += int(np.count_nonzero(wrong))
            acc["err_pow"] += float(np.sum((np.abs(decoded - band_true) / m_lv) ** alpha))
            acc["act_sum"] += float(active.sum())
            acc["act_sq"] += float(np.square(active).sum())
            if m_lv > 1:
                idle = np.delete(q, band_true, axis=1)
                acc["idle_sum"] += float(idle.sum())
                acc["idle_sq"] += float(np.square(idle).sum())
                acc["idle_n"] += idle.size
            done += b
        return acc

    tot = _merge(_run(config, worker))
    trials = config.trials
    p_err = tot["errors"] / trials
    extras: Dict[str, float] = {}
    act_mean = tot["act_sum"] / trials
    extras["active_energy_mean"] = act_mean
    extras["active_energy_se"] = math.sqrt(max(tot["act_sq"] / trials - act_mean ** 2, 0.0) / trials)
    if tot["idle_n"]:
        k = tot["idle_n"]
        idle_mean = tot["idle_sum"] / k
        extras["idle_energy_mean"] = idle_mean
        extras["idle_energy_se"] = math.sqrt(max(tot["idle_sq"] / k - idle_mean ** 2, 0.0) / k)
    return SimReport(tot["err_pow"] / trials, p_err, wilson_interval(tot["errors"], trials),
                     trials, _exponent(p_err, n_dim), tot["errors"], config.seed, extras)


def bound_testable(prob_bound: float, trials: int, min_expected: float = 10.0) -> bool:
    """Whether an analytic probability is large enough to be checked empirically."""
    return prob_bound * trials >= min_expected


def estimate_exponent_sequence(
    base: SimConfig,
    n_list: Sequence[int],
    simulate: Callable[[SimConfig], SimReport] = simulate_replication_detector,
) -> List[Tuple[int, float]]:
    """Empirical exponents of ``simulate`` for each block length in ``n_list``."""
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be increasing")
    return [(int(n), simulate(replace(base, n_dim=int(n))).empirical_exponent) for n in n_list]
