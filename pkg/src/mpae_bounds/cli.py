"""Command-line front end: sweeps, figure data, asymptotics and simulations.

Every data command writes CSV with ``#``-prefixed metadata lines (tool
version and the normalized flag set, never timestamps), so repeated runs
with the same flags are byte-identical. Exit codes: 0 success, 2 usage
error, 3 strictness failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
import warnings
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .asymptotics import (HIGH_SNR_KINDS, NoCrossingError, constant_crossovers, critical_snr,
                          high_snr_constant, verify_high_snr)
from .bounds import BoundKind, evaluate
from .kernels import DomainError, gamma_alpha
from .montecarlo import (DEFAULT_U_SWEEP, SimConfig, SimConfigError, SimReport, bound_testable,
                         simulate_quantize_orthogonal, simulate_replication_detector)
from .replication import decoding_exponent_G

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_STRICT = 3

COLUMNS = {
    BoundKind.DPT: "dpt",
    BoundKind.CHANNEL_CODING: "channel_coding",
    BoundKind.SPHERICAL_CAP: "spherical_cap",
    BoundKind.SPECTRUM_REPLICATION: "spectrum_replication",
    BoundKind.UNLIMITED: "unlimited",
    BoundKind.ACHIEVABILITY: "achievability",
}
KIND_BY_COLUMN = {v: k for k, v in COLUMNS.items()}

SWEEP_DEFAULTS = dict(snr_min=0.1, snr_max=1e3, points=100)
FIGURE_ALPHAS = {"fig3": 0.1, "fig4": 1.0, "fig5": 2.0, "fig5b": 10.0}
FIG6_ALPHAS = tuple(k / 10 for k in range(1, 101))
FIG7_ALPHAS = (0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0,
               7.0, 8.0, 9.0, 10.0)
HIGH_SNR_PROBES = (1e3, 1e4, 1e5, 1e6)
LOW_SNR_PROBE = 1e-4


class UsageError(Exception):
    """Flag combination that parses but cannot be honoured."""


class StrictFailure(Exception):
    """A ``--strict`` check was triggered."""


def fmt(x: float) -> str:
    """Full-precision scientific notation (round-trips through float())."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".16e")


def db_to_linear(x: float) -> float:
    return 10.0 ** (x / 10.0)


@dataclass(frozen=True)
class SweepSpec:
    alpha: float
    gamma_min: float
    gamma_max: float
    points: int
    scale: str
    kinds: tuple

    def __post_init__(self):
        if not self.alpha > 0:
            raise UsageError("--alpha must be positive")
        if not 0 < self.gamma_min < self.gamma_max or not math.isfinite(self.gamma_max):
            raise UsageError("need 0 < snr-min < snr-max")
        if self.points < 2:
            raise UsageError("--points must be at least 2")
        if self.scale not in ("log", "linear"):
            raise UsageError("scale must be log or linear")
        if not self.kinds:
            raise UsageError("at least one bound kind is required")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            g = np.geomspace(self.gamma_min, self.gamma_max, self.points)
        else:
            g = np.linspace(self.gamma_min, self.gamma_max, self.points)
        g[0], g[-1] = self.gamma_min, self.gamma_max
        return g


# ---------------------------------------------------------------- output helpers

@contextmanager
def _sink(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            yield fh


def _metadata(command: str, settings: Dict[str, object], snr_note: bool = False) -> List[str]:
    flags = " ".join(f"{k}={v}" for k, v in settings.items())
    lines = [f"# mpae-bounds {__version__}", f"# command: {command} {flags}".rstrip()]
    if snr_note:
        lines.append("# snr values in linear units")
    return lines


def _write_csv(out, meta: Sequence[str], header: Sequence[str], rows: Iterable[Sequence[float]]):
    buf = io.StringIO()
    for line in meta:
        buf.write(line + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    out.write(buf.getvalue())


# ---------------------------------------------------------------- sweeps

def sweep(spec: SweepSpec) -> Dict[str, np.ndarray]:
    """Evaluate the requested bound kinds on the sweep grid, in canonical column order."""
    gammas = spec.grid()
    cols: Dict[str, np.ndarray] = {"snr": gammas}
    for kind, name in COLUMNS.items():
        if kind in spec.kinds:
            cols[name] = np.array([evaluate(kind, spec.alpha, float(g)) for g in gammas])
    return cols


def _emit_sweep(args, spec: SweepSpec, command: str) -> int:
    cols = sweep(spec)
    settings = dict(alpha=spec.alpha, snr_min=spec.gamma_min, snr_max=spec.gamma_max,
                    points=spec.points, scale=spec.scale,
                    kinds="+".join(c for c in cols if c != "snr"))
    header = list(cols)
    with _sink(args.out) as out:
        _write_csv(out, _metadata(command, settings, snr_note=True), header, zip(*cols.values()))
    if args.plot:
        from .plotting import plot_bounds
        plot_bounds(cols["snr"], {k: v for k, v in cols.items() if k != "snr"}, spec.alpha,
                    args.plot, log_x=spec.scale == "log")
    return EXIT_OK


def _parse_kinds(text: Optional[str]) -> tuple:
    if text is None:
        return tuple(COLUMNS)
    kinds = []
    for name in text.split(","):
        name = name.strip()
        if name in KIND_BY_COLUMN:
            kinds.append(KIND_BY_COLUMN[name])
        else:
            try:
                kinds.append(BoundKind(name))
            except ValueError:
                raise UsageError(f"unknown bound kind {name!r}") from None
    return tuple(kinds)


def _spec_from_args(args, alpha: float) -> SweepSpec:
    lo = args.snr_min if args.snr_min is not None else SWEEP_DEFAULTS["snr_min"]
    hi = args.snr_max if args.snr_max is not None else SWEEP_DEFAULTS["snr_max"]
    if args.db:
        if args.snr_min is None or args.snr_max is None:
            raise UsageError("--db needs explicit --snr-min and --snr-max")
        lo, hi = db_to_linear(lo), db_to_linear(hi)
    points = args.points if args.points is not None else SWEEP_DEFAULTS["points"]
    return SweepSpec(alpha, lo, hi, points, args.scale, _parse_kinds(args.kinds))


def cmd_bounds(args) -> int:
    return _emit_sweep(args, _spec_from_args(args, args.alpha), "bounds")


# ---------------------------------------------------------------- figures

def fig6_rows(alphas: Sequence[float]) -> List[tuple]:
    return [(a, *(high_snr_constant(k, a).c for k in HIGH_SNR_KINDS)) for a in alphas]


def _critical_or_nan(kind: BoundKind, alpha: float) -> float:
    try:
        return critical_snr(kind, alpha).gamma_crit
    except NoCrossingError:
        return float("nan")


def fig7_rows(alphas: Sequence[float]) -> List[tuple]:
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for a in alphas:
            rows.append((a, *(_critical_or_nan(k, a) for k in HIGH_SNR_KINDS)))
    return rows


def cmd_figure(args) -> int:
    which = args.which
    if which in FIGURE_ALPHAS:
        if args.alpha:
            raise UsageError(f"{which} has a fixed alpha; use the bounds command instead")
        return _emit_sweep(args, _spec_from_args(args, FIGURE_ALPHAS[which]), f"figure {which}")
    alphas = tuple(args.alpha) if args.alpha else (FIG6_ALPHAS if which == "fig6" else FIG7_ALPHAS)
    if any(not a > 0 for a in alphas):
        raise UsageError("--alpha must be positive")
    if which == "fig6":
        header = ["alpha", "c_channel_coding", "c_spherical_cap", "c_spectrum_replication"]
        rows = fig6_rows(alphas)
    else:
        header = ["alpha", "gamma_cc", "gamma_sc", "gamma_sp"]
        rows = fig7_rows(alphas)
    settings = dict(alphas="+".join(format(a, "g") for a in alphas))
    with _sink(args.out) as out:
        _write_csv(out, _metadata(f"figure {which}", settings, snr_note=which == "fig7"), header,
                   rows)
    if args.plot:
        from .plotting import plot_against_alpha
        cols = {name: [r[i + 1] for r in rows]
                for i, name in enumerate(("channel_coding", "spherical_cap", "spectrum_replication"))}
        xs = [r[0] for r in rows]
        if which == "fig6":
            plot_against_alpha(xs, cols, r"high-SNR constant $c_\alpha$", args.plot)
        else:
            plot_against_alpha(xs, cols, r"critical SNR", args.plot, log_y=True)
    return EXIT_OK


# ---------------------------------------------------------------- asymptotics

def asymptotics_rows(alpha: float) -> List[tuple]:
    rows = []
    for kind in HIGH_SNR_KINDS:
        hc = high_snr_constant(kind, alpha)
        if hc.valid:
            res = [verify_high_snr(kind, alpha, g) for g in HIGH_SNR_PROBES]
        else:
            res = [float("nan")] * len(HIGH_SNR_PROBES)
        slope = evaluate(kind, alpha, LOW_SNR_PROBE) / LOW_SNR_PROBE
        rows.append((kind, hc.c, float(hc.valid), *res, slope))
    return rows


def cmd_asymptotics(args) -> int:
    header = (["kind", "c_alpha", "valid"] + [f"residual_{g:.0e}" for g in HIGH_SNR_PROBES]
              + ["slope_at_1e-04"])
    meta = _metadata("asymptotics", dict(alpha=args.alpha))
    meta.append(f"# gamma_alpha={fmt(gamma_alpha(args.alpha).value)}")
    buf = io.StringIO()
    for line in meta:
        buf.write(line + "\n")
    buf.write(",".join(header) + "\n")
    for kind, *vals in asymptotics_rows(args.alpha):
        buf.write(",".join([COLUMNS[kind]] + [fmt(v) for v in vals]) + "\n")
    with _sink(args.out) as out:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_critical_snr(args) -> int:
    alphas = tuple(args.alpha)
    rows = fig7_rows(alphas)
    settings = dict(alphas="+".join(format(a, "g") for a in alphas))
    with _sink(args.out) as out:
        _write_csv(out, _metadata("critical-snr", settings, snr_note=True),
                   ["alpha", "gamma_cc", "gamma_sc", "gamma_sp"], rows)
    return EXIT_OK


def cmd_crossover(args) -> int:
    if not 0 < args.alpha_min < args.alpha_max:
        raise UsageError("need 0 < alpha-min < alpha-max")
    found = constant_crossovers(args.alpha_min, args.alpha_max, args.points)
    buf = io.StringIO()
    for line in _metadata("crossover", dict(alpha_min=args.alpha_min, alpha_max=args.alpha_max,
                                            points=args.points)):
        buf.write(line + "\n")
    buf.write("alpha,kind_a,kind_b\n")
    for a, (ka, kb) in found:
        buf.write(f"{fmt(a)},{COLUMNS[ka]},{COLUMNS[kb]}\n")
    with _sink(args.out) as out:
        out.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------- simulate

def _analytic_replication(cfg: SimConfig) -> Dict[str, float]:
    if cfg.snr == 0:
        return {"rate": cfg.rate, "G": 0.0, "chernoff_bound": 1.0}
    g_val = decoding_exponent_G(cfg.snr, cfg.rate)
    return {"rate": cfg.rate, "G": g_val, "chernoff_bound": math.exp(-cfg.n_dim / 2 * g_val)}


def _analytic_quantize(cfg: SimConfig, u: Optional[float]) -> Dict[str, float]:
    from scipy.special import ndtr
    pair = float(ndtr(-math.sqrt(cfg.n_dim * cfg.snr / 2.0)))
    out = {"union_bound": min(1.0, (cfg.num_levels - 1) * pair)}
    if u is None:
        out["quantization_mpae"] = (0.5 / cfg.num_levels) ** cfg.alpha / (cfg.alpha + 1.0)
    else:
        cell = min(int(u * cfg.num_levels), cfg.num_levels - 1)
        out["quantization_mpae"] = abs((cell + 0.5) / cfg.num_levels - u) ** cfg.alpha
    return out


def _report_lines(label: str, rep: SimReport, analytic: Dict[str, float]) -> List[str]:
    lines = [f"[{label}]",
             f"trials_run: {rep.trials_run}",
             f"errors: {rep.errors}",
             f"empirical_error_prob: {fmt(rep.empirical_error_prob)}",
             f"wilson_ci: ({fmt(rep.wilson_ci[0])}, {fmt(rep.wilson_ci[1])})",
             f"empirical_mpae: {fmt(rep.empirical_mpae)}",
             f"empirical_exponent: {fmt(rep.empirical_exponent)}"]
    lines += [f"{k}: {fmt(v)}" for k, v in sorted(rep.extras.items())]
    lines += [f"analytic {k}: {fmt(v)}" for k, v in analytic.items()]
    return lines


def _parse_u(text: str):
    if text in ("random", "sweep"):
        return text
    try:
        u = float(text)
    except ValueError:
        raise UsageError("--u must be a number in [0, 1), 'random' or 'sweep'") from None
    if not 0.0 <= u < 1.0:
        raise UsageError("--u must lie in [0, 1)")
    return u


def cmd_simulate(args) -> int:
    if args.seed is None:
        if args.strict:
            raise UsageError("--strict requires --seed")
        seed = int(np.random.SeedSequence().entropy % (2 ** 64))
    else:
        seed = args.seed
    snr = db_to_linear(args.snr) if args.db else args.snr
    try:
        cfg = SimConfig(args.n_dim, snr, args.alpha, args.levels, args.trials, seed, args.workers)
    except SimConfigError as err:
        raise UsageError(str(err)) from None

    lines = [f"# mpae-bounds {__version__}",
             f"scheme: {args.scheme}", f"n_dim: {cfg.n_dim}", f"snr: {fmt(cfg.snr)}",
             f"alpha: {fmt(cfg.alpha)}", f"levels: {cfg.num_levels}", f"seed: {cfg.seed}",
             f"workers: {cfg.workers}"]
    csv_rows = []
    failures = []
    if args.scheme == "replication":
        if not 0 <= args.band < cfg.num_levels:
            raise UsageError("--band must lie in [0, levels)")
        rep = simulate_replication_detector(cfg, args.band)
        ana = _analytic_replication(cfg)
        testable = bound_testable(ana["chernoff_bound"], cfg.trials)
        lines += _report_lines(f"band {args.band}", rep, ana)
        lines.append(f"bound_status: {'testable' if testable else 'bound-untestable'}")
        if not testable:
            failures.append("analytic error probability is below the simulation's reach")
        elif rep.wilson_ci[0] > ana["chernoff_bound"]:
            failures.append("empirical error probability exceeds the Chernoff bound")
        csv_rows.append(("band", args.band, rep, ana))
    else:
        u_arg = _parse_u(args.u)
        if cfg.num_levels > cfg.n_dim:
            raise UsageError("--levels cannot exceed --n-dim for orthogonal signalling")
        us = DEFAULT_U_SWEEP if u_arg == "sweep" else (None if u_arg == "random" else u_arg,)
        worst = None
        for u in us:
            rep = simulate_quantize_orthogonal(cfg, u)
            ana = _analytic_quantize(cfg, u)
            label = "u random" if u is None else f"u {u!r}"
            lines += _report_lines(label, rep, ana)
            csv_rows.append(("u", "random" if u is None else repr(u), rep, ana))
            if worst is None or rep.empirical_mpae > worst:
                worst = rep.empirical_mpae
            if rep.wilson_ci[0] > ana["union_bound"]:
                failures.append(f"error probability above the union bound at {label}")
        if len(us) > 1:
            lines.append(f"worst_case_mpae: {fmt(worst)}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(f"# mpae-bounds {__version__}\n# scheme={args.scheme} n_dim={cfg.n_dim} "
                     f"snr={cfg.snr!r} alpha={cfg.alpha!r} levels={cfg.num_levels} "
                     f"trials={cfg.trials} seed={cfg.seed} workers={cfg.workers}\n")
            keys = sorted(csv_rows[0][3])
            fh.write(",".join(["point", "empirical_error_prob", "ci_lo", "ci_hi", "empirical_mpae",
                               "empirical_exponent", *keys]) + "\n")
            for _, point, rep, ana in csv_rows:
                vals = [rep.empirical_error_prob, *rep.wilson_ci, rep.empirical_mpae,
                        rep.empirical_exponent, *(ana[k] for k in keys)]
                fh.write(",".join([str(point)] + [fmt(v) for v in vals]) + "\n")
    if args.strict and failures:
        for msg in failures:
            sys.stderr.write(f"strict: {msg}\n")
        raise StrictFailure(failures[0])
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--snr-min", type=float, default=None, help="smallest SNR (default 0.1)")
    p.add_argument("--snr-max", type=float, default=None, help="largest SNR (default 1000)")
    p.add_argument("--points", type=int, default=None, help="grid points (default 100)")
    scale = p.add_mutually_exclusive_group()
    scale.add_argument("--log", dest="scale", action="store_const", const="log",
                       help="logarithmic SNR grid (default)")
    scale.add_argument("--linear", dest="scale", action="store_const", const="linear",
                       help="linear SNR grid")
    p.set_defaults(scale="log")
    p.add_argument("--db", action="store_true", help="read --snr-min/--snr-max in dB")
    p.add_argument("--kinds", default=None,
                   help="comma-separated subset of columns, e.g. spherical_cap,unlimited")


def _add_out(p: argparse.ArgumentParser, plot: bool = False) -> None:
    p.add_argument("--out", default=None, help="output path (default standard output)")
    if plot:
        p.add_argument("--plot", default=None, metavar="PNG",
                       help="also render the data to this PNG file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpae-bounds",
        description="Bounds on the mean power-alpha error exponent over the band-limited "
                    "AWGN channel.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="sweep all bounds over an SNR grid")
    p.add_argument("--alpha", type=float, required=True, help="moment order")
    _add_sweep_flags(p)
    _add_out(p, plot=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("figure", help="data behind the standard figures")
    p.add_argument("which", choices=sorted([*FIGURE_ALPHAS, "fig6", "fig7"]))
    p.add_argument("--alpha", type=float, action="append",
                   help="restrict fig6/fig7 rows to these orders (repeatable)")
    _add_sweep_flags(p)
    _add_out(p, plot=True)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("asymptotics", help="high-SNR constants, residuals and low-SNR slopes")
    p.add_argument("--alpha", type=float, required=True)
    _add_out(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("critical-snr", help="SNR where each band-limited bound departs")
    p.add_argument("--alpha", type=float, action="append", required=True,
                   help="moment order (repeatable)")
    _add_out(p)
    p.set_defaults(func=cmd_critical_snr)

    p = sub.add_parser("crossover", help="orders where the best high-SNR constant changes")
    p.add_argument("--alpha-min", type=float, default=0.1)
    p.add_argument("--alpha-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=2000)
    _add_out(p)
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("simulate", help="Monte Carlo run with analytic comparison")
    p.add_argument("--scheme", choices=("replication", "quantize"), default="replication")
    p.add_argument("--n-dim", type=int, default=64)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--snr", type=float, default=10.0)
    p.add_argument("--db", action="store_true", help="read --snr in dB")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--band", type=int, default=0, help="active band (replication)")
    p.add_argument("--u", default="0.3",
                   help="parameter value, 'random' or 'sweep' (quantize scheme)")
    p.add_argument("--strict", action="store_true",
                   help="exit 3 when the analytic bound is untestable or violated")
    p.add_argument("--out", default=None, help="also write a CSV summary to this path")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DomainError) as err:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {err}\n")
        return EXIT_USAGE
    except StrictFailure:
        return EXIT_STRICT


if __name__ == "__main__":
    sys.exit(main())
