"""Scalar numerical primitives shared by every bound computation.

All optimizations in this package reduce to nested one-dimensional problems,
so the toolbox is deliberately small: a grid-then-golden-section maximizer,
bisection, and a numerically stable quadratic solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NonFiniteObjectiveError(ValueError):
    """The objective returned NaN or an infinity inside the search interval."""


class NoSignChangeError(ValueError):
    """A root was requested on an interval whose ends share a sign."""


@dataclass(frozen=True)
class OptScalarResult:
    argopt: float
    value: float
    evaluations: int
    converged: bool
    tolerance_used: float


def _grid(lo: float, hi: float, points: int, scale: str) -> np.ndarray:
    if scale == "linear":
        return np.linspace(lo, hi, points)
    if scale == "log":
        if lo <= 0:
            raise ValueError("log-spaced grid needs lo > 0")
        return np.geomspace(lo, hi, points)
    raise ValueError(f"unknown grid scale {scale!r}")


def maximize_scalar(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-9,
    points: int = 128,
    scale: str = "linear",
    vectorized: bool = False,
    max_iter: int = 200,
    grid_f: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> OptScalarResult:
    """Maximize ``f`` on ``[lo, hi]``.

    A coarse grid locates the best cell, then golden-section search refines
    inside the two cells adjacent to the best grid point. The grid guards
    against objectives that are not unimodal over the whole interval.

    Args:
        f: objective. With ``vectorized=True`` it must accept a numpy array.
        lo, hi: search interval, ``lo < hi``.
        tol: absolute tolerance on the argument.
        points: grid size (at least 128 is enforced).
        scale: ``"linear"`` or ``"log"`` grid spacing.
        grid_f: optional array version of ``f`` used for the grid pass only.

    Raises:
        NonFiniteObjectiveError: if ``f`` is not finite on the grid or during
            refinement.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    points = max(int(points), 128)
    xs = _grid(lo, hi, points, scale)
    if grid_f is not None:
        ys = np.asarray(grid_f(xs), dtype=float)
    elif vectorized:
        ys = np.asarray(f(xs), dtype=float)
    else:
        ys = np.array([f(float(x)) for x in xs], dtype=float)
    if not np.all(np.isfinite(ys)):
        bad = float(xs[~np.isfinite(ys)][0])
        raise NonFiniteObjectiveError(f"objective not finite at x={bad!r}")
    evals = points
    i = int(np.argmax(ys))
    best_x, best_y = float(xs[i]), float(ys[i])

    a = float(xs[max(i - 1, 0)])
    b = float(xs[min(i + 1, points - 1)])

    def fs(x: float) -> float:
        y = f(np.array([x]))[0] if vectorized else f(x)
        y = float(y)
        if not math.isfinite(y):
            raise NonFiniteObjectiveError(f"objective not finite at x={x!r}")
        return y

    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fs(c), fs(d)
    evals += 2
    it = 0
    while (b - a) > tol and it < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fs(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fs(d)
        evals += 1
        it += 1
    converged = (b - a) <= tol
    for x, y in ((c, fc), (d, fd)):
        if y > best_y:
            best_x, best_y = x, y
    return OptScalarResult(best_x, best_y, evals, converged, tol)


def minimize_scalar(f, lo, hi, tol=1e-9, points=128, scale="linear", vectorized=False,
                    grid_f=None):
    """Minimization counterpart of :func:`maximize_scalar`."""
    neg_grid = None if grid_f is None else (lambda x: -np.asarray(grid_f(x)))
    if vectorized:
        res = maximize_scalar(lambda x: -np.asarray(f(x)), lo, hi, tol, points, scale, True,
                              grid_f=neg_grid)
    else:
        res = maximize_scalar(lambda x: -f(x), lo, hi, tol, points, scale, grid_f=neg_grid)
    return OptScalarResult(res.argopt, -res.value, res.evaluations, res.converged, res.tolerance_used)


def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
              max_iter: int = 500) -> float:
    """Bisection root of ``f`` on ``[lo, hi]``; returns the final midpoint."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChangeError(f"f({lo})={flo} and f({hi})={fhi} share a sign")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_quadratic(a: float, b: float, c: float) -> Optional[Tuple[float, float]]:
    """Real roots of ``a x^2 + b x + c`` in ascending order, or None.

    Uses the sign-matched form ``q = -(b + sign(b) sqrt(D)) / 2`` so neither
    root suffers catastrophic cancellation.
    """
    if a == 0:
        raise ValueError("leading coefficient must be non-zero")
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0.0:
        # b == 0 and c == 0
        return (0.0, 0.0)
    r1, r2 = q / a, c / q
    return (min(r1, r2), max(r1, r2))
