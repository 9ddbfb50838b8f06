import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpae_bounds.kernels import psi_objective
from mpae_bounds.optim import (NonFiniteObjectiveError, NoSignChangeError, find_root,
                               maximize_scalar, minimize_scalar, solve_quadratic)
from mpae_bounds.replication import phi


def test_quadratic_vertex():
    res = maximize_scalar(lambda x: -(x - 1.0) ** 2, 0.0, 2.0, tol=1e-10)
    assert res.argopt == pytest.approx(1.0, abs=1e-9)
    assert res.value == pytest.approx(0.0, abs=1e-15)
    assert res.converged and res.tolerance_used == 1e-10


def test_psi_objective_peak_against_dense_grid():
    # oracle: step 1e-6 grid over q in [1/2, 1]
    q = np.arange(0.5, 1.0 + 5e-7, 1e-6)
    dense = 2 * q + 4 * q * np.sqrt(np.clip((1 - q) * q * 2, 0, None)) - 4 * q * q
    res = maximize_scalar(lambda x: psi_objective(x, 1.0), 0.5, 1.0, points=1000)
    assert res.value == pytest.approx(dense.max(), abs=1e-10)
    assert res.value >= dense.max()
    assert res.value == pytest.approx(1.4381690824, abs=1e-9)
    assert res.argopt == pytest.approx(0.5565184284, abs=1e-6)


def test_phi_maximized_at_rho_one():
    res = maximize_scalar(lambda r: phi(r, 10.0), 1e-6, 1.0)
    assert res.argopt == pytest.approx(1.0, abs=1e-6)


def test_log_grid_and_vectorized_agree():
    f = lambda x: np.log(x) - x / 7.0  # noqa: E731
    a = maximize_scalar(f, 0.1, 100.0, scale="log", vectorized=True)
    b = maximize_scalar(lambda x: math.log(x) - x / 7.0, 0.1, 100.0)
    assert a.argopt == pytest.approx(7.0, abs=1e-7)
    assert a.value == pytest.approx(b.value, abs=1e-14)


def test_grid_guards_against_local_maximum():
    # two peaks; the taller one is narrow and far from the centre
    f = lambda x: math.exp(-x * x) + 2.0 * math.exp(-((x - 8.0) / 0.2) ** 2)  # noqa: E731
    res = maximize_scalar(f, -10.0, 10.0, points=512)
    assert res.argopt == pytest.approx(8.0, abs=1e-6)


def test_minimize_matches_maximize_of_negation():
    res = minimize_scalar(lambda x: (x - 0.3) ** 2 + 1.0, 0.0, 1.0)
    # near a quadratic optimum of size 1 the argument is only resolvable to ~sqrt(eps)
    assert res.argopt == pytest.approx(0.3, abs=3e-8)
    assert res.value == pytest.approx(1.0, abs=1e-15)


def test_non_finite_objective_raises():
    with pytest.raises(NonFiniteObjectiveError):
        maximize_scalar(lambda x: math.inf if x > 0.5 else x, 0.0, 1.0)
    with pytest.raises(ValueError):
        maximize_scalar(lambda x: x, 1.0, 0.0)


@pytest.mark.parametrize("points", [128, 256, 1024, 4096])
def test_refinement_never_worsens_with_denser_grid(points):
    f = lambda q: psi_objective(q, 0.7)  # noqa: E731
    coarse = maximize_scalar(f, 0.5, 1.0, points=128).value
    assert maximize_scalar(f, 0.5, 1.0, points=points).value >= coarse - 1e-14


def test_find_root_examples():
    assert find_root(lambda x: x, -1.0, 1.0) == 0.0
    r = find_root(lambda a: a * a - (a - 1.0) * math.sqrt(a + 1.0) - 2.0, 1.0, 2.0, tol=1e-13)
    assert abs(r * r - (r - 1.0) * math.sqrt(r + 1.0) - 2.0) < 1e-12
    with pytest.raises(NoSignChangeError):
        find_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_solve_quadratic_examples():
    lo, hi = solve_quadratic(4.0, -16.0, 2.0)
    assert hi == pytest.approx(3.8708286933869707, rel=1e-15)
    assert solve_quadratic(1.0, -2.0, 1.0) == (1.0, 1.0)
    assert solve_quadratic(1.0, 0.0, 1.0) is None
    with pytest.raises(ValueError):
        solve_quadratic(0.0, 1.0, 1.0)


def test_solve_quadratic_no_cancellation():
    # roots 1e-8 and 1e8: the textbook formula loses the small one entirely
    lo, hi = solve_quadratic(1.0, -(1e8 + 1e-8), 1.0)
    assert lo == pytest.approx(1e-8, rel=1e-12)
    assert hi == pytest.approx(1e8, rel=1e-12)


finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


@settings(max_examples=300, deadline=None)
@given(a=finite.filter(lambda v: abs(v) > 1e-3), b=finite, c=finite)
def test_solve_quadratic_residual(a, b, c):
    roots = solve_quadratic(a, b, c)
    if roots is None:
        assert b * b - 4 * a * c < 0
        return
    scale = max(abs(a), abs(b), abs(c))
    for r in roots:
        # residual relative to the size of the individual terms
        terms = max(abs(a * r * r), abs(b * r), abs(c), scale)
        assert abs(a * r * r + b * r + c) <= 1e-9 * terms
    assert roots[0] <= roots[1]
