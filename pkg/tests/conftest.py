"""Shared oracles and the acceptance summary hook.

The oracle functions evaluate the textbook forms of the kernels at 50
significant digits with mpmath. They share no code with the package, which
uses rearranged ``log1p`` forms and its own optimizers.
"""

import mpmath as mp
import pytest

mp.mp.dps = 50

_ACCEPTANCE = []


def e0_oracle(rho, gamma):
    r, g = mp.mpf(rho), mp.mpf(gamma)
    beta = (1 + g / (1 + r)) / 2 * (1 + mp.sqrt(1 - 4 * g * r / (1 + r + g) ** 2))
    val = ((1 - beta) * (1 + r) + g + mp.log(beta - g / (1 + r)) + r * mp.log(beta)) / 2
    return float(beta), float(val)


def ex_oracle(rho, gamma):
    r, g = mp.mpf(rho), mp.mpf(gamma)
    beta = mp.mpf(1) / 2 + g / (4 * r) + mp.sqrt(1 + g ** 2 / (4 * r ** 2)) / 2
    val = (1 - beta) * r + g / 2 + r / 2 * mp.log(beta * (beta - g / (2 * r)))
    return float(beta), float(val)


def g_oracle(eta, rho, gamma):
    e, r, g = mp.mpf(eta), mp.mpf(rho), mp.mpf(gamma)
    s = mp.sqrt(4 * e * g + 1)
    return r * (e - 1 - mp.log(e)) + e + g + mp.log((s + 1) / (2 * e)) - s


def phi_oracle(rho, gamma):
    """(eta*, Phi) from Newton on the derivative of the integrand."""
    start = mp.mpf(gamma) / (1 + mp.mpf(rho)) ** 2 + mp.mpf("0.5")
    eta = mp.findroot(lambda e: mp.diff(lambda x: g_oracle(x, rho, gamma), e), start)
    eta = max(eta, mp.mpf(1))
    return float(eta), float(g_oracle(eta, rho, gamma))


@pytest.fixture
def acceptance_line():
    def record(number, ok, detail):
        _ACCEPTANCE.append((number, bool(ok), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
