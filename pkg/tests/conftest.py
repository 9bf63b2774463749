import math

import numpy as np
import pytest

from sturm_hurwitz import TrigPoly

TWO_PI = 2 * math.pi


def random_leading_poly(rng, n_max=8, degree_max=32):
    """Standard-normal coefficients on orders n..degree, with n uniform in 1..n_max."""
    n = int(rng.integers(1, n_max + 1))
    degree = int(rng.integers(n, degree_max + 1))
    k = np.arange(n, degree + 1)
    return TrigPoly.from_arrays(k, rng.standard_normal(k.size), rng.standard_normal(k.size)), n


def random_mean_zero(rng, degree_max=32):
    degree = int(rng.integers(1, degree_max + 1))
    k = np.arange(1, degree + 1)
    return TrigPoly.from_arrays(k, rng.standard_normal(k.size), rng.standard_normal(k.size))


def brute_eval(p, x):
    """Term-by-term evaluation with math.fsum, independent of the library's evaluator."""
    return math.fsum(a * math.cos(k * x) + b * math.sin(k * x) for k, a, b in zip(p.orders.tolist(), p.cos_coeffs.tolist(), p.sin_coeffs.tolist()))


def cyc(x, y):
    d = abs(x - y) % TWO_PI
    return min(d, TWO_PI - d)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
