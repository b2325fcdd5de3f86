import numpy as np
import pytest

from logqp.instances import GeneratorSpec, analytic_instance, generate_random_qp
from logqp.newton import center


@pytest.fixture
def anchor():
    return analytic_instance("anchor")


@pytest.fixture
def shifted():
    return analytic_instance("shifted")


def random_qp(seed, n=6, m=12, r=3):
    return generate_random_qp(GeneratorSpec(n=n, m=m, r=r, seed=seed))


def centered(qp, mu, v0=None):
    """Centered point computed to near machine precision."""
    v0 = np.zeros(qp.m) if v0 is None else v0
    return center(qp, v0, mu, d_tol=1e-11)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
