import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from proclimits.dist import paper_mixture

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# level with expectile exactly 1 for the mixture, from the closed form
# B / (A + B); cross-checked by quadrature and Monte Carlo
TAU0 = 0.6519406966223473


@pytest.fixture
def mixture():
    return paper_mixture()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
