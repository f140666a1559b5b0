import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("sphsym", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("sphsym")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
