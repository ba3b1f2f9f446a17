import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from atypes.graph import GenConfig, random_atype

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def gen_configs(draw, max_dim=3, max_extra=12):
    n = draw(st.integers(1, max_dim))
    p = draw(st.integers(1, max_dim))
    lo = n + p + 1 + draw(st.integers(0, max_extra))
    hi = lo + draw(st.integers(0, 6))
    p_delay = draw(st.sampled_from([0.0, 0.2, 0.5, 1.0]))
    return GenConfig(lo, hi, n, p, p_delay)


@st.composite
def graphs(draw, max_dim=3, max_extra=12):
    cfg = draw(gen_configs(max_dim, max_extra))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_atype(cfg, np.random.default_rng(seed))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
