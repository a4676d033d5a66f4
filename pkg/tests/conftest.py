import time

import pytest
from hypothesis import HealthCheck, settings

from owc_relay.channel import FogParams, SystemParams, link_at
from owc_relay.geometry import PointingGeometry
from owc_relay.relay import RelayConfig

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GAMMA_TH = 10.0 ** 0.6   # 6 dB


@pytest.fixture
def fog():
    return FogParams()


@pytest.fixture
def geom():
    return PointingGeometry()


@pytest.fixture
def system():
    return SystemParams()


def relay(d, d_r=None, pt=15.0, k=2.0, geom=None):
    d_r = d / 2 if d_r is None else d_r
    return RelayConfig.from_geometry(d, d_r, FogParams(k=k), geom or PointingGeometry(),
                                     SystemParams(pt_dbm=pt))


def link(d, pt=15.0, k=2.0):
    return link_at(d, FogParams(k=k), PointingGeometry(), SystemParams(pt_dbm=pt))


ACCEPTANCE_LINES = []
SUITE_LIMIT_S = 120.0
_START = {}


def pytest_sessionstart(session):
    _START["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
        elapsed = time.perf_counter() - _START["t"]
        verdict = "PASS" if elapsed < SUITE_LIMIT_S else "FAIL"
        terminalreporter.write_line(f"{verdict}  6   full suite runtime {elapsed:.1f} s (limit {SUITE_LIMIT_S:.0f} s)")
