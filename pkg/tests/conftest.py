"""
Shared fixtures for the UnderlaySim test suite
"""

import logging

import pytest
import structlog

import settings
from core.sampling import RandomStream
from network.schemas import PrimaryMode, SecondaryMode, SystemConfig


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Route structlog to a discarding logger so captured streams are never held"""
    structlog.configure(
        processors=[structlog.processors.add_log_level, structlog.processors.JSONRenderer()],
        wrapper_class=structlog.make_filtering_bound_logger(logging.DEBUG),
        logger_factory=structlog.ReturnLoggerFactory(),
        cache_logger_on_first_use=False,
    )
    settings._configured = True
    yield


@pytest.fixture
def stream():
    return RandomStream(20091, 7)


@pytest.fixture
def mac_cfg():
    """Secondary MAC under a primary broadcast at the reference parameters"""
    return SystemConfig(n=200)


@pytest.fixture
def bc_cfg():
    """Secondary broadcast under a primary broadcast at the reference parameters"""
    return SystemConfig(n=200, secondary_mode=SecondaryMode.BROADCAST)


@pytest.fixture(params=[
    (SecondaryMode.MAC, PrimaryMode.BROADCAST),
    (SecondaryMode.MAC, PrimaryMode.MAC),
    (SecondaryMode.BROADCAST, PrimaryMode.BROADCAST),
    (SecondaryMode.BROADCAST, PrimaryMode.MAC),
], ids=["mac-bc", "mac-mac", "bc-bc", "bc-mac"])
def any_cfg(request):
    secondary, primary = request.param
    return SystemConfig(n=150, secondary_mode=secondary, primary_mode=primary)
