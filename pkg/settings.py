"""
Environment settings and logging setup for UnderlaySim
"""

import logging
import os
import sys

import structlog
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

ENVIRONMENT = os.getenv("ENVIRONMENT", "development")
DEBUG = ENVIRONMENT == "development"
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO" if DEBUG else "WARNING").upper()
DEFAULT_WORKERS = int(os.getenv("UNDERLAY_WORKERS", "1"))
DEFAULT_SEED = int(os.getenv("UNDERLAY_SEED", "20091"))

_configured = False


def configure_logging(level: str = LOG_LEVEL) -> None:
    """Configure structlog once; output always goes to stderr"""
    global _configured
    if _configured:
        return

    renderer = structlog.dev.ConsoleRenderer() if DEBUG else structlog.processors.JSONRenderer()
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            getattr(logging, level, logging.INFO)
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )
    _configured = True
