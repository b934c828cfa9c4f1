"""
Qudit Tomography Configuration

Numerical tolerances and run defaults. Values come from the environment
(optionally through a .env file) and fall back to the defaults below.
"""

import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Tuple

from dotenv import load_dotenv

from errors import ConfigError

# Load environment variables from .env file
load_dotenv()

DEFAULT_Q_GRID: Tuple[float, ...] = (1.0, 1.1, 1.5, 2.0, 3.0, 5.0)


@dataclass(frozen=True)
class Tolerances:
    """Tolerances used by validation and by the inequality verdicts."""

    herm: float = 1e-10
    unitary: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-9
    recon: float = 1e-9
    # pass tolerance on inequality slack
    slack: float = 1e-9
    # max deviation allowed by the no-signaling check
    nosig: float = 1e-10
    # negatives above -prob_floor are read as zero
    prob_floor: float = 1e-12
    # |q - 1| <= eps_q switches to the Shannon / von Neumann branch
    eps_q: float = 1e-8

    def with_slack(self, slack: float) -> "Tolerances":
        """Return a copy with a different slack tolerance."""
        if slack < 0:
            raise ConfigError(f"slack tolerance must be non-negative, got {slack}")
        return replace(self, slack=slack)


_ENV_FIELDS = {
    "herm": "QUDIT_TOL_HERM",
    "unitary": "QUDIT_TOL_UNITARY",
    "trace": "QUDIT_TOL_TRACE",
    "psd": "QUDIT_TOL_PSD",
    "recon": "QUDIT_TOL_RECON",
    "slack": "QUDIT_TOL_SLACK",
    "nosig": "QUDIT_TOL_NOSIG",
    "prob_floor": "QUDIT_PROB_FLOOR",
    "eps_q": "QUDIT_EPS_Q",
}


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {raw!r}") from None
    if value < 0:
        raise ConfigError(f"{name} must be non-negative, got {value}")
    return value


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def load_tolerances() -> Tolerances:
    """
    Build tolerances from the environment.

    Returns:
        A Tolerances instance with every QUDIT_TOL_* override applied.
    """
    base = Tolerances()
    overrides = {
        field: _env_float(env_name, getattr(base, field))
        for field, env_name in _ENV_FIELDS.items()
    }
    return replace(base, **overrides)


@lru_cache(maxsize=1)
def default_tolerances() -> Tolerances:
    """Process-wide tolerances, read once from the environment."""
    return load_tolerances()


def resolve(tol: "Tolerances | None") -> Tolerances:
    """Use ``tol`` when given, otherwise the environment tolerances."""
    return default_tolerances() if tol is None else tol


def default_seed() -> int:
    """Seed from QUDIT_SEED, 0 when unset."""
    return _env_int("QUDIT_SEED", 0)


def default_workers() -> int:
    """Worker count from QUDIT_WORKERS, at least 1."""
    return max(1, _env_int("QUDIT_WORKERS", 1))


def log_level() -> str:
    """Logging level name from QUDIT_LOG_LEVEL."""
    return os.getenv("QUDIT_LOG_LEVEL", "WARNING").upper()
