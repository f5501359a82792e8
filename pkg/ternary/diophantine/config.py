# This file is part of ternary.
#
# SPDX-License-Identifier: MIT
"""
Settings for the solver, loaded from a ``config.toml`` file and overridable through environment
variables (a ``.env`` file is honoured).
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ternary.diophantine.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ENV_PREFIX = "TERNARY_"

_INTEGER_KEYS = (
    "CAP",
    "JOBS",
    "START_PRECISION_BITS",
    "MAX_PRECISION_BITS",
    "FACTOR_TRIAL_LIMIT",
    "FACTOR_MAX_BITS",
    "RHO_SEED",
    "RHO_MAX_STEPS",
)


@dataclass(frozen=True)
class Precision:
    """
    Working precision schedule for certified interval decisions.

    Attributes
    ----------
    start_bits: int
        Precision of the first attempt.
    max_bits: int
        Largest precision tried before giving up. Precision doubles between attempts.
    """

    start_bits: int = 128
    max_bits: int = 8 * 2**20

    def __post_init__(self):
        if self.start_bits < 16:
            raise ConfigurationError("START_PRECISION_BITS must be at least 16.")
        if self.max_bits < self.start_bits:
            raise ConfigurationError("MAX_PRECISION_BITS must not be below START_PRECISION_BITS.")


@dataclass(frozen=True)
class FactoringBudget:
    """
    Limits of the desk-scale factoring routine.

    Attributes
    ----------
    trial_limit: int
        Trial division runs over the primes below this limit.
    max_bits: int
        Composite cofactors larger than this are refused instead of being split.
    seed: int
        Seed of the rho-style splitting, so factorizations are reproducible.
    max_steps: int
        Iteration budget of a single rho attempt.
    """

    trial_limit: int = 10**6
    max_bits: int = 256
    seed: int = 1234
    max_steps: int = 10**6

    def __post_init__(self):
        if self.trial_limit < 3:
            raise ConfigurationError("FACTOR_TRIAL_LIMIT must be at least 3.")
        if self.max_bits < 1 or self.max_steps < 1:
            raise ConfigurationError("FACTOR_MAX_BITS and RHO_MAX_STEPS must be positive.")


@dataclass(frozen=True)
class Settings:
    """
    All the tunables of the package.
    """

    cap: int = 50
    jobs: int = 1
    log_level: str = "INFO"
    precision: Precision = field(default_factory=Precision)
    factoring: FactoringBudget = field(default_factory=FactoringBudget)

    def __post_init__(self):
        if self.cap < 1:
            raise ConfigurationError("CAP must be a positive integer.")
        if self.jobs < 1:
            raise ConfigurationError("JOBS must be a positive integer.")
        if logging.getLevelName(self.log_level.upper()) not in (
            logging.DEBUG,
            logging.INFO,
            logging.WARNING,
            logging.ERROR,
            logging.CRITICAL,
        ):
            raise ConfigurationError(f"Unknown LOG_LEVEL {self.log_level}.")


DEFAULT_PRECISION = Precision()
DEFAULT_FACTORING = FactoringBudget()


def _read_toml(path: Path) -> dict:
    try:
        with open(path, "rb") as config_fp:
            return tomllib.load(config_fp)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f'"{path}" is not a parsable toml file') from exc


def load_settings(path: Path | None = None) -> Settings:
    """
    Build the settings from an optional toml file and the environment.

    Environment variables named ``TERNARY_<KEY>`` take precedence over the file. A missing file
    is not an error, all keys have defaults.

    Parameters
    ----------
    path : Path | None
        Path to the toml configuration file.

    Returns
    -------
    Settings
        The validated settings.

    Raises
    ------
    ConfigurationError
        If a value has the wrong type or is out of range.
    """
    load_dotenv()

    raw: dict = {}
    if path is not None and path.is_file():
        raw.update(_read_toml(path))
        logger.debug("Configuration loaded from %s", path)

    for key in (*_INTEGER_KEYS, "LOG_LEVEL"):
        value = os.getenv(ENV_PREFIX + key)
        if value is not None:
            raw[key] = value

    values = {}
    for key in _INTEGER_KEYS:
        if key in raw:
            try:
                values[key] = int(raw[key])
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"{key} should be an integer, got {raw[key]!r}") from exc

    defaults = Settings()
    return Settings(
        cap=values.get("CAP", defaults.cap),
        jobs=values.get("JOBS", defaults.jobs),
        log_level=str(raw.get("LOG_LEVEL", defaults.log_level)),
        precision=Precision(
            start_bits=values.get("START_PRECISION_BITS", DEFAULT_PRECISION.start_bits),
            max_bits=values.get("MAX_PRECISION_BITS", DEFAULT_PRECISION.max_bits),
        ),
        factoring=FactoringBudget(
            trial_limit=values.get("FACTOR_TRIAL_LIMIT", DEFAULT_FACTORING.trial_limit),
            max_bits=values.get("FACTOR_MAX_BITS", DEFAULT_FACTORING.max_bits),
            seed=values.get("RHO_SEED", DEFAULT_FACTORING.seed),
            max_steps=values.get("RHO_MAX_STEPS", DEFAULT_FACTORING.max_steps),
        ),
    )
