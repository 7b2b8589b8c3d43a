"""
Settings and errors shared by all modules
"""
import inspect
import logging
import os
from functools import lru_cache
from typing import Optional, Union
from pathlib import Path

import yaml
from pydantic import BaseModel


class Tolerances(BaseModel):
    row_uniform: float = 1e-12
    critical: float = 1e-9
    perron_gap: float = 1e-12
    fixed_point: float = 1e-12
    level: float = 1e-10
    endpoint: float = 1e-12
    equal_means: float = 1e-10
    realize: float = 1e-6
    witness: float = 1e-8
    decision: float = 1e-9
    modulus: float = 1e-12


class Iterations(BaseModel):
    power: int = 100000
    fixed_point: int = 1000000
    bisection: int = 200
    halvings: int = 60
    doublings: int = 1100


class OracleDefaults(BaseModel):
    max_n: int = 7
    max_cycles: int = 100000
    seed: int = 20240101
    trials: int = 50


class Settings(BaseModel):
    tolerances: Tolerances = Tolerances()
    iterations: Iterations = Iterations()
    oracle: OracleDefaults = OracleDefaults()


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """
    Load settings from a yaml file
    path
        yaml file to load; the file next to this module is used by default
    Note
    ----
    1) SPECTRAL_RANGE_SEED environment variable overrides the oracle seed
    2) A missing file falls back to the model defaults
    """
    if path is None:
        file_path = inspect.getfile(Settings)[:-3]
        path = f"{file_path}.yaml"
    data = {}
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except FileNotFoundError:
        logging.warning("Default settings file not found")
    settings = Settings(**data)
    seed = os.environ.get("SPECTRAL_RANGE_SEED")
    if seed:
        settings.oracle.seed = int(seed)
    return settings


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()


class SpectralRangeError(Exception):
    """
    Base class for all errors raised by this package
    """


class PreconditionError(SpectralRangeError, ValueError):
    """
    Input violates a documented precondition
    """


class InputError(SpectralRangeError, ValueError):
    """
    Malformed matrix file or command line value
    """


class BudgetError(PreconditionError):
    """
    Oracle enumeration would exceed its budget
    """


class InfeasibleError(SpectralRangeError, ValueError):
    """
    Requested value lies outside the attainable set
    clause
        short name of the membership rule that was violated
    """

    def __init__(self, message: str, clause: str = "range"):
        super().__init__(message)
        self.clause = clause


class ConvergenceError(SpectralRangeError, RuntimeError):
    """
    An iteration exhausted its budget
    """


class VerificationError(SpectralRangeError, RuntimeError):
    """
    A post-hoc check of a computed result failed
    """
