"""Configuration management for the solver and its drivers."""

import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Chain construction defaults
DEFAULT_ALPHA = 0.25
DEFAULT_DELTA = 0.1
DEFAULT_LEAF_SIZE = 100  # |C| at which the chain stops and the leaf is solved densely

# Solver defaults
DEFAULT_EPS = 1e-8
DEFAULT_INNER_LOG_FACTOR = 2.0  # N = ceil(c * log2 n) inner Richardson sweeps

# Sparsifier defaults
DEFAULT_OVERSAMPLE = 16.0
DEFAULT_BACKEND = "sample_patch"

# Caps for dense and augmented constructions
ORACLE_CAP = 2000
AUGMENTED_CAP = 512
AUGMENTED_MAX_K = 6

FIND_RCDD_MAX_ROUNDS = 64

DEFAULT_SEED = 0
DEFAULT_MAX_WORKERS = 4

# Paths
PROJECT_ROOT = Path(__file__).parent.parent
RESULTS_DIR = PROJECT_ROOT / "results"


class Tolerances(BaseModel):
    """Numeric tolerances shared by structural and spectral checks."""

    structural_tol: float = Field(default=1e-9, gt=0)  # Eulerian / Laplacian checks, relative
    psd_tol: float = Field(default=1e-8, gt=0)  # Loewner comparisons, relative to the norm


class Settings(BaseModel):
    """Process-wide settings, overridable from the environment or a .env file."""

    seed: int = DEFAULT_SEED
    oracle_cap: int = Field(default=ORACLE_CAP, ge=1)
    backend: str = DEFAULT_BACKEND
    max_workers: int = Field(default=DEFAULT_MAX_WORKERS, ge=1)


def load_settings() -> Settings:
    """
    Load settings from EULERSOLVE_* environment variables.

    A .env file in the working directory is read first if present.

    Returns:
        Validated settings; unset variables keep their defaults.
    """
    load_dotenv()

    overrides: dict[str, str] = {}
    for key in ("seed", "oracle_cap", "backend", "max_workers"):
        env_key = f"EULERSOLVE_{key.upper()}"
        if env_key in os.environ:
            overrides[key] = os.environ[env_key]

    return Settings.model_validate(overrides)
