# config.py
"""
Engine configuration.

Module-level dicts hold the defaults; anything worth overriding per
deployment is read from the environment (a local .env file is loaded
first). RunConfig layers command-line flags on top of SPLICE_CONFIG.
"""

from dotenv import load_dotenv
from dataclasses import dataclass, field
from typing import Callable, List, Optional, TypeVar
import os

from errors import ConfigError

load_dotenv()

T = TypeVar("T")

APP_CONFIG = {
    "app_name": "splice-stream",
    "version":  "1.0.0",
    "description": "Online semi-supervised label completion for relational streams",
}

DEBUG = os.getenv("DEBUG", "False").lower() == "true"

# Bad environment values fall back to the default and are reported by
# check_environment() once a command runs.
ENV_ERRORS: List[str] = []


def read_env(name: str, default: str, cast: Callable[[str], T] = str) -> T:
    """
    Typed environment value.

    Raises:
        ConfigError: the value does not convert with `cast`
    """
    raw = os.getenv(name, default)
    try:
        return cast(raw)
    except ValueError:
        raise ConfigError(f"{name}={raw!r} is not a valid {getattr(cast, '__name__', 'value')}")


def _env(name: str, default: str, cast: Callable[[str], T] = str) -> T:
    try:
        return read_env(name, default, cast)
    except ConfigError as e:
        ENV_ERRORS.append(str(e))
        return cast(default)


def check_environment():
    """Raise ConfigError listing every environment value that could not be read"""
    if ENV_ERRORS:
        raise ConfigError("; ".join(ENV_ERRORS))


SPLICE_CONFIG = {
    "connector":      _env("SPLICE_CONNECTOR", "knn"),    # knn | enn
    "k":              _env("SPLICE_K", "2", int),
    "epsilon":        _env("SPLICE_EPSILON", "0.75", float),
    "delta":          _env("SPLICE_DELTA", "0.0001", float),
    "workers":        _env("SPLICE_WORKERS", "1", int),
    "regularization": 1e-9,    # jitter added to the L_uu diagonal
    "threshold":      1e-9,    # f_u < threshold → negative
    "similarity_cache_size": 200_000,
}

IO_CONFIG = {
    "encoding":        "utf-8",
    "batch_delimiter": "---",
    "comment_prefix":  "#",
}

GENERATOR_CONFIG = {
    "batches":        20,
    "batch_size":     10,      # frames per micro-batch
    "entities":       2,
    "label_fraction": 0.2,
    "placement":      "whole-batch",   # whole-batch | per-batch
    "noise":          0.0,
    "p_walking":      0.6,
    "p_close":        0.6,
    "frame_step":     40,
    "close_distances": ("24",),     # distance buckets, one drawn per close pair and frame
}

SWEEP_CONFIG = {
    "levels":         (5, 10, 20, 40, 80),
    "placements":     20,
    "k_values":       (1, 2, 3, 4, 5),
    "epsilon_values": (0.55, 0.65, 0.75, 0.85, 0.95),
}

EXIT_CODES = {
    "ok":        0,
    "config":    1,
    "parse":     2,
    "numerical": 3,
}

LOG_CONFIG = {
    "level":        os.getenv("SPLICE_LOG_LEVEL", "INFO"),
    "format":       "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    "dir":          os.getenv("SPLICE_LOG_DIR", "logs"),
    "file":         "splice.log",
    "error_file":   "error.log",
    "max_size":     10 * 1024 * 1024,
    "backup_count": 5,
}


@dataclass
class RunConfig:
    """Settings for one command-line run"""

    input_paths:       List[str] = field(default_factory=list)
    declarations_path: Optional[str] = None
    query_predicate:   Optional[str] = None
    connector:         str = SPLICE_CONFIG["connector"]
    k:                 int = SPLICE_CONFIG["k"]
    epsilon:           float = SPLICE_CONFIG["epsilon"]
    delta:             float = SPLICE_CONFIG["delta"]
    workers:           int = SPLICE_CONFIG["workers"]
    output_path:       Optional[str] = None
    truth_path:        Optional[str] = None
    cache_in:          Optional[str] = None
    cache_out:         Optional[str] = None
    dump_weights_dir:  Optional[str] = None
    dump_harmonic_dir: Optional[str] = None
    seed:              int = 0

    def validate(self) -> "RunConfig":
        """Raise ConfigError when the settings break a run invariant"""
        if self.connector not in ("knn", "enn"):
            raise ConfigError(f"Unknown connector '{self.connector}' (expected knn or enn)")
        if self.connector == "knn" and self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.connector == "enn" and not 0.0 <= self.epsilon <= 1.0:
            raise ConfigError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ConfigError(f"delta must lie in (0, 1), got {self.delta}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        return self

    @property
    def connector_parameter(self) -> float:
        return self.k if self.connector == "knn" else self.epsilon
