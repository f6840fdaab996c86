"""
Configuration loading.

Settings come from a `sparsify.env` file at the repository root (see
`sparsify.env.example`), loaded with python-dotenv. Variables already present
in the environment win over the file. Command-line flags override both.

Environment Variables:
    - PARALLEL_WORKERS: worker threads for per-edge work and bench seeds (default: 4)
    - DEFAULT_SEED: seed used when --seed is omitted (default: 1)
    - DEFAULT_EPSILON: epsilon used when --epsilon is omitted (default: 0.5)
    - DATA_DIR: directory holding the builtin datasets (default: <repo>/data)
    - BENCH_SEEDS: seeds per (scheme, budget) cell in bench (default: 20)
    - BENCH_CHECKPOINT: bench resume file (default: bench_checkpoint.json)
    - KERNEL_TOL: relative eigenvalue cutoff for Laplacian kernels (default: 1e-12)
    - CN_SPARSIFY_ENV: alternative path of the .env file
"""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from lib.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_ENV_FILE = REPO_ROOT / "sparsify.env"


@dataclass(frozen=True)
class Settings:
    parallel_workers: int = 4
    default_seed: int = 1
    default_epsilon: float = 0.5
    data_dir: Path = REPO_ROOT / "data"
    bench_seeds: int = 20
    bench_checkpoint: Path = Path("bench_checkpoint.json")
    kernel_tol: float = 1e-12


def _env_value(key, default, cast):
    raw = os.getenv(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError as e:
        raise ConfigError(f"Invalid value for {key}: '{raw}' ({e})") from e


def _positive_int(raw):
    value = int(raw)
    if value < 1:
        raise ValueError("must be a positive integer")
    return value


def load_settings(env_file=None):
    """Load settings from the .env file and the process environment."""
    env_path = Path(env_file or os.getenv("CN_SPARSIFY_ENV") or DEFAULT_ENV_FILE)
    if env_path.exists():
        load_dotenv(env_path)

    defaults = Settings()
    return Settings(
        parallel_workers=_env_value("PARALLEL_WORKERS", defaults.parallel_workers, _positive_int),
        default_seed=_env_value("DEFAULT_SEED", defaults.default_seed, int),
        default_epsilon=_env_value("DEFAULT_EPSILON", defaults.default_epsilon, float),
        data_dir=_env_value("DATA_DIR", defaults.data_dir, Path),
        bench_seeds=_env_value("BENCH_SEEDS", defaults.bench_seeds, _positive_int),
        bench_checkpoint=_env_value("BENCH_CHECKPOINT", defaults.bench_checkpoint, Path),
        kernel_tol=_env_value("KERNEL_TOL", defaults.kernel_tol, float),
    )
