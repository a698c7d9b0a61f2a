#!/usr/bin/env python3
"""
Shared utilities for siegel_reduce

Input validation, tolerance configuration, seed handling, logging setup,
step-shrinking retries and deterministic report serialization.
"""

import io
import os
import csv
import re
import json
import math
import time
import logging
import dataclasses
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DimensionMismatch, NonFiniteInput, NotInDomain

# Configuration constants
SEED_ENV_VAR = 'SIEGEL_REDUCE_SEED'
LOG_DIR_ENV_VAR = 'SIEGEL_REDUCE_LOG_DIR'
ORACLE_MAX_RETRIES = 3
STEP_SHRINK = 0.1
U64_MASK = (1 << 64) - 1

_SEED_PATTERN = re.compile(r'^(0[xX][0-9a-fA-F]{1,16}|[0-9]{1,20})$')


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold used across the package, overridable per run."""

    interior: float = 1e-12
    identity: float = 1e-9
    fd_gradient: float = 1e-6
    fd_hessian: float = 1e-5
    kahler: float = 1e-4
    admissibility_band: float = 1e-9
    membership_band: float = 1e-9
    newton_gradient: float = 1e-10
    reduction_residual: float = 1e-8
    orbit_agreement: float = 1e-6
    roundtrip: float = 1e-8
    zero_set: float = 1e-8
    span: float = 1e-6
    bracket: float = 1e-8
    orbit: float = 1e-6
    rank_cutoff: float = 1e-9
    subspace: float = 1e-12
    compatibility: float = 1e-10
    slice_bound: float = 1e-9

    def to_dict(self) -> Dict[str, float]:
        return dataclasses.asdict(self)


DEFAULT_TOLERANCES = Tolerances()


def validate_tolerances(overrides: Optional[Dict[str, Any]] = None,
                        base: Tolerances = DEFAULT_TOLERANCES) -> Tolerances:
    """
    Validate tolerance overrides and merge them into a Tolerances value.

    Args:
        overrides: Mapping of tolerance name to value
        base: Tolerances the overrides are applied to

    Returns:
        New Tolerances instance

    Raises:
        ConfigError: If a name is unknown or a value is not a positive finite number

    Example:
        >>> validate_tolerances({'span': 1e-8}).span
        1e-08
    """
    if not overrides:
        return base
    known = {f.name for f in dataclasses.fields(Tolerances)}
    validated = {}
    for name, value in overrides.items():
        if name not in known:
            raise ConfigError(f"Unknown tolerance '{name}'", key=name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"Tolerance '{name}' must be a number", key=name)
        if not math.isfinite(value) or value <= 0:
            raise ConfigError(f"Tolerance '{name}' must be positive and finite", key=name)
        validated[name] = float(value)
    return dataclasses.replace(base, **validated)


def sanitize_error_message(error_msg: str) -> str:
    """Sanitize error messages to prevent information disclosure."""
    sanitized = str(error_msg).replace(str(Path.home()), "~")
    return sanitized[:200] + "..." if len(sanitized) > 200 else sanitized


def as_vector(values: Any, dim: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """
    Convert input to a finite 1-D float array of the expected length.

    Raises:
        DimensionMismatch: If the length differs from `dim` or the input is not 1-D
        NonFiniteInput: If any entry is NaN or infinite
    """
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NonFiniteInput(f"{name} is not numeric") from exc
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionMismatch(f"{name} has length {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def as_matrix(values: Any, shape: Optional[tuple] = None, name: str = "matrix") -> np.ndarray:
    """Convert input to a finite 2-D float array, optionally of a fixed shape."""
    try:
        arr = np.asarray(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NonFiniteInput(f"{name} is not numeric") from exc
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be two-dimensional, got shape {arr.shape}")
    if shape is not None and arr.shape != tuple(shape):
        raise DimensionMismatch(f"{name} has shape {arr.shape}, expected {tuple(shape)}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInput(f"{name} contains NaN or Inf")
    return arr


def parse_seed(value: Any, key: str = "seed") -> int:
    """Parse an unsigned 64-bit seed given as int, decimal string or 0x-hex string."""
    if isinstance(value, bool):
        raise ConfigError("Seed must be an unsigned 64-bit integer", key=key)
    if isinstance(value, int):
        seed = value
    elif isinstance(value, str) and _SEED_PATTERN.match(value.strip()):
        seed = int(value.strip(), 0)
    else:
        raise ConfigError("Seed must be an unsigned 64-bit integer", key=key)
    if seed < 0 or seed > U64_MASK:
        raise ConfigError("Seed out of unsigned 64-bit range", key=key)
    return seed


def resolve_seed(cli_value: Optional[Any] = None, config_value: Optional[Any] = None) -> int:
    """Seed precedence: command line, then config file, then environment, then 0."""
    if cli_value is not None:
        return parse_seed(cli_value, key="--seed")
    if config_value is not None:
        return parse_seed(config_value, key="seed")
    env_value = os.getenv(SEED_ENV_VAR)
    if env_value:
        return parse_seed(env_value, key=SEED_ENV_VAR)
    return 0


def derive_seed(master: int, index: int) -> int:
    """
    Derive a per-instance seed: master XOR index, then one splitmix64 round.

    Example:
        >>> derive_seed(0, 0) == derive_seed(0, 0)
        True
    """
    z = (master ^ index) & U64_MASK
    z = (z + 0x9E3779B97F4A7C15) & U64_MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & U64_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & U64_MASK
    return z ^ (z >> 31)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def create_log_file(base_name: str, logs_dir: Optional[Path] = None) -> Path:
    """Create a timestamped log file with restricted permissions."""
    if logs_dir is None:
        logs_dir = Path(os.getenv(LOG_DIR_ENV_VAR, "logs"))
    logs_dir = Path(logs_dir).resolve()
    logs_dir.mkdir(mode=0o750, parents=True, exist_ok=True)

    timestamp = time.strftime('%Y%m%d_%H%M%S')
    log_file = logs_dir / f"{base_name}_{timestamp}.log"
    log_file.touch(mode=0o640)
    return log_file


def setup_logging(log_file: Path, level: int = logging.INFO) -> logging.Logger:
    """Attach a file handler to the package logger."""
    logger = logging.getLogger("siegel_reduce")
    logger.setLevel(level)

    # Avoid duplicate handlers
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler) and Path(handler.baseFilename) == Path(log_file).resolve():
            return logger

    handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger


class RetryHandler:
    """Retry a step-size dependent computation, shrinking the step on each failure."""

    def __init__(self, max_retries: int = ORACLE_MAX_RETRIES, shrink: float = STEP_SHRINK,
                 retry_on: tuple = (NotInDomain,)):
        self.max_retries = max_retries
        self.shrink = shrink
        self.retry_on = retry_on

    def retry_with_shrink(self, func: Callable[[float], Any], step: float) -> Any:
        """Call func(step); on a retryable error call again with step * shrink."""
        last_exception = None

        for attempt in range(self.max_retries + 1):
            try:
                return func(step * self.shrink ** attempt)
            except self.retry_on as e:
                last_exception = e
                logging.getLogger("siegel_reduce.utils").debug(
                    f"Retry {attempt + 1}/{self.max_retries}: {e}")

        raise last_exception


def format_float(value: float) -> str:
    """17 significant digits, round-trip exact for double precision."""
    value = float(value)
    if math.isnan(value):
        return 'NaN'
    if math.isinf(value):
        return 'Infinity' if value > 0 else '-Infinity'
    return format(value, '.17g')


def _to_plain(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return [_to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    return obj


def dumps_report(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """
    Serialize a report to JSON with every float at 17 significant digits.

    Keys keep insertion order so identical inputs give byte-identical output.
    """
    obj = _to_plain(obj)
    pad = " " * (indent * (_level + 1))
    end_pad = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps_report(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end_pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps_report(v) for v in obj) + "]"
        items = [pad + dumps_report(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end_pad + "]"
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Render CSV with LF line endings; floats at 17 significant digits, booleans as 1/0."""
    def cell(value: Any) -> Any:
        if isinstance(value, (bool, np.bool_)):
            return 1 if value else 0
        if isinstance(value, (float, np.floating)):
            return format_float(value)
        return value

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows([cell(v) for v in row] for row in rows)
    return buffer.getvalue()
