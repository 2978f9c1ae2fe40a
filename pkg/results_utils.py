#!/usr/bin/env python3
"""
Shared result and configuration utilities for the experiment runners.

- ResultWriter: JSON / CSV output to stdout or, atomically, to a file
- load_experiment_config: JSON experiment documents merged over config.py defaults
- parallel_map: process-pool map that falls back to a plain loop for one worker
"""

import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

import config
from exceptions import ConfigError, NoiseModelError
from noise_models import NoiseModel

logger = logging.getLogger(__name__)

EXPERIMENT_KEYS = {
    "code", "noise", "times_ms", "phases_rad", "wait_ms", "shots", "seed", "row_amplitudes",
}
CODE_KEYS = {"variant", "distance", "mapping"}


def _json_default(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def _finite(value):
    """Replace non-finite floats with None (JSON has no inf or nan)"""
    if isinstance(value, dict):
        return {key: _finite(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, np.ndarray):
        return _finite(value.tolist())
    if isinstance(value, (float, np.floating)) and not np.isfinite(value):
        return None
    return value


class ResultWriter:
    """Writes result documents to stdout or atomically to a file"""

    def __init__(self, output: Optional[Union[str, Path]] = None):
        """
        Args:
            output: Target file; None writes to stdout
        """
        self.output = Path(output) if output else None

    def _emit(self, text: str) -> None:
        if self.output is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        target = self.output
        target.parent.mkdir(parents=True, exist_ok=True)
        handle, temp_path = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
        try:
            with os.fdopen(handle, "w", encoding=config.OUTPUT_SETTINGS["encoding"], newline="") as f:
                f.write(text)
            os.replace(temp_path, target)
        except Exception as e:
            logger.error(f"Failed to write {target}: {e}")
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise
        logger.info(f"Wrote {target}")

    def write_json(self, document: Dict) -> None:
        text = json.dumps(
            _finite(document),
            allow_nan=False,
            indent=config.OUTPUT_SETTINGS["json_indent"],
            sort_keys=True,
            default=_json_default,
        )
        self._emit(text + "\n")

    def write_frame(self, frame: pd.DataFrame) -> None:
        self._emit(frame.to_csv(index=False, float_format=config.OUTPUT_SETTINGS["float_format"]))


@dataclass
class ExperimentConfig:
    """Experiment settings after merging a config document over the defaults"""

    variant: str = "fm"
    distance: int = config.DEFAULT_EXPERIMENT["distance"]
    mapping: str = config.DEFAULT_EXPERIMENT["mapping"]
    noise: NoiseModel = field(default_factory=lambda: NoiseModel.from_dict(config.DEFAULT_NOISE))
    times_ms: List[float] = field(default_factory=lambda: list(config.DEFAULT_EXPERIMENT["times_ms"]))
    phases_rad: List[float] = field(default_factory=lambda: default_phases())
    wait_ms: float = config.DEFAULT_EXPERIMENT["wait_ms"]
    shots: int = config.DEFAULT_EXPERIMENT["shots"]
    seed: int = config.DEFAULT_EXPERIMENT["seed"]
    row_amplitudes: Optional[List[float]] = None


def default_phases() -> List[float]:
    """Analysis phases over one full turn"""
    return np.linspace(0.0, 2.0 * np.pi, config.DEFAULT_EXPERIMENT["phase_points"]).tolist()


def parse_experiment_config(document: Dict) -> ExperimentConfig:
    """
    Validate a config document and merge it over the defaults

    Raises:
        ConfigError: On unknown keys or invalid values
    """
    if not isinstance(document, dict):
        raise ConfigError("Experiment config must be a JSON object")
    unknown = set(document) - EXPERIMENT_KEYS
    if unknown:
        raise ConfigError(f"Unknown config keys: {sorted(unknown)}")
    code = document.get("code", {})
    unknown = set(code) - CODE_KEYS
    if unknown:
        raise ConfigError(f"Unknown code keys: {sorted(unknown)}")

    settings = ExperimentConfig()
    settings.variant = code.get("variant", settings.variant)
    settings.distance = int(code.get("distance", settings.distance))
    settings.mapping = code.get("mapping", settings.mapping)
    settings.seed = int(document.get("seed", settings.seed))
    if "noise" in document:
        noise = dict(document["noise"])
        noise.setdefault("seed", settings.seed)
        try:
            settings.noise = NoiseModel.from_dict(noise)
        except NoiseModelError as e:
            raise ConfigError(f"Invalid noise config: {e}") from e
    for key in ("times_ms", "phases_rad"):
        if key in document:
            setattr(settings, key, [float(v) for v in document[key]])
    settings.wait_ms = float(document.get("wait_ms", settings.wait_ms))
    settings.shots = int(document.get("shots", settings.shots))
    if "row_amplitudes" in document:
        settings.row_amplitudes = [float(a) for a in document["row_amplitudes"]]

    if settings.shots < 1:
        raise ConfigError(f"shots must be at least 1, got {settings.shots}")
    if settings.wait_ms < 0 or any(t < 0 for t in settings.times_ms):
        raise ConfigError("Wait times must be non-negative")
    return settings


def load_experiment_config(path: Optional[Union[str, Path]]) -> ExperimentConfig:
    """
    Load an experiment config file (defaults only when path is None)

    Raises:
        ConfigError: If the file is missing, not JSON, or invalid
    """
    if path is None:
        return ExperimentConfig()
    try:
        with open(path, encoding=config.OUTPUT_SETTINGS["encoding"]) as f:
            document = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read experiment config {path}: {e}") from e
    logger.debug(f"Loaded experiment config from {path}")
    return parse_experiment_config(document)


def parallel_map(func: Callable, items: Iterable, workers: Optional[int] = None) -> list:
    """
    Map `func` over `items`, in a process pool when workers > 1

    `func` must be picklable (a module-level function or functools.partial).
    Results keep input order.
    """
    items = list(items)
    if workers is None:
        workers = config.RUNTIME["workers"]
    if workers > 1 and len(items) > 1:
        logger.debug(f"Mapping {len(items)} items over {workers} workers")
        with Pool(min(workers, len(items))) as pool:
            return pool.map(func, items)
    return [func(item) for item in items]
