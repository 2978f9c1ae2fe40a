#!/usr/bin/env python3
"""
Noise models producing per-qubit Z rotation angles.

Every kind accumulates phase linearly in the wait time relative to
config.T_REF_MS (1 ms): rates below are radians per millisecond.

    HOMOGENEOUS    theta on every qubit
    GRADIENT       theta0 + x * delta at ion position x
    QUASI_STATIC   one Gaussian frequency offset per shot (std sigma),
                   shared by all qubits, plus a static gradient
    TWO_TIMESCALE  fast and slow Ornstein-Uhlenbeck frequency noise; the
                   integrated phase is Gaussian with variance
                   2 sigma^2 tau^2 (t / tau - 1 + exp(-t / tau)) per component

Stochastic kinds draw from numpy.random.SeedSequence(seed, spawn_key=(shot,))
so a given (seed, shot) pair gives the same draw in any process and at
every wait time.
"""

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Optional, Sequence

import numpy as np

import config
from exceptions import NoiseModelError

logger = logging.getLogger(__name__)


class NoiseKind(str, Enum):
    HOMOGENEOUS = "homogeneous"
    GRADIENT = "gradient"
    QUASI_STATIC = "quasi_static"
    TWO_TIMESCALE = "two_timescale"


# Parameters each kind reads; everything else stays at its default
KIND_PARAMETERS = {
    NoiseKind.HOMOGENEOUS: ("theta",),
    NoiseKind.GRADIENT: ("theta0", "delta"),
    NoiseKind.QUASI_STATIC: ("sigma", "gradient"),
    NoiseKind.TWO_TIMESCALE: ("sigma_fast", "tau_fast", "sigma_slow", "tau_slow", "gradient"),
}


@dataclass(frozen=True)
class NoiseModel:
    kind: NoiseKind
    theta: float = 0.0
    theta0: float = 0.0
    delta: float = 0.0
    sigma: float = 0.0
    gradient: float = 0.0
    sigma_fast: float = 0.0
    tau_fast: float = 1.0
    sigma_slow: float = 0.0
    tau_slow: float = 1.0
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", NoiseKind(self.kind))
        except ValueError as e:
            raise NoiseModelError(f"Unknown noise kind {self.kind!r}") from e
        for name in ("sigma", "sigma_fast", "sigma_slow"):
            if getattr(self, name) < 0:
                raise NoiseModelError(f"{name} must be non-negative, got {getattr(self, name)}")
        for name in ("tau_fast", "tau_slow"):
            if getattr(self, name) <= 0:
                raise NoiseModelError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def homogeneous(cls, theta: float) -> "NoiseModel":
        return cls(NoiseKind.HOMOGENEOUS, theta=theta)

    @classmethod
    def gradient_field(cls, theta0: float, delta: float) -> "NoiseModel":
        return cls(NoiseKind.GRADIENT, theta0=theta0, delta=delta)

    @classmethod
    def quasi_static(cls, sigma: float, gradient: float = 0.0, seed: int = 0) -> "NoiseModel":
        return cls(NoiseKind.QUASI_STATIC, sigma=sigma, gradient=gradient, seed=seed)

    @classmethod
    def two_timescale(cls, sigma_fast: Optional[float] = None, tau_fast: Optional[float] = None,
                      sigma_slow: Optional[float] = None, tau_slow: Optional[float] = None,
                      gradient: float = 0.0, seed: int = 0) -> "NoiseModel":
        defaults = config.TWO_TIMESCALE_DEFAULTS
        return cls(
            NoiseKind.TWO_TIMESCALE,
            sigma_fast=defaults["sigma_fast"] if sigma_fast is None else sigma_fast,
            tau_fast=defaults["tau_fast"] if tau_fast is None else tau_fast,
            sigma_slow=defaults["sigma_slow"] if sigma_slow is None else sigma_slow,
            tau_slow=defaults["tau_slow"] if tau_slow is None else tau_slow,
            gradient=gradient,
            seed=seed,
        )

    @property
    def is_stochastic(self) -> bool:
        return self.kind in (NoiseKind.QUASI_STATIC, NoiseKind.TWO_TIMESCALE)

    @classmethod
    def from_dict(cls, document: Dict) -> "NoiseModel":
        """
        Build a model from a config document such as
        {"kind": "quasi_static", "sigma": 0.0025, "gradient": 0.00025, "seed": 7}

        Raises:
            NoiseModelError: On a missing/unknown kind or a parameter the kind does not use
        """
        document = dict(document)
        if "kind" not in document:
            raise NoiseModelError("Noise config needs a 'kind'")
        try:
            kind = NoiseKind(document.pop("kind"))
        except ValueError as e:
            raise NoiseModelError(str(e)) from e
        allowed = set(KIND_PARAMETERS[kind]) | {"seed"}
        unknown = set(document) - allowed
        if unknown:
            raise NoiseModelError(f"Parameters {sorted(unknown)} are not used by {kind.value} noise")
        if kind is NoiseKind.TWO_TIMESCALE:
            return cls.two_timescale(**document)
        return cls(kind, **document)

    def to_dict(self) -> dict:
        values = asdict(self)
        document = {"kind": self.kind.value}
        for name in KIND_PARAMETERS[self.kind]:
            document[name] = values[name]
        if self.is_stochastic:
            document["seed"] = self.seed
        return document


@dataclass(frozen=True)
class FieldParams:
    """Magnetic field in Gauss"""

    B: float

    def __post_init__(self):
        if self.B < 0:
            raise NoiseModelError(f"Magnetic field must be non-negative, got {self.B} G")


def zeeman_shift(f: FieldParams) -> float:
    """Second-order Zeeman shift 310.8 * B^2 in Hz"""
    return config.ZEEMAN_COEFFICIENT_HZ * f.B ** 2


def shot_rng(seed: int, shot: int, *stream: int) -> np.random.Generator:
    """Independent generator for one shot (plus optional sub-stream indices)"""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(shot,) + tuple(stream)))


def _ou_phase_std(sigma: float, tau: float, wait: float) -> float:
    """Std-dev of the integrated phase of a stationary OU frequency process"""
    return float(sigma * tau * np.sqrt(max(2.0 * (wait / tau - 1.0 + np.exp(-wait / tau)), 0.0)))


def accumulated_sigma(model: NoiseModel, wait: float) -> float:
    """Std-dev of the common phase after `wait` ms (0 for deterministic kinds)"""
    if wait < 0:
        raise NoiseModelError(f"Wait time must be non-negative, got {wait}")
    if model.kind is NoiseKind.QUASI_STATIC:
        return model.sigma * wait / config.T_REF_MS
    if model.kind is NoiseKind.TWO_TIMESCALE:
        fast = _ou_phase_std(model.sigma_fast, model.tau_fast, wait)
        slow = _ou_phase_std(model.sigma_slow, model.tau_slow, wait)
        return float(np.hypot(fast, slow))
    return 0.0


def sample_angles(model: NoiseModel, positions: Sequence[int], wait: float, shot: int = 0) -> np.ndarray:
    """
    Per-qubit rotation angles for one shot

    Every kind scales with wait / T_REF_MS, HOMOGENEOUS included: theta is a
    rate, so the angle is theta only at wait = T_REF_MS (1 ms).

    Args:
        model: Noise model
        positions: Ion position of every qubit (CodeSpec.positions)
        wait: Wait time in ms
        shot: Shot index selecting the random stream

    Returns:
        Array of angles in radians, one per position

    Raises:
        NoiseModelError: On a negative wait time
    """
    if wait < 0:
        raise NoiseModelError(f"Wait time must be non-negative, got {wait}")
    positions = np.asarray(positions, dtype=float)
    scale = wait / config.T_REF_MS
    if model.kind is NoiseKind.HOMOGENEOUS:
        return np.full(positions.shape, model.theta * scale)
    if model.kind is NoiseKind.GRADIENT:
        return (model.theta0 + positions * model.delta) * scale

    rng = shot_rng(model.seed, shot)
    if model.kind is NoiseKind.QUASI_STATIC:
        common = model.sigma * rng.standard_normal() * scale
    else:
        fast, slow = rng.standard_normal(2)
        common = (fast * _ou_phase_std(model.sigma_fast, model.tau_fast, wait)
                  + slow * _ou_phase_std(model.sigma_slow, model.tau_slow, wait))
    return common + positions * model.gradient * scale
