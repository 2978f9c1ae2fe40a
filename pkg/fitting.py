#!/usr/bin/env python3
"""
Curve fitters for Ramsey data.

- fit_exp_decay: A exp(-Gamma t), t in ms, Gamma >= 0 (T2* = 1 / Gamma)
- fit_cosine:    A cos(k phi + phi0), solved linearly on cos(k phi), sin(k phi)
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.optimize import least_squares

import config
from analytic_channels import wrap_angle
from exceptions import FitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FitResult:
    model: str
    params: Dict[str, float] = field(default_factory=dict)
    residual_rms: float = 0.0
    converged: bool = True

    @property
    def t2_star(self) -> float:
        """1 / Gamma in ms (infinite for a flat curve)"""
        gamma = self.params.get("gamma")
        if gamma is None:
            raise FitError(f"{self.model} fit has no decay rate")
        return float("inf") if gamma <= 0 else 1.0 / gamma

    def to_dict(self) -> dict:
        document = {
            "model": self.model,
            "params": dict(self.params),
            "residual_rms": self.residual_rms,
            "converged": self.converged,
        }
        if "gamma" in self.params:
            t2 = self.t2_star
            document["t2_star_ms"] = t2 if np.isfinite(t2) else None
        return document


def _prepare(x: Sequence[float], y: Sequence[float], stderr: Optional[Sequence[float]],
             minimum: int):
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape:
        raise FitError(f"Got {x.shape[0]} abscissae and {y.shape[0]} values")
    if x.shape[0] < minimum:
        raise FitError(f"Need at least {minimum} points, got {x.shape[0]}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise FitError("Data contains non-finite values")
    if stderr is None:
        return x, y, np.ones_like(y)
    stderr = np.asarray(stderr, dtype=float).reshape(-1)
    if stderr.shape != y.shape or np.any(stderr <= 0):
        raise FitError("Standard errors must be positive, one per point")
    return x, y, 1.0 / stderr


def _initial_decay(t: np.ndarray, y: np.ndarray):
    positive = y > 0
    if np.count_nonzero(positive) >= 2 and np.ptp(t[positive]) > 0:
        slope, intercept = np.polyfit(t[positive], np.log(y[positive]), 1)
        return float(np.exp(intercept)), max(float(-slope), 0.0)
    return float(y[positive].max()), 0.0


def fit_exp_decay(times: Sequence[float], values: Sequence[float],
                  stderr: Optional[Sequence[float]] = None) -> FitResult:
    """
    Fit A exp(-Gamma t)

    Args:
        times: Wait times in ms
        values: Contrast or parity values
        stderr: Optional per-point standard errors used as weights

    Returns:
        FitResult with params A and gamma (1/ms)

    Raises:
        FitError: Fewer than 3 points, all values non-positive, values
            outside [-1.05, 1.05], or no convergence within the iteration cap
    """
    t, y, weights = _prepare(times, values, stderr, minimum=3)
    bound = config.FIT_SETTINGS["value_bound"]
    if np.any(np.abs(y) > bound):
        raise FitError(f"Values must lie in [-{bound}, {bound}] for a contrast or parity decay")
    if not np.any(y > 0):
        raise FitError("All values are non-positive; an exponential decay cannot fit them")

    amplitude0, gamma0 = _initial_decay(t, y)

    def residuals(p):
        return weights * (p[0] * np.exp(-p[1] * t) - y)

    def jacobian(p):
        decay = np.exp(-p[1] * t)
        return np.column_stack((weights * decay, -weights * p[0] * t * decay))

    result = least_squares(
        residuals,
        x0=[amplitude0, gamma0],
        jac=jacobian,
        bounds=([-np.inf, 0.0], [np.inf, np.inf]),
        xtol=config.FIT_SETTINGS["step_tolerance"],
        max_nfev=config.FIT_SETTINGS["max_iterations"],
    )
    if result.status == 0:
        raise FitError(f"Exponential fit did not converge in {config.FIT_SETTINGS['max_iterations']} evaluations")

    amplitude, gamma = (float(v) for v in result.x)
    rms = float(np.sqrt(np.mean((amplitude * np.exp(-gamma * t) - y) ** 2)))
    logger.debug(f"Exponential fit: A={amplitude:.6g}, gamma={gamma:.6g}/ms after {result.nfev} evaluations")
    return FitResult("exp", {"A": amplitude, "gamma": gamma}, rms, bool(result.success))


def fit_cosine(phases: Sequence[float], values: Sequence[float], k: Optional[int] = None,
               stderr: Optional[Sequence[float]] = None) -> FitResult:
    """
    Fit A cos(k phi + phi0) with A >= 0 and phi0 in (-pi, pi]

    Raises:
        FitError: Fewer than 4 points or a phase grid on which cos(k phi)
            and sin(k phi) are linearly dependent
    """
    if k is None:
        k = config.FIT_SETTINGS["harmonic"]
    phi, y, weights = _prepare(phases, values, stderr, minimum=4)
    if np.ptp(phi) < 2.0 * np.pi / k:
        logger.warning(f"Phase grid spans {np.ptp(phi):.3g} rad, less than one period of cos({k} phi)")

    design = np.column_stack((np.cos(k * phi), np.sin(k * phi)))
    (a, b), _, rank, _ = np.linalg.lstsq(design * weights[:, None], y * weights, rcond=None)
    if rank < 2:
        raise FitError(f"Phase grid is degenerate for cos({k} phi) (rank {rank})")

    amplitude = float(np.hypot(a, b))
    offset = wrap_angle(float(np.arctan2(-b, a))) if amplitude > config.TOLERANCES["branch_drop"] else 0.0
    rms = float(np.sqrt(np.mean((amplitude * np.cos(k * phi + offset) - y) ** 2)))
    return FitResult("cos", {"A": amplitude, "phi0": offset, "k": float(k)}, rms, True)
