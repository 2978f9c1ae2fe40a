#!/usr/bin/env python3
"""
Ramsey-type experiment protocols on top of the exact simulators.

    ghz_ramsey          fringe contrast of an n-qubit GHZ state vs wait time
    logical_ramsey      raw / corrected / detected logical parity vs wait time
    ghz_fringe          per-row parity vs analysis phase after a fixed wait
    single_round_sweep  logical infidelity of the Shor variants vs theta

Shots are evaluated with exact per-shot expectations: noise angles are
sampled, expectations are computed from the state vector. `sample=True`
adds one projective +-1 read-out per shot on top.
"""

import logging
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

import config
from analytic_channels import (
    afm_shor_channel,
    channel_distance,
    channel_infidelity,
    fm_shor_channel,
    swapped_basis_channel,
)
from codes import CodeSpec, ShorVariant, build_shor_code
from exceptions import CodeConstructionError, NoiseModelError, QubitCountError
from fitting import fit_cosine
from noise_models import NoiseModel, sample_angles, shot_rng
from oracle_sim import logical_readouts, simulate_channel
from quantum_core import SignedPauli, apply_z_rotations, expectation, ghz_coherence, make_ghz
from results_utils import parallel_map

logger = logging.getLogger(__name__)

GHZ_PATTERNS = {"fm": lambda n: "0" * n, "afm": lambda n: "".join(str(i % 2) for i in range(n))}


@dataclass(frozen=True, eq=False)
class RamseyCurve:
    """One measured series; `times` holds phases for fringe curves"""

    times: np.ndarray
    values: np.ndarray
    shots: int
    stderr: np.ndarray
    label: str = ""
    accept: Optional[np.ndarray] = None

    def __post_init__(self):
        arrays = {"times": self.times, "values": self.values, "stderr": self.stderr}
        if self.accept is not None:
            arrays["accept"] = self.accept
        for name, values in arrays.items():
            object.__setattr__(self, name, np.asarray(values, dtype=float).reshape(-1))
        lengths = {getattr(self, name).shape[0] for name in arrays}
        if len(lengths) != 1:
            raise QubitCountError(f"Curve {self.label!r} has arrays of different lengths")
        if np.any(np.abs(self.values) > 1.0 + 1e-9):
            raise NoiseModelError(f"Curve {self.label!r} has values outside [-1, 1]")


def _resolve_pattern(n: int, pattern: str) -> str:
    if pattern in GHZ_PATTERNS:
        return GHZ_PATTERNS[pattern](n)
    if len(pattern) != n or set(pattern) - {"0", "1"}:
        raise QubitCountError(f"GHZ pattern {pattern!r} does not describe {n} qubits")
    return pattern


def _stderr(samples: np.ndarray) -> float:
    if samples.shape[0] < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / np.sqrt(samples.shape[0]))


def _ghz_point(wait: float, n: int, pattern: str, positions: np.ndarray,
               model: NoiseModel, shots: int) -> Tuple[float, float]:
    ghz = make_ghz(n, pattern)
    coherences = np.array([
        ghz_coherence(apply_z_rotations(ghz, sample_angles(model, positions, wait, shot)), pattern)
        for shot in range(shots)
    ])
    mean = coherences.mean()
    contrast = abs(mean)
    aligned = (coherences * (np.conj(mean) / contrast)).real if contrast > 0 else coherences.real
    return min(float(contrast), 1.0), _stderr(aligned)


def ghz_ramsey(n: int, pattern: str, model: NoiseModel, times: Sequence[float], shots: int,
               positions: Optional[Sequence[int]] = None, workers: Optional[int] = None) -> RamseyCurve:
    """
    GHZ fringe contrast |E[exp(i dphi)]| vs wait time

    Args:
        n: Number of qubits
        pattern: "fm", "afm" or an explicit bit string such as "0101"
        model: Noise model
        times: Wait times in ms
        shots: Noise draws per time point
        positions: Ion positions (defaults to a centered chain)
        workers: Process count for the time points

    Returns:
        RamseyCurve labeled "ghz-<pattern>"
    """
    if shots < 1:
        raise NoiseModelError(f"shots must be at least 1, got {shots}")
    bits = _resolve_pattern(n, pattern)
    positions = np.arange(n) - n // 2 if positions is None else np.asarray(positions)
    if positions.shape[0] != n:
        raise QubitCountError(f"{positions.shape[0]} positions for {n} qubits")
    logger.info(f"GHZ Ramsey: n={n}, pattern {bits}, {len(times)} times x {shots} shots")
    worker = partial(_ghz_point, n=n, pattern=bits, positions=positions, model=model, shots=shots)
    points = parallel_map(worker, [float(t) for t in times], workers)
    return RamseyCurve(
        times=times,
        values=[p[0] for p in points],
        shots=shots,
        stderr=[p[1] for p in points],
        label=f"ghz-{pattern}-{n}",
    )


def _binary_readout(value: float, rng: np.random.Generator) -> float:
    return 1.0 if rng.random() < (1.0 + value) / 2.0 else -1.0


def _logical_point(indexed_wait: Tuple[int, float], code: CodeSpec, model: NoiseModel,
                   shots: int, sample: bool) -> np.ndarray:
    """(raw, corrected, detected, accept) per shot at one wait time"""
    index, wait = indexed_wait
    rows = []
    for shot in range(shots):
        raw, corrected, detected, accept = logical_readouts(
            code, sample_angles(model, code.positions, wait, shot)
        )
        if sample:
            rng = shot_rng(model.seed, shot, index, 1)
            raw = _binary_readout(raw, rng)
            corrected = _binary_readout(corrected, rng)
            accepted = rng.random() < accept
            detected = _binary_readout(detected, rng)
            accept = 1.0 if accepted else 0.0
        rows.append((raw, corrected, detected, accept))
    return np.array(rows)


def logical_ramsey(code: CodeSpec, model: NoiseModel, times: Sequence[float], shots: int,
                   sample: bool = False, workers: Optional[int] = None) -> Tuple[RamseyCurve, RamseyCurve, RamseyCurve]:
    """
    Logical Ramsey decay in three post-processing tiers

    Returns:
        (raw, corrected, detected) curves; detected values are averaged over
        accepted runs and carry the accept fraction per time point
    """
    if shots < 1:
        raise NoiseModelError(f"shots must be at least 1, got {shots}")
    logger.info(f"Logical Ramsey on {code.name}: {len(times)} times x {shots} shots")
    worker = partial(_logical_point, code=code, model=model, shots=shots, sample=sample)
    per_time = parallel_map(worker, list(enumerate(float(t) for t in times)), workers)

    raw, corrected, detected = [], [], []
    accept_fraction = []
    for samples in per_time:
        raw.append((samples[:, 0].mean(), _stderr(samples[:, 0])))
        corrected.append((samples[:, 1].mean(), _stderr(samples[:, 1])))
        weights = samples[:, 3]
        accepted = weights.sum()
        if accepted > 0:
            mean = float(np.average(samples[:, 2], weights=weights))
            spread = float(np.sqrt(np.average((samples[:, 2] - mean) ** 2, weights=weights)))
            detected.append((mean, spread / np.sqrt(max(accepted, 1.0))))
        else:
            logger.warning(f"{code.name}: no accepted runs at one time point; detected value set to 0")
            detected.append((0.0, 0.0))
        accept_fraction.append(float(weights.mean()))

    def curve(points, label, accept=None):
        return RamseyCurve(times, [p[0] for p in points], shots, [p[1] for p in points], label, accept)

    return (
        curve(raw, f"{code.variant}-raw"),
        curve(corrected, f"{code.variant}-corrected"),
        curve(detected, f"{code.variant}-detected", accept_fraction),
    )


def _row_parity(n: int) -> SignedPauli:
    return SignedPauli("X" * n)


def ghz_fringe(code: CodeSpec, model: NoiseModel, wait: float, phases: Sequence[float], shots: int,
               row_amplitudes: Optional[Sequence[float]] = None, sample: bool = False) -> List[RamseyCurve]:
    """
    Per-row parity vs analysis phase after a fixed wait

    Each qubit receives the analysis rotation phi * (-1)^bit of its row
    pattern, so row r reads A_r cos(n phi + phi_r) with phi_r the phase the
    row accumulated during the wait.

    Raises:
        CodeConstructionError: If the code has no GHZ rows
    """
    if not code.has_ghz_rows:
        raise CodeConstructionError(f"{code.name} has no GHZ rows to read out")
    if shots < 1:
        raise NoiseModelError(f"shots must be at least 1, got {shots}")
    n_rows = len(code.rows)
    amplitudes = np.ones(n_rows) if row_amplitudes is None else np.asarray(row_amplitudes, dtype=float)
    if amplitudes.shape[0] != n_rows or np.any(np.abs(amplitudes) > 1.0):
        raise QubitCountError(f"Need {n_rows} row amplitudes within [-1, 1]")
    phases = np.asarray(phases, dtype=float)

    values = np.zeros((n_rows, shots, phases.shape[0]))
    for shot in range(shots):
        angles = sample_angles(model, code.positions, wait, shot)
        for r, (row, pattern) in enumerate(zip(code.rows, code.row_patterns)):
            ghz = make_ghz(len(row), pattern)
            parity = _row_parity(len(row))
            signs = np.array([1.0 if bit == "0" else -1.0 for bit in pattern])
            for i, phi in enumerate(phases):
                rotated = apply_z_rotations(ghz, angles[list(row)] + phi * signs)
                value = amplitudes[r] * expectation(rotated, parity)
                if sample:
                    value = _binary_readout(value, shot_rng(model.seed, shot, r, i, 2))
                values[r, shot, i] = value

    curves = []
    for r in range(n_rows):
        stderr = [_stderr(values[r, :, i]) for i in range(phases.shape[0])]
        curves.append(RamseyCurve(phases, values[r].mean(axis=0), shots, stderr, f"row{r}"))
    return curves


def gradient_fringe_offsets(code: CodeSpec, theta0: float, delta: float,
                            phases: Optional[Sequence[float]] = None) -> List[float]:
    """
    Fitted fringe phase offsets of every row under a pure field gradient

    Simulates ghz_fringe with theta_x = theta0 + x * delta over one
    reference wait and fits A cos(n phi + phi0) to each row.
    """
    if phases is None:
        phases = np.linspace(0.0, 2.0 * np.pi, config.DEFAULT_EXPERIMENT["phase_points"])
    model = NoiseModel.gradient_field(theta0, delta)
    curves = ghz_fringe(code, model, config.T_REF_MS, phases, shots=1)
    return [fit_cosine(c.times, c.values, k=len(code.rows[0])).params["phi0"] for c in curves]


ANALYTIC_CHANNELS = {
    ShorVariant.FM: fm_shor_channel,
    ShorVariant.AFM: afm_shor_channel,
    ShorVariant.SWAPPED_PLUS: partial(swapped_basis_channel, alternating=False),
    ShorVariant.SWAPPED_MINUS: partial(swapped_basis_channel, alternating=True),
}


def _oracle_deviation(theta: float, variants: Sequence[ShorVariant], distance: int) -> float:
    deviation = 0.0
    for variant in variants:
        code = build_shor_code(distance, variant)
        oracle = simulate_channel(code, np.full(code.n_qubits, theta))
        deviation = max(deviation, channel_distance(oracle, ANALYTIC_CHANNELS[variant](distance, theta)))
    return deviation


def single_round_sweep(variants: Sequence[Union[str, ShorVariant]], thetas: Sequence[float],
                       distance: int = 3, oracle_every: int = 10,
                       workers: Optional[int] = None) -> pd.DataFrame:
    """
    Logical infidelity after one round for each variant and theta

    Args:
        variants: Shor variants (values or ShorVariant)
        thetas: Homogeneous rotation angles in radians
        distance: Code distance
        oracle_every: Cross-check every k-th theta (and the last) against the
            exact oracle; 0 disables the cross-check
        workers: Process count for the oracle cross-checks

    Returns:
        DataFrame with columns theta, one per variant, and oracle_deviation
        (NaN where no cross-check ran)

    Raises:
        ChannelDomainError: For angles outside the decoder-optimal domain
    """
    variants = [ShorVariant(v) for v in variants]
    thetas = [float(t) for t in thetas]
    table = pd.DataFrame({"theta": thetas})
    for variant in variants:
        table[variant.value] = [channel_infidelity(ANALYTIC_CHANNELS[variant](distance, t)) for t in thetas]

    table["oracle_deviation"] = np.nan
    if oracle_every > 0 and thetas:
        checked = sorted(set(range(0, len(thetas), oracle_every)) | {len(thetas) - 1})
        worker = partial(_oracle_deviation, variants=variants, distance=distance)
        deviations = parallel_map(worker, [thetas[i] for i in checked], workers)
        table.loc[checked, "oracle_deviation"] = deviations
        worst = max(deviations)
        if worst > config.TOLERANCES["oracle_equivalence"]:
            logger.warning(f"Oracle deviates from the closed forms by {worst:.3g}")
        else:
            logger.info(f"Oracle agrees with the closed forms at {len(checked)} angles (max {worst:.3g})")
    return table


def curves_to_frame(curves: Sequence[RamseyCurve], x_name: str = "time_ms") -> pd.DataFrame:
    """Long-format table: x, value, stderr, series, shots (and accept when recorded)"""
    frames = []
    for c in curves:
        frame = pd.DataFrame({
            x_name: c.times,
            "value": c.values,
            "stderr": c.stderr,
            "series": c.label,
            "shots": c.shots,
        })
        if c.accept is not None:
            frame["accept"] = c.accept
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)
