#!/usr/bin/env python3
"""
Exact state-vector oracle for one round of coherent dephasing.

Pipeline per call: rotate both logical codewords by the per-qubit angles,
project onto every syndrome subspace, apply the min-weight correction and
read off the logical action alpha_s I_L + beta_s Z_L of each branch. The
result is the ground truth the closed forms in analytic_channels are
checked against.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

import config
from analytic_channels import ChannelTerm, LogicalChannel, rotation_angle
from codes import CodeSpec, Syndrome, decode_min_weight, project_branches
from exceptions import (
    ChannelNormalizationError,
    CodeConstructionError,
    CodespaceLeakError,
    QubitCountError,
)
from quantum_core import SignedPauli, StateVector, apply_pauli, apply_z_rotations, expectation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyndromeBranch:
    """Logical action alpha I_L + beta Z_L of one syndrome outcome"""

    syndrome: Syndrome
    probability: float
    alpha: complex
    beta: complex
    logical_angle: float

    def to_dict(self) -> dict:
        return {
            "syndrome": self.syndrome.label(),
            "bits": list(self.syndrome.bits),
            "probability": self.probability,
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
            "logical_angle": self.logical_angle,
        }


def _check_angles(code: CodeSpec, angles: Sequence[float]) -> np.ndarray:
    angles = np.asarray(angles, dtype=float).reshape(-1)
    if angles.shape[0] != code.n_qubits:
        raise QubitCountError(
            f"{code.name} has {code.n_qubits} qubits but {angles.shape[0]} angles were given"
        )
    return angles


def _logical_action(code: CodeSpec, syndrome: Syndrome, phi0: StateVector,
                    phi1: StateVector) -> Tuple[complex, complex]:
    """
    Solve phi0 = a|0_L> + b|1_L>, phi1 = a|1_L> + b|0_L> for (a, b)

    Raises:
        CodespaceLeakError: If the corrected states leave the codespace or
            the two codewords see different logical actions
    """
    zero, one = code.codeword_zero, code.codeword_one
    a0, b0 = zero.inner(phi0), one.inner(phi0)
    a1, b1 = one.inner(phi1), zero.inner(phi1)
    residual = max(
        (phi0 - zero.scaled(a0) - one.scaled(b0)).norm(),
        (phi1 - one.scaled(a1) - zero.scaled(b1)).norm(),
    )
    mismatch = max(abs(a0 - a1), abs(b0 - b1))
    tolerance = config.TOLERANCES["codespace_residual"]
    if residual > tolerance or mismatch > tolerance:
        raise CodespaceLeakError(
            f"{code.name}, syndrome {syndrome.label()}: corrected state leaves the codespace "
            f"(residual {residual:.3g}, codeword mismatch {mismatch:.3g})"
        )
    return a0, b0


def _fix_gauge(alpha: complex, beta: complex) -> Tuple[complex, complex]:
    """Global phase with alpha real and positive (i * beta real and positive if alpha = 0)"""
    if abs(alpha) > config.TOLERANCES["state_norm"]:
        phase = np.conj(alpha) / abs(alpha)
    elif abs(beta) > 0.0:
        phase = np.conj(1j * beta) / abs(beta)
    else:
        return alpha, beta
    return complex(alpha * phase), complex(beta * phase)


def simulate_round(code: CodeSpec, angles: Sequence[float], fix_gauge: bool = True) -> List[SyndromeBranch]:
    """
    Exhaustive single-round simulation

    Args:
        code: Code to simulate
        angles: Per-qubit Z rotation angles (radians)
        fix_gauge: Report (alpha, beta) with alpha real-positive; False keeps
            the raw amplitudes of the corrected |0_L> branch

    Returns:
        One SyndromeBranch per syndrome with probability above the drop threshold

    Raises:
        QubitCountError: On an angle count mismatch
        CodespaceLeakError: If a correction leaves the codespace
    """
    angles = _check_angles(code, angles)
    rotated = [apply_z_rotations(code.codeword_zero, angles), apply_z_rotations(code.codeword_one, angles)]
    drop = config.TOLERANCES["branch_drop"]
    branches = []
    for syndrome, (proj0, proj1) in project_branches(rotated, code):
        correction = decode_min_weight(code, syndrome)
        alpha, beta = _logical_action(
            code, syndrome, apply_pauli(proj0, correction), apply_pauli(proj1, correction)
        )
        probability = abs(alpha) ** 2 + abs(beta) ** 2
        if probability < drop:
            continue
        if fix_gauge:
            alpha, beta = _fix_gauge(alpha, beta)
        branch = SyndromeBranch(syndrome, float(probability), alpha, beta, rotation_angle(alpha, beta))
        logger.debug(
            f"{code.name} syndrome {syndrome.label()}: P={branch.probability:.6g} "
            f"theta={branch.logical_angle:.6g} correction {correction}"
        )
        branches.append(branch)
    return branches


def channel_from_branches(branches: Sequence[SyndromeBranch]) -> LogicalChannel:
    """
    Merge branches into the canonical mixture of logical rotations

    Raises:
        ChannelNormalizationError: If branch probabilities do not sum to 1
    """
    total = sum(b.probability for b in branches)
    if abs(total - 1.0) > config.TOLERANCES["branch_sum"]:
        raise ChannelNormalizationError(f"Branch probabilities sum to {total}, not 1")
    terms = tuple(ChannelTerm(b.probability, b.logical_angle) for b in branches)
    return LogicalChannel(terms, {"constructor": "oracle", "branches": len(branches)}).canonical()


def simulate_channel(code: CodeSpec, angles: Sequence[float]) -> LogicalChannel:
    """Oracle logical channel for one set of per-qubit angles"""
    channel = channel_from_branches(simulate_round(code, angles))
    channel.metadata["code"] = code.name
    return channel


def _trivial_branch(code: CodeSpec, branches: Sequence[SyndromeBranch]) -> SyndromeBranch:
    for branch in branches:
        if branch.syndrome.is_trivial:
            return branch
    raise ChannelNormalizationError(f"{code.name}: trivial syndrome has zero probability")


def simulate_round_detected(code: CodeSpec, angles: Sequence[float]) -> Tuple[float, LogicalChannel]:
    """
    Post-selected round: keep only runs with every stabilizer satisfied

    Returns:
        (accept probability, logical channel conditioned on the trivial syndrome)

    Raises:
        ChannelNormalizationError: If the trivial syndrome never occurs
    """
    branch = _trivial_branch(code, simulate_round(code, angles))
    channel = LogicalChannel(
        (ChannelTerm(1.0, branch.logical_angle),),
        {"constructor": "oracle_detected", "code": code.name},
    )
    return branch.probability, channel


def total_parity(code: CodeSpec) -> SignedPauli:
    """
    X on every data qubit, the read-out used for uncorrected parity

    Raises:
        CodeConstructionError: If X^N is not a logical X of the code
    """
    parity = SignedPauli("X" * code.n_qubits)
    if parity.commutes_with(code.logical_z) or not all(parity.commutes_with(g) for g in code.generators):
        raise CodeConstructionError(f"Total X parity of {code.name} is not a logical X operator")
    return parity


def logical_readouts(code: CodeSpec, angles: Sequence[float]) -> Tuple[float, float, float, float]:
    """
    Exact logical-X read-outs after one noise draw, starting from |0_L>

    Returns:
        (raw, corrected, detected, accept):
            raw        total X parity of the uncorrected state
            corrected  sum_s |alpha_s|^2 - |beta_s|^2 after min-weight correction
            detected   same quantity for the trivial syndrome, renormalized
            accept     probability of the trivial syndrome
    """
    angles = _check_angles(code, angles)
    parity = total_parity(code)
    raw = expectation(apply_z_rotations(code.codeword_zero, angles), parity)
    branches = simulate_round(code, angles)
    corrected = sum(abs(b.alpha) ** 2 - abs(b.beta) ** 2 for b in branches)
    trivial = _trivial_branch(code, branches)
    detected = (abs(trivial.alpha) ** 2 - abs(trivial.beta) ** 2) / trivial.probability
    return float(raw), float(corrected), float(detected), float(trivial.probability)
