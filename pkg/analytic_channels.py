#!/usr/bin/env python3
"""
Closed-form logical channels under coherent Z rotations.

After a round of Z(theta) errors, one stabilizer measurement and
min-weight correction, every code here acts on the encoded qubit as

    N_L(rho) = sum_s P_s Zbar(theta_s) rho Zbar(theta_s)^dagger,

a finite mixture of logical Z rotations. LogicalChannel stores the
(P_s, theta_s) terms; the constructors below evaluate them from the
binomial building blocks p_nw / theta_nw without touching a state vector.

channel_infidelity reports sum_s P_s sin^2(theta_s / 2), the probability
of a logical flip seen by a logical-X read-out.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

import config
from codes import CodeSpec
from exceptions import ChannelDomainError, ChannelNormalizationError, CodeConstructionError

logger = logging.getLogger(__name__)


class ChannelTerm(NamedTuple):
    probability: float
    angle: float


def wrap_angle(theta: float) -> float:
    """Map a rotation angle into (-pi, pi]"""
    return float(-((-theta + np.pi) % (2.0 * np.pi) - np.pi))


@dataclass(frozen=True)
class LogicalChannel:
    """Mixture of logical Z rotations {(P_s, theta_s)}"""

    terms: Tuple[ChannelTerm, ...]
    metadata: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        terms = tuple(ChannelTerm(float(p), float(a)) for p, a in self.terms)
        total = sum(t.probability for t in terms)
        if not terms or abs(total - 1.0) > config.TOLERANCES["branch_sum"]:
            raise ChannelNormalizationError(f"Channel probabilities sum to {total}, not 1")
        object.__setattr__(self, "terms", terms)

    @property
    def total_probability(self) -> float:
        return sum(t.probability for t in self.terms)

    def canonical(self, merge: Optional[float] = None) -> "LogicalChannel":
        """
        Wrap angles into (-pi, pi], drop negligible terms, sort by angle and
        merge terms whose angles agree within `merge` (the angle-merge
        tolerance by default).
        """
        drop = config.TOLERANCES["branch_drop"]
        if merge is None:
            merge = config.TOLERANCES["angle_merge"]
        ordered = sorted(
            (ChannelTerm(t.probability, wrap_angle(t.angle)) for t in self.terms if t.probability > drop),
            key=lambda t: t.angle,
        )
        merged: List[ChannelTerm] = []
        for term in ordered:
            if merged and abs(term.angle - merged[-1].angle) <= merge:
                last = merged[-1]
                weight = last.probability + term.probability
                angle = (last.angle * last.probability + term.angle * term.probability) / weight
                merged[-1] = ChannelTerm(weight, angle)
            else:
                merged.append(term)
        return LogicalChannel(tuple(merged), dict(self.metadata))

    def to_dict(self) -> dict:
        return {
            "metadata": dict(self.metadata),
            "terms": [{"p": t.probability, "theta": t.angle} for t in self.terms],
            "infidelity": channel_infidelity(self),
        }


def identity_channel(**metadata) -> LogicalChannel:
    return LogicalChannel((ChannelTerm(1.0, 0.0),), metadata)


def _check_odd(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise ChannelDomainError(f"Distance must be a positive odd integer, got {n}")


def _check_angle(theta: float, label: str = "theta") -> None:
    if not np.isfinite(theta) or abs(theta) >= np.pi:
        raise ChannelDomainError(
            f"|{label}| = {abs(theta):.6g} must be below pi for min-weight decoding to apply"
        )


def _check_weight(n: int, w: int) -> None:
    if not 0 <= w <= (n - 1) // 2:
        raise ChannelDomainError(f"Weight {w} outside 0..{(n - 1) // 2} for n={n}")


def p_nw(n: int, w: int, theta: float) -> float:
    """
    Probability of the syndromes whose correctable error has weight w

    P_{n,w} = C(n, w) [(c^{n-w} s^w)^2 + (c^w s^{n-w})^2], c = cos(theta/2), s = sin(theta/2)
    """
    _check_odd(n)
    _check_weight(n, w)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return float(comb(n, w, exact=True) * ((c ** (n - w) * s ** w) ** 2 + (c ** w * s ** (n - w)) ** 2))


def theta_nw(n: int, w: int, theta: float) -> float:
    """
    Logical rotation angle for syndromes with correctable weight w

    theta_{n,w} = (-1)^{(n-2w-1)/2} * 2 * arctan(tan^{n-2w}(theta/2))

    Raises:
        ChannelDomainError: For |theta| >= pi (tangent pole) or bad n, w
    """
    _check_odd(n)
    _check_weight(n, w)
    _check_angle(theta)
    exponent = n - 2 * w
    sign = -1.0 if ((exponent - 1) // 2) % 2 else 1.0
    return float(sign * 2.0 * np.arctan(np.tan(theta / 2.0) ** exponent))


def repetition_channel(n: int, theta: float) -> LogicalChannel:
    """Logical channel of the rotated n-bit repetition code, (n+1)/2 weight classes"""
    _check_odd(n)
    _check_angle(theta)
    terms = tuple(ChannelTerm(p_nw(n, w, theta), theta_nw(n, w, theta)) for w in range((n + 1) // 2))
    return LogicalChannel(terms, {"constructor": "repetition", "n": n, "theta": theta}).canonical()


def fm_shor_channel(n: int, theta: float) -> LogicalChannel:
    """
    Ferromagnetic Shor code under homogeneous Z(theta)

    Each FM row turns n rotations into one rotation by n*theta, so the outer
    repetition code sees theta -> n*theta: terms (P_{n,w}(n theta),
    theta_{n,w}(n theta)). The exact oracle confirms this form; the variant
    n * theta_{n,w}(theta) does not match it.

    Raises:
        ChannelDomainError: If |n * theta| >= pi
    """
    _check_odd(n)
    _check_angle(n * theta, "n*theta")
    channel = repetition_channel(n, n * theta)
    return LogicalChannel(channel.terms, {"constructor": "fm_shor", "n": n, "theta": theta})


def afm_shor_channel(n: int, theta: float) -> LogicalChannel:
    """
    Anti-ferromagnetic Shor code under homogeneous Z(theta)

    Odd n: every row keeps one uncancelled rotation, giving exactly the
    repetition-code channel. Even n: rotations cancel inside every row and
    the codespace is decoherence free.
    """
    if n < 1:
        raise ChannelDomainError(f"Distance must be positive, got {n}")
    metadata = {"constructor": "afm_shor", "n": n, "theta": theta}
    if n % 2 == 0:
        return identity_channel(**metadata)
    channel = repetition_channel(n, theta)
    return LogicalChannel(channel.terms, metadata)


def swapped_basis_channel(n: int, theta: float, alternating: bool = False) -> LogicalChannel:
    """
    Shor code with X/Z stabilizer bases interchanged

    Every block is an n-bit repetition code with its own syndrome weight
    w_i; the block rotations add on the logical qubit:

        P = prod_i P_{n,w_i},   angle = sum_i sign_i theta_{n,w_i}

    with sign_i = +1 for positive block generators and (-1)^i when they
    are all negated (`alternating`).
    """
    _check_odd(n)
    _check_angle(theta)
    weights = range((n + 1) // 2)
    probabilities = [p_nw(n, w, theta) for w in weights]
    angles = [theta_nw(n, w, theta) for w in weights]
    signs = [(-1) ** i if alternating else 1 for i in range(n)]
    terms = []
    for combo in itertools.product(weights, repeat=n):
        probability = float(np.prod([probabilities[w] for w in combo]))
        angle = sum(sign * angles[w] for sign, w in zip(signs, combo))
        terms.append(ChannelTerm(probability, angle))
    metadata = {
        "constructor": "swapped_minus" if alternating else "swapped_plus",
        "n": n,
        "theta": theta,
    }
    return LogicalChannel(tuple(terms), metadata).canonical()


def rotation_angle(alpha: complex, beta: complex) -> float:
    """
    theta = 2 arctan(i beta / alpha), evaluated with atan2 in the gauge where
    alpha is real and non-negative; alpha = 0 maps to pi.
    """
    magnitude = abs(alpha)
    if magnitude < 1e-300:
        return float(np.pi)
    gauge = np.conj(alpha) / magnitude
    return float(2.0 * np.arctan2((1j * beta * gauge).real, magnitude))


def row_phases_to_channel(angles: Sequence[float]) -> LogicalChannel:
    """
    Exact repetition-code channel for per-qubit angles

    Enumerates all Z errors E with amplitude prod_{x in E}(-i s_x) prod_{x not in E} c_x,
    pairs E with its complement and corrects the lighter one. Used for
    spatially structured noise (e.g. per-row phases under a field gradient).
    """
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    if n < 1 or n > 16:
        raise ChannelDomainError(f"Need 1..16 angles, got {n}")
    c, s = np.cos(angles / 2.0), -1j * np.sin(angles / 2.0)
    terms = []
    full = (1 << n) - 1
    for error in range(1 << (n - 1)):
        partner = error ^ full
        bits = [(error >> x) & 1 for x in range(n)]
        amp_error = np.prod([s[x] if b else c[x] for x, b in enumerate(bits)])
        amp_partner = np.prod([c[x] if b else s[x] for x, b in enumerate(bits)])
        light, heavy = amp_error, amp_partner
        weight = sum(bits)
        if 2 * weight > n or (2 * weight == n and bits[0] == 1):
            light, heavy = amp_partner, amp_error
        probability = abs(light) ** 2 + abs(heavy) ** 2
        terms.append(ChannelTerm(probability, rotation_angle(light, heavy)))
    return LogicalChannel(tuple(terms), {"constructor": "row_phases", "n": n}).canonical()


def channel_infidelity(ch: LogicalChannel) -> float:
    """sum_s P_s sin^2(theta_s / 2): logical flip probability in the logical-X basis"""
    value = sum(t.probability * np.sin(t.angle / 2.0) ** 2 for t in ch.terms)
    return float(min(max(value, 0.0), 1.0))


def process_fidelity(ch: LogicalChannel) -> float:
    return float(sum(t.probability * np.cos(t.angle / 2.0) ** 2 for t in ch.terms))


def channel_distance(a: LogicalChannel, b: LogicalChannel, tolerance: Optional[float] = None) -> float:
    """
    Largest term-wise deviation between two channels

    Both sides are canonicalized with angles merged within `tolerance`
    (oracle-equivalence tolerance by default), then terms with probability
    at or below `tolerance` are ignored. Returns inf if the remaining terms
    differ in number.
    """
    if tolerance is None:
        tolerance = config.TOLERANCES["oracle_equivalence"]
    a_terms = [t for t in a.canonical(merge=tolerance).terms if t.probability > tolerance]
    b_terms = [t for t in b.canonical(merge=tolerance).terms if t.probability > tolerance]
    if len(a_terms) != len(b_terms):
        return float("inf")
    deviation = 0.0
    for x, y in zip(a_terms, b_terms):
        deviation = max(deviation, abs(x.probability - y.probability), abs(x.angle - y.angle))
    return deviation


def row_phases(code: CodeSpec, angles: Iterable[float]) -> List[float]:
    """
    Relative phase accumulated between the two branches of every GHZ row

    A qubit whose pattern bit is 1 enters with the opposite sign, so AFM
    rows (010) give theta_a - theta_b + theta_c.

    Raises:
        CodeConstructionError: If the code has no GHZ rows
    """
    if not code.has_ghz_rows:
        raise CodeConstructionError(f"{code.name} has no GHZ row structure")
    angles = np.asarray(list(angles), dtype=float)
    phases = []
    for row, pattern in zip(code.rows, code.row_patterns):
        signs = np.array([1.0 if bit == "0" else -1.0 for bit in pattern])
        phases.append(float(signs @ angles[list(row)]))
    return phases


def gradient_phases(code: CodeSpec, theta0: float, delta: float) -> List[float]:
    """Per-row accumulated phases under theta_x = theta0 + x * delta"""
    return row_phases(code, theta0 + code.positions * delta)
