#!/usr/bin/env python3
"""
Dense state-vector arithmetic and signed Pauli algebra.

Everything downstream (codes, oracle, experiments) builds on the two
types defined here:

- StateVector: 2^n complex amplitudes over n qubits
- SignedPauli: a Pauli string with an overall phase in {+1, -1, +i, -i}

Qubit-index convention, used everywhere in this project: qubit 0 is the
leftmost letter of a basis-state label and the lowest bit of the
amplitude index, so label "0101" is index 0b1010 = 10.

Channels in this project are mixtures of unitaries conditioned on
measurement outcomes, so pure states are enough; density matrices are
never built.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

import numpy as np

import config
from exceptions import PauliAlgebraError, QubitCountError

logger = logging.getLogger(__name__)

MAX_QUBITS = 16

_PHASES = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}


def _popcount(value: int) -> int:
    return bin(value).count("1")


@lru_cache(maxsize=None)
def _bit_table(n_qubits: int) -> np.ndarray:
    """(2^n, n) table of basis-state bits, column x is qubit x"""
    index = np.arange(2 ** n_qubits)
    table = ((index[:, None] >> np.arange(n_qubits)) & 1).astype(np.int8)
    table.setflags(write=False)
    return table


def _check_qubits(n_qubits: int) -> None:
    if n_qubits < 1:
        raise QubitCountError(f"Need at least one qubit, got {n_qubits}")
    if n_qubits > MAX_QUBITS:
        raise QubitCountError(
            f"{n_qubits} qubits exceeds the dense-simulation limit of {MAX_QUBITS}"
        )


def basis_index(label: Union[str, Sequence[int]]) -> int:
    """Amplitude index of a computational basis label such as "0101"."""
    bits = [int(b) for b in label]
    if any(b not in (0, 1) for b in bits):
        raise QubitCountError(f"Basis label must contain only 0/1: {label!r}")
    return sum(bit << position for position, bit in enumerate(bits))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Dense pure state over n qubits (amplitudes are copied and frozen)"""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_qubits(self.n_qubits)
        amplitudes = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amplitudes.shape[0] != 2 ** self.n_qubits:
            raise QubitCountError(
                f"Expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got {amplitudes.shape[0]}"
            )
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def dimension(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        norm = self.norm()
        if norm == 0.0:
            raise QubitCountError("Cannot normalize the zero vector")
        return StateVector(self.n_qubits, self.amplitudes / norm)

    def inner(self, other: "StateVector") -> complex:
        """<self|other>"""
        _check_same_size(self.n_qubits, other.n_qubits)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def overlap(self, other: "StateVector") -> float:
        """|<self|other>|, the global-phase-insensitive comparison used in tests"""
        return abs(self.inner(other))

    def amplitude(self, label: Union[str, Sequence[int]]) -> complex:
        if len(label) != self.n_qubits:
            raise QubitCountError(f"Label {label!r} does not address {self.n_qubits} qubits")
        return complex(self.amplitudes[basis_index(label)])

    def scaled(self, factor: complex) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes * factor)

    def __add__(self, other: "StateVector") -> "StateVector":
        _check_same_size(self.n_qubits, other.n_qubits)
        return StateVector(self.n_qubits, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "StateVector") -> "StateVector":
        _check_same_size(self.n_qubits, other.n_qubits)
        return StateVector(self.n_qubits, self.amplitudes - other.amplitudes)


def _check_same_size(expected: int, actual: int) -> None:
    if expected != actual:
        raise QubitCountError(f"Qubit count mismatch: {expected} vs {actual}")


@dataclass(frozen=True)
class SignedPauli:
    """
    Pauli string with an overall phase.

    letters[x] acts on qubit x. Only real signs occur for the X/Z strings
    used as generators and corrections; products may pick up +-i, which is
    kept in `sign`.
    """

    letters: str
    sign: complex = 1

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or any(letter not in "IXYZ" for letter in letters):
            raise PauliAlgebraError(f"Invalid Pauli letters: {self.letters!r}")
        sign = complex(self.sign)
        if sign.imag == 0:
            sign = int(sign.real)
        if sign not in _PHASES:
            raise PauliAlgebraError(f"Pauli sign must be one of +-1, +-i, got {self.sign}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "sign", sign)

    @classmethod
    def parse(cls, text: str) -> "SignedPauli":
        """Parse "+XXI", "-ZZ", "ZIZ" or "+iY"."""
        text = text.strip()
        sign: complex = 1
        if text.startswith("-"):
            sign, text = -1, text[1:]
        elif text.startswith("+"):
            text = text[1:]
        if text.startswith("i"):
            sign, text = sign * 1j, text[1:]
        return cls(text, sign)

    @classmethod
    def from_support(cls, n_qubits: int, letter: str, qubits: Sequence[int],
                     sign: complex = 1) -> "SignedPauli":
        """The string with `letter` on every qubit in `qubits` and I elsewhere"""
        letters = ["I"] * n_qubits
        for qubit in qubits:
            if not 0 <= qubit < n_qubits:
                raise PauliAlgebraError(f"Qubit {qubit} outside 0..{n_qubits - 1}")
            letters[qubit] = letter
        return cls("".join(letters), sign)

    @classmethod
    def identity(cls, n_qubits: int) -> "SignedPauli":
        return cls("I" * n_qubits)

    def __str__(self) -> str:
        return f"{_PHASES[self.sign]}{self.letters}"

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def x_mask(self) -> int:
        return sum(1 << q for q, letter in enumerate(self.letters) if letter in "XY")

    @property
    def z_mask(self) -> int:
        return sum(1 << q for q, letter in enumerate(self.letters) if letter in "ZY")

    @property
    def weight(self) -> int:
        return sum(letter != "I" for letter in self.letters)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(q for q, letter in enumerate(self.letters) if letter != "I")

    @property
    def is_involution(self) -> bool:
        """P^2 = I exactly when the sign is real"""
        return self.sign in (1, -1)

    def commutes_with(self, other: "SignedPauli") -> bool:
        _check_same_size(self.n_qubits, other.n_qubits)
        overlap = _popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)
        return overlap % 2 == 0

    def with_sign(self, sign: complex) -> "SignedPauli":
        return SignedPauli(self.letters, sign)

    def __neg__(self) -> "SignedPauli":
        return SignedPauli(self.letters, -self.sign)

    def __mul__(self, other: "SignedPauli") -> "SignedPauli":
        _check_same_size(self.n_qubits, other.n_qubits)
        x1, z1, x2, z2 = self.x_mask, self.z_mask, other.x_mask, other.z_mask
        x, z = x1 ^ x2, z1 ^ z2
        # letters encode i^{#Y} X^x Z^z; reorder Z1 past X2 and renormalize Y count
        exponent = (_popcount(x1 & z1) + _popcount(x2 & z2) - _popcount(x & z)
                    + 2 * _popcount(z1 & x2)) % 4
        letters = "".join(
            "IXZY"[((x >> q) & 1) | (((z >> q) & 1) << 1)] for q in range(self.n_qubits)
        )
        return SignedPauli(letters, self.sign * other.sign * (1j ** exponent))


def basis_state(label: Union[str, Sequence[int]]) -> StateVector:
    n_qubits = len(label)
    _check_qubits(n_qubits)
    amplitudes = np.zeros(2 ** n_qubits, dtype=np.complex128)
    amplitudes[basis_index(label)] = 1.0
    return StateVector(n_qubits, amplitudes)


_SINGLE_QUBIT = {
    "0": np.array([1.0, 0.0]),
    "1": np.array([0.0, 1.0]),
    "+": np.array([1.0, 1.0]) / np.sqrt(2.0),
    "-": np.array([1.0, -1.0]) / np.sqrt(2.0),
}


def product_state(letters: str) -> StateVector:
    """Product of single-qubit states from "0", "1", "+", "-" (qubit 0 first)"""
    try:
        factors = [StateVector(1, _SINGLE_QUBIT[letter]) for letter in letters]
    except KeyError as e:
        raise QubitCountError(f"Unknown single-qubit state {e.args[0]!r}") from e
    return tensor_product(*factors)


def tensor_product(*states: StateVector) -> StateVector:
    """Tensor product with the first state on the lowest-numbered qubits"""
    if not states:
        raise QubitCountError("tensor_product needs at least one state")
    amplitudes = np.ones(1, dtype=np.complex128)
    for state in states:
        # later factors occupy higher bits, i.e. the left kron operand
        amplitudes = np.kron(state.amplitudes, amplitudes)
    return StateVector(sum(s.n_qubits for s in states), amplitudes)


def make_ghz(n: int, pattern: Union[str, Sequence[int]]) -> StateVector:
    """
    Prepare (|pattern> + |complement(pattern)>)/sqrt(2)

    Args:
        n: Number of qubits
        pattern: Bit string of length n, "000" for FM and "010" for AFM rows

    Returns:
        Normalized GHZ-type state

    Raises:
        QubitCountError: If n < 1 or the pattern length differs from n
    """
    if n < 1:
        raise QubitCountError(f"GHZ state needs n >= 1, got {n}")
    bits = [int(b) for b in pattern]
    if len(bits) != n:
        raise QubitCountError(f"Pattern {pattern!r} has length {len(bits)}, expected {n}")
    _check_qubits(n)
    amplitudes = np.zeros(2 ** n, dtype=np.complex128)
    amplitudes[basis_index(bits)] += 1.0 / np.sqrt(2.0)
    amplitudes[basis_index([1 - b for b in bits])] += 1.0 / np.sqrt(2.0)
    return StateVector(n, amplitudes)


def apply_z_rotations(state: StateVector, angles: Sequence[float]) -> StateVector:
    """
    Apply Z(theta_x) = exp(-i theta_x Z / 2) to every qubit x

    Each qubit contributes exp(-i theta_x / 2) on |0> and exp(+i theta_x / 2)
    on |1>, so the operation is a diagonal phase and preserves the norm.
    """
    angles = np.asarray(angles, dtype=float).reshape(-1)
    if angles.shape[0] != state.n_qubits:
        raise QubitCountError(
            f"Got {angles.shape[0]} rotation angles for {state.n_qubits} qubits"
        )
    signs = 1 - 2 * _bit_table(state.n_qubits)
    phase = signs @ angles
    return StateVector(state.n_qubits, state.amplitudes * np.exp(-0.5j * phase))


def apply_pauli(state: StateVector, p: SignedPauli) -> StateVector:
    """Return P|state>, sign included"""
    _check_same_size(state.n_qubits, p.n_qubits)
    x_mask, z_mask = p.x_mask, p.z_mask
    index = np.arange(state.dimension)
    source = index ^ x_mask
    parity = np.zeros(state.dimension, dtype=np.int64)
    for qubit in range(state.n_qubits):
        if (z_mask >> qubit) & 1:
            parity ^= (source >> qubit) & 1
    phase = p.sign * (1j ** _popcount(x_mask & z_mask))
    amplitudes = phase * (1 - 2 * parity) * state.amplitudes[source]
    return StateVector(state.n_qubits, amplitudes)


def expectation(state: StateVector, p: SignedPauli) -> float:
    """
    sign * <state|P|state> for a Hermitian signed Pauli

    Raises:
        QubitCountError: On size mismatch
        PauliAlgebraError: If P carries an imaginary sign (not Hermitian)
    """
    if not p.is_involution:
        raise PauliAlgebraError(f"{p} is not Hermitian; expectation is not real")
    value = state.inner(apply_pauli(state, p))
    if abs(value.imag) > 1e-10:
        raise PauliAlgebraError(f"Non-real expectation {value} for Hermitian {p}")
    return float(value.real)


def project_pauli_eigenspace(state: StateVector, p: SignedPauli,
                             outcome: int) -> Tuple[StateVector, float]:
    """
    Apply (I + outcome * P) / 2 to a state

    Args:
        state: Input state (normalized or not)
        p: Involutory signed Pauli
        outcome: +1 or -1

    Returns:
        (unnormalized projected state, its squared norm)

    Raises:
        PauliAlgebraError: If P^2 != I or the outcome is not +-1
    """
    if not p.is_involution:
        raise PauliAlgebraError(f"{p} squares to -I; it has no +-1 eigenspaces")
    if outcome not in (1, -1):
        raise PauliAlgebraError(f"Projection outcome must be +1 or -1, got {outcome}")
    flipped = apply_pauli(state, p)
    projected = StateVector(state.n_qubits, 0.5 * (state.amplitudes + outcome * flipped.amplitudes))
    probability = float(np.vdot(projected.amplitudes, projected.amplitudes).real)
    return projected, probability


def ghz_coherence(state: StateVector, pattern: Union[str, Sequence[int]]) -> complex:
    """
    2 * conj(a_pattern) * a_complement

    For a GHZ-type state this is exp(i * phi) with phi the relative phase
    between the two branches; its modulus is the fringe contrast.
    """
    bits = [int(b) for b in pattern]
    return 2.0 * np.conj(state.amplitude(bits)) * state.amplitude([1 - b for b in bits])


def states_equal(a: StateVector, b: StateVector, atol: Optional[float] = None) -> bool:
    """Equality up to global phase, |<a|b>| = |a||b|"""
    if atol is None:
        atol = config.TOLERANCES["state_norm"]
    return abs(a.overlap(b) - a.norm() * b.norm()) <= atol
