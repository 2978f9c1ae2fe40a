#!/usr/bin/env python3
"""
Code families for coherent-dephasing studies.

- Rotated repetition codes: generators X_i X_{i+1}, codewords |+>^n, |->^n
- Shor codes in four flavours:
    FM             +Z_i Z_{i+1} row generators, rows (|00..> + |11..>)/sqrt(2)
    AFM            -Z_i Z_{i+1} row generators, rows (|0101..> + |1010..>)/sqrt(2)
    SWAPPED_PLUS   X/Z bases interchanged, +Z weight-2n block generators
    SWAPPED_MINUS  X/Z bases interchanged, -Z weight-2n block generators

Logical convention shared by every code: `logical_z` is the Z-type logical
that coherent dephasing rotates about; `codeword_zero` and `codeword_one`
are the +1/-1 eigenstates of `logical_x` (the Ramsey read-out basis), with
codeword_one = logical_z * codeword_zero.

Syndrome bits follow generator order: Z-type row generators first
(row-major, left to right), then the generators that join rows. For the
3-bit repetition code the label "01" (X0X1 satisfied, X1X2
violated) is Syndrome((+1, -1)), caused by IIZ or ZZI.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from exceptions import CodeConstructionError, QubitCountError, SyndromeError
from quantum_core import (
    MAX_QUBITS,
    SignedPauli,
    StateVector,
    apply_pauli,
    expectation,
    make_ghz,
    product_state,
    project_pauli_eigenspace,
    tensor_product,
)

logger = logging.getLogger(__name__)


class ShorVariant(str, Enum):
    FM = "fm"
    AFM = "afm"
    SWAPPED_PLUS = "swapped_plus"
    SWAPPED_MINUS = "swapped_minus"


class PositionMapping(str, Enum):
    STANDARD = "standard"
    CENTER_0_M2_P2 = "center_0_m2_p2"


@dataclass(frozen=True)
class ParityBlock:
    """
    Chained parity checks used by the decoder.

    Generator generators[k] compares units[k] and units[k + 1]. Flipping a
    unit applies `correction` on its first qubit.
    """

    correction: str
    units: Tuple[Tuple[int, ...], ...]
    generators: Tuple[int, ...]


@dataclass(frozen=True)
class Syndrome:
    """Ordered +-1 generator outcomes"""

    bits: Tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (1, -1) for b in bits):
            raise SyndromeError(f"Syndrome bits must be +-1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @property
    def is_trivial(self) -> bool:
        return all(b == 1 for b in self.bits)

    def label(self) -> str:
        """Binary label, 0 for a satisfied generator and 1 for a violated one"""
        return "".join("0" if b == 1 else "1" for b in self.bits)

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """Stabilizer code with codewords, ion positions and decoder structure"""

    name: str
    variant: str
    distance: int
    n_qubits: int
    generators: Tuple[SignedPauli, ...]
    logical_z: SignedPauli
    logical_x: SignedPauli
    codeword_zero: StateVector
    codeword_one: StateVector
    positions: np.ndarray
    rows: Tuple[Tuple[int, ...], ...] = ()
    row_patterns: Tuple[str, ...] = ()
    parity_blocks: Tuple[ParityBlock, ...] = field(default=())

    def __post_init__(self):
        positions = np.array(self.positions, dtype=int).reshape(-1)
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def has_ghz_rows(self) -> bool:
        return bool(self.row_patterns)


def _chain_positions(count: int) -> np.ndarray:
    return np.arange(count) - count // 2


def _alternating(n: int) -> str:
    return "".join(str(i % 2) for i in range(n))


def validate_code(code: CodeSpec) -> None:
    """
    Check the CodeSpec invariants

    Raises:
        CodeConstructionError: If any invariant fails
    """
    tol = config.TOLERANCES["codespace_residual"]
    gens = code.generators
    for i, g in enumerate(gens):
        for h in gens[i + 1:]:
            if not g.commutes_with(h):
                raise CodeConstructionError(f"{code.name}: generators {g} and {h} anticommute")
        for logical in (code.logical_z, code.logical_x):
            if not g.commutes_with(logical):
                raise CodeConstructionError(f"{code.name}: logical {logical} anticommutes with {g}")
    if code.logical_z.commutes_with(code.logical_x):
        raise CodeConstructionError(f"{code.name}: logical Z and X commute")
    for label, word in (("zero", code.codeword_zero), ("one", code.codeword_one)):
        if abs(word.norm() - 1.0) > tol:
            raise CodeConstructionError(f"{code.name}: codeword_{label} is not normalized")
        for g in gens:
            if expectation(word, g) < 1.0 - tol:
                raise CodeConstructionError(f"{code.name}: codeword_{label} violates {g}")
    if expectation(code.codeword_zero, code.logical_x) < 1.0 - tol:
        raise CodeConstructionError(f"{code.name}: codeword_zero is not a +1 logical-X eigenstate")
    if len(code.positions) != code.n_qubits or len(set(code.positions.tolist())) != code.n_qubits:
        raise CodeConstructionError(f"{code.name}: positions must be distinct, one per qubit")


def build_repetition_code(n: int) -> CodeSpec:
    """
    Rotated n-bit repetition code

    Args:
        n: Number of qubits (odd for majority-vote decoding; even n is
           accepted for state preparation)

    Returns:
        CodeSpec with generators X_i X_{i+1} and codewords |+>^n, |->^n

    Raises:
        CodeConstructionError: If n < 1 or too large to simulate
    """
    if n < 1:
        raise CodeConstructionError(f"Repetition code needs n >= 1, got {n}")
    if n > MAX_QUBITS:
        raise CodeConstructionError(f"Repetition code with {n} qubits is beyond {MAX_QUBITS}")
    if n % 2 == 0:
        logger.debug(f"Even repetition code n={n}: decoder breaks weight ties")

    generators = tuple(
        SignedPauli.from_support(n, "X", (i, i + 1)) for i in range(n - 1)
    )
    logical_z = SignedPauli("Z" * n)
    logical_x = SignedPauli.from_support(n, "X", (0,))
    zero = product_state("+" * n)
    code = CodeSpec(
        name=f"repetition-{n}",
        variant="repetition",
        distance=n,
        n_qubits=n,
        generators=generators,
        logical_z=logical_z,
        logical_x=logical_x,
        codeword_zero=zero,
        codeword_one=apply_pauli(zero, logical_z),
        positions=_chain_positions(n),
        parity_blocks=(
            ParityBlock("Z", tuple((q,) for q in range(n)), tuple(range(n - 1))),
        ),
    )
    validate_code(code)
    return code


def _shor_positions(n: int, mapping: PositionMapping) -> np.ndarray:
    if n == 3:
        return np.array(config.ION_POSITIONS[mapping.value]).reshape(-1)
    if mapping is not PositionMapping.STANDARD:
        raise CodeConstructionError(f"Mapping {mapping.value} is only defined for distance 3")
    # Outside distance 3 rows sit contiguously along a chain centered on 0
    return _chain_positions(n * n)


def _ghz_row_code(n: int, variant: ShorVariant, rows, positions) -> CodeSpec:
    size = n * n
    pattern = "0" * n if variant is ShorVariant.FM else _alternating(n)
    generators: List[SignedPauli] = []
    row_checks: List[ParityBlock] = []
    for row in rows:
        indices = []
        for i in range(n - 1):
            sign = -1 if pattern[i] != pattern[i + 1] else 1
            indices.append(len(generators))
            generators.append(SignedPauli.from_support(size, "Z", (row[i], row[i + 1]), sign))
        row_checks.append(ParityBlock("X", tuple((q,) for q in row), tuple(indices)))
    joins = []
    for r in range(n - 1):
        joins.append(len(generators))
        generators.append(SignedPauli.from_support(size, "X", rows[r] + rows[r + 1]))

    logical_z = SignedPauli.from_support(size, "Z", tuple(row[0] for row in rows))
    logical_x = SignedPauli.from_support(size, "X", rows[0])
    zero = tensor_product(*(make_ghz(n, pattern) for _ in rows))
    return CodeSpec(
        name=f"shor-{variant.value}-d{n}",
        variant=variant.value,
        distance=n,
        n_qubits=size,
        generators=tuple(generators),
        logical_z=logical_z,
        logical_x=logical_x,
        codeword_zero=zero,
        codeword_one=apply_pauli(zero, logical_z),
        positions=positions,
        rows=rows,
        row_patterns=tuple(pattern for _ in rows),
        parity_blocks=tuple(row_checks) + (ParityBlock("Z", rows, tuple(joins)),),
    )


def _swapped_code(n: int, variant: ShorVariant, rows, positions) -> CodeSpec:
    size = n * n
    block_sign = 1 if variant is ShorVariant.SWAPPED_PLUS else -1
    generators: List[SignedPauli] = []
    block_checks: List[ParityBlock] = []
    for row in rows:
        indices = []
        for i in range(n - 1):
            indices.append(len(generators))
            generators.append(SignedPauli.from_support(size, "X", (row[i], row[i + 1])))
        block_checks.append(ParityBlock("Z", tuple((q,) for q in row), tuple(indices)))
    joins = []
    for r in range(n - 1):
        joins.append(len(generators))
        generators.append(SignedPauli.from_support(size, "Z", rows[r] + rows[r + 1], block_sign))

    # Hadamard image of the GHZ-product structure: each block is
    # (|+..+> +- |-..->)/sqrt(2), blocks chained in that X-like basis with
    # equal (PLUS) or alternating (MINUS) signs to satisfy the block generators.
    block_even = (product_state("+" * n) + product_state("-" * n)).scaled(1 / np.sqrt(2.0))
    block_odd = (product_state("+" * n) - product_state("-" * n)).scaled(1 / np.sqrt(2.0))
    blocks = (block_even, block_odd)
    pattern = [0] * n if block_sign == 1 else [r % 2 for r in range(n)]
    branch = tensor_product(*(blocks[p] for p in pattern))
    mirror = tensor_product(*(blocks[1 - p] for p in pattern))
    zero = (branch + mirror).scaled(1 / np.sqrt(2.0))

    logical_z = SignedPauli.from_support(size, "Z", rows[0])
    logical_x = SignedPauli.from_support(size, "X", tuple(row[0] for row in rows))
    return CodeSpec(
        name=f"shor-{variant.value}-d{n}",
        variant=variant.value,
        distance=n,
        n_qubits=size,
        generators=tuple(generators),
        logical_z=logical_z,
        logical_x=logical_x,
        codeword_zero=zero,
        codeword_one=apply_pauli(zero, logical_z),
        positions=positions,
        rows=rows,
        row_patterns=(),
        parity_blocks=tuple(block_checks) + (ParityBlock("X", rows, tuple(joins)),),
    )


def build_shor_code(n: int, variant="fm", mapping="standard") -> CodeSpec:
    """
    Distance-n Shor code on n x n qubits

    Args:
        n: Distance (>= 2); the dense oracle limits this to n <= 4
        variant: ShorVariant or its value ("fm", "afm", "swapped_plus", "swapped_minus")
        mapping: PositionMapping or its value; CENTER_0_M2_P2 needs n = 3

    Returns:
        Validated CodeSpec

    Raises:
        CodeConstructionError: On unsupported parameters
    """
    try:
        variant = ShorVariant(variant)
        mapping = PositionMapping(mapping)
    except ValueError as e:
        raise CodeConstructionError(str(e)) from e
    if n < 2:
        raise CodeConstructionError(f"Shor code needs distance >= 2, got {n}")
    if n * n > MAX_QUBITS:
        raise CodeConstructionError(
            f"Distance-{n} Shor code needs {n * n} qubits; use the analytic channels instead"
        )

    rows = tuple(tuple(range(r * n, (r + 1) * n)) for r in range(n))
    positions = _shor_positions(n, mapping)
    if variant in (ShorVariant.FM, ShorVariant.AFM):
        code = _ghz_row_code(n, variant, rows, positions)
    else:
        code = _swapped_code(n, variant, rows, positions)
    if mapping is not PositionMapping.STANDARD:
        code = replace(code, name=f"{code.name}-{mapping.value}")
    validate_code(code)
    logger.debug(f"Built {code.name} with {code.n_generators} generators")
    return code


def build_code(variant: str, distance: int, mapping: str = "standard") -> CodeSpec:
    """Dispatch on a variant name, including "repetition" """
    if variant == "repetition":
        return build_repetition_code(distance)
    return build_shor_code(distance, variant, mapping)


def project_branches(states: Sequence[StateVector], code: CodeSpec,
                     drop: Optional[float] = None) -> List[Tuple[Syndrome, List[StateVector]]]:
    """
    Project every state onto every syndrome subspace of the code

    Generators are measured in order; a partial branch is dropped once its
    squared norm is below `drop` for all inputs.

    Returns:
        List of (syndrome, unnormalized projected states), one state per input
    """
    if drop is None:
        drop = config.TOLERANCES["branch_drop"]
    for state in states:
        if state.n_qubits != code.n_qubits:
            raise QubitCountError(
                f"State has {state.n_qubits} qubits, code {code.name} has {code.n_qubits}"
            )
    branches = [((), list(states))]
    for generator in code.generators:
        refined = []
        for bits, current in branches:
            for outcome in (1, -1):
                projected = [project_pauli_eigenspace(s, generator, outcome) for s in current]
                if max(p for _, p in projected) > drop:
                    refined.append((bits + (outcome,), [s for s, _ in projected]))
        branches = refined
    return [(Syndrome(bits), projected) for bits, projected in branches]


def measure_syndrome(state: StateVector, code: CodeSpec) -> List[Tuple[Syndrome, float, StateVector]]:
    """
    Exhaustive syndrome measurement by sequential projection

    Returns:
        (syndrome, probability, normalized post-measurement state) for every
        branch with non-negligible probability; probabilities sum to 1
    """
    outcomes = []
    for syndrome, (projected,) in project_branches([state], code):
        probability = projected.norm() ** 2
        outcomes.append((syndrome, probability, projected.normalized()))
    return outcomes


def syndrome_of(code: CodeSpec, error: SignedPauli) -> Syndrome:
    """Syndrome a Pauli error produces on any codeword"""
    return Syndrome(tuple(1 if g.commutes_with(error) else -1 for g in code.generators))


def decode_min_weight(code: CodeSpec, s: Syndrome) -> SignedPauli:
    """
    Minimum-weight correction for a syndrome

    Each parity block is a chained repetition check: the two candidate
    flip patterns consistent with its bits differ by flipping every unit,
    i.e. by a logical (or, across blocks, a stabilizer). The lighter one
    wins; a tie keeps the candidate that leaves the block's first unit alone.

    Raises:
        SyndromeError: If the syndrome length does not match the code
    """
    if len(s) != code.n_generators:
        raise SyndromeError(
            f"Syndrome of length {len(s)} for {code.name} with {code.n_generators} generators"
        )
    flips: Dict[str, set] = {"X": set(), "Z": set()}
    for block in code.parity_blocks:
        candidate = [0]
        for index in block.generators:
            candidate.append(candidate[-1] ^ (1 if s.bits[index] == -1 else 0))
        weight = sum(candidate)
        if 2 * weight > len(candidate):
            candidate = [1 - f for f in candidate]
        elif 2 * weight == len(candidate) and weight:
            logger.debug(f"{code.name}: weight tie in {block.correction}-block, keeping unit 0 clear")
        for unit, flipped in zip(block.units, candidate):
            if flipped:
                flips[block.correction].add(unit[0])

    letters = []
    for q in range(code.n_qubits):
        x, z = q in flips["X"], q in flips["Z"]
        letters.append("Y" if x and z else "X" if x else "Z" if z else "I")
    return SignedPauli("".join(letters))


def code_to_dict(code: CodeSpec) -> dict:
    """JSON-ready description of a code"""
    return {
        "name": code.name,
        "variant": code.variant,
        "distance": code.distance,
        "n_qubits": code.n_qubits,
        "generators": [str(g) for g in code.generators],
        "logical_z": str(code.logical_z),
        "logical_x": str(code.logical_x),
        "positions": code.positions.tolist(),
        "rows": [list(row) for row in code.rows],
        "row_patterns": list(code.row_patterns),
    }
