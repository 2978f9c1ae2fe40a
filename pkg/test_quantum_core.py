#!/usr/bin/env python3
"""
Tests for state vectors and signed Pauli algebra.

Covers:
- Basis-label indexing and the qubit-0-lowest-bit convention
- Pauli parsing, commutation and products with phase tracking
- Z rotations, Pauli application, expectations and projections
- GHZ preparation and coherence
"""

import numpy as np
import pytest

from exceptions import PauliAlgebraError, QubitCountError
from quantum_core import (
    SignedPauli,
    StateVector,
    apply_pauli,
    apply_z_rotations,
    basis_index,
    basis_state,
    expectation,
    ghz_coherence,
    make_ghz,
    product_state,
    project_pauli_eigenspace,
    states_equal,
    tensor_product,
)


class TestStateVector:

    def test_label_index_convention(self):
        assert basis_index("0101") == 10
        assert basis_index("1000") == 1

    def test_basis_state_amplitude(self):
        state = basis_state("011")
        assert state.amplitude("011") == 1.0
        assert state.amplitudes[6] == 1.0

    def test_amplitudes_are_read_only(self):
        state = basis_state("0")
        with pytest.raises(ValueError):
            state.amplitudes[0] = 2.0

    def test_wrong_length_rejected(self):
        with pytest.raises(QubitCountError):
            StateVector(2, np.ones(3))

    def test_too_many_qubits_rejected(self):
        with pytest.raises(QubitCountError):
            basis_state("0" * 17)

    def test_tensor_product_order(self):
        state = tensor_product(basis_state("1"), basis_state("0"))
        assert state.amplitude("10") == 1.0

    def test_product_state_plus(self):
        state = product_state("++")
        np.testing.assert_allclose(state.amplitudes, np.full(4, 0.5))

    def test_unknown_product_letter(self):
        with pytest.raises(QubitCountError):
            product_state("0x")

    def test_states_equal_ignores_global_phase(self):
        state = product_state("+-")
        assert states_equal(state, state.scaled(np.exp(0.7j)))
        assert not states_equal(state, product_state("++"))


class TestSignedPauli:

    def test_parse_and_str(self):
        assert str(SignedPauli.parse("-ZZI")) == "-ZZI"
        assert str(SignedPauli.parse("XIX")) == "+XIX"
        assert SignedPauli.parse("+iY").sign == 1j

    def test_invalid_letters(self):
        with pytest.raises(PauliAlgebraError):
            SignedPauli("XQ")

    def test_invalid_sign(self):
        with pytest.raises(PauliAlgebraError):
            SignedPauli("X", 2)

    def test_weight_and_support(self):
        p = SignedPauli("XIZY")
        assert p.weight == 3
        assert p.support == (0, 2, 3)

    def test_commutation(self):
        assert SignedPauli("XX").commutes_with(SignedPauli("ZZ"))
        assert not SignedPauli("XI").commutes_with(SignedPauli("ZI"))

    def test_product_phases(self):
        assert SignedPauli("X") * SignedPauli("Z") == SignedPauli("Y", -1j)
        assert SignedPauli("Z") * SignedPauli("X") == SignedPauli("Y", 1j)
        assert SignedPauli("Y") * SignedPauli("Y") == SignedPauli("I")

    def test_product_of_signed_strings(self):
        product = SignedPauli("ZZI", -1) * SignedPauli("IZZ", -1)
        assert product == SignedPauli("ZIZ")

    def test_from_support(self):
        assert str(SignedPauli.from_support(4, "Z", (1, 3), -1)) == "-IZIZ"

    def test_imaginary_sign_is_not_involution(self):
        assert not SignedPauli("Y", 1j).is_involution


class TestOperations:

    def test_z_rotation_phases(self):
        theta = 0.37
        rotated = apply_z_rotations(product_state("+"), [theta])
        expected = np.array([np.exp(-0.5j * theta), np.exp(0.5j * theta)]) / np.sqrt(2.0)
        np.testing.assert_allclose(rotated.amplitudes, expected, atol=1e-12)

    def test_z_rotations_compose_additively(self):
        rng = np.random.default_rng(5)
        state = make_ghz(4, "0101")
        a, b = rng.uniform(-1.0, 1.0, 4), rng.uniform(-1.0, 1.0, 4)
        stepwise = apply_z_rotations(apply_z_rotations(state, a), b)
        np.testing.assert_allclose(stepwise.amplitudes, apply_z_rotations(state, a + b).amplitudes, atol=1e-12)

    def test_z_rotations_preserve_norm(self):
        rng = np.random.default_rng(6)
        state = tensor_product(product_state("+-"), make_ghz(3, "000"))
        rotated = apply_z_rotations(state, rng.uniform(-np.pi, np.pi, 5))
        assert rotated.norm() == pytest.approx(1.0, abs=1e-12)

    def test_z_rotation_angle_count(self):
        with pytest.raises(QubitCountError):
            apply_z_rotations(basis_state("00"), [0.1])

    def test_apply_pauli_flips(self):
        flipped = apply_pauli(basis_state("00"), SignedPauli("XI"))
        assert flipped.amplitude("10") == 1.0

    def test_apply_y_phase(self):
        result = apply_pauli(basis_state("0"), SignedPauli("Y"))
        assert result.amplitude("1") == pytest.approx(1j)

    def test_expectations(self):
        assert expectation(product_state("+-"), SignedPauli("XI")) == pytest.approx(1.0)
        assert expectation(product_state("+-"), SignedPauli("IX")) == pytest.approx(-1.0)
        assert expectation(product_state("+-"), SignedPauli("XX", -1)) == pytest.approx(1.0)

    def test_expectation_needs_hermitian(self):
        with pytest.raises(PauliAlgebraError):
            expectation(basis_state("0"), SignedPauli("Z", 1j))

    def test_projection_probabilities(self):
        state = product_state("+0")
        plus, p_plus = project_pauli_eigenspace(state, SignedPauli("ZI"), 1)
        minus, p_minus = project_pauli_eigenspace(state, SignedPauli("ZI"), -1)
        assert p_plus == pytest.approx(0.5)
        assert p_minus == pytest.approx(0.5)
        assert states_equal(plus.normalized(), basis_state("00"))

    def test_projection_bad_outcome(self):
        with pytest.raises(PauliAlgebraError):
            project_pauli_eigenspace(basis_state("0"), SignedPauli("Z"), 0)


class TestGHZ:

    def test_afm_ghz_amplitudes(self):
        ghz = make_ghz(3, "010")
        assert ghz.amplitude("010") == pytest.approx(1 / np.sqrt(2))
        assert ghz.amplitude("101") == pytest.approx(1 / np.sqrt(2))

    def test_pattern_length_checked(self):
        with pytest.raises(QubitCountError):
            make_ghz(3, "01")

    def test_fm_coherence_phase(self):
        theta = 0.2
        rotated = apply_z_rotations(make_ghz(3, "000"), [theta] * 3)
        assert np.angle(ghz_coherence(rotated, "000")) == pytest.approx(3 * theta)

    def test_afm_cancels_homogeneous_rotation(self):
        rotated = apply_z_rotations(make_ghz(4, "0101"), [0.9] * 4)
        assert ghz_coherence(rotated, "0101") == pytest.approx(1.0)
