#!/usr/bin/env python3
"""
Tests for code construction, syndrome extraction and min-weight decoding.
"""

import itertools

import numpy as np
import pytest

from codes import (
    PositionMapping,
    ShorVariant,
    Syndrome,
    build_code,
    build_repetition_code,
    build_shor_code,
    code_to_dict,
    decode_min_weight,
    measure_syndrome,
    syndrome_of,
    validate_code,
)
from exceptions import CodeConstructionError, SyndromeError
from quantum_core import SignedPauli, apply_pauli, apply_z_rotations, expectation, make_ghz, states_equal

ALL_VARIANTS = [v.value for v in ShorVariant]


class TestRepetitionCode:

    def test_three_bit_code(self):
        code = build_repetition_code(3)
        assert [str(g) for g in code.generators] == ["+XXI", "+IXX"]
        assert str(code.logical_z) == "+ZZZ"
        assert code.positions.tolist() == [-1, 0, 1]

    def test_codewords_are_logical_x_eigenstates(self):
        code = build_repetition_code(5)
        assert expectation(code.codeword_zero, code.logical_x) == pytest.approx(1.0)
        assert expectation(code.codeword_one, code.logical_x) == pytest.approx(-1.0)

    def test_invalid_size(self):
        with pytest.raises(CodeConstructionError):
            build_repetition_code(0)

    def test_syndrome_label_for_last_qubit_error(self):
        code = build_repetition_code(3)
        s = syndrome_of(code, SignedPauli("IIZ"))
        assert s == Syndrome((1, -1))
        assert s.label() == "01"

    def test_both_coset_members_share_syndrome(self):
        code = build_repetition_code(3)
        assert syndrome_of(code, SignedPauli("IIZ")) == syndrome_of(code, SignedPauli("ZZI"))

    @pytest.mark.parametrize("error", ["ZII", "IZI", "IIZ"])
    def test_single_errors_corrected(self, error):
        code = build_repetition_code(3)
        assert decode_min_weight(code, syndrome_of(code, SignedPauli(error))) == SignedPauli(error)

    @pytest.mark.parametrize("n", [5, 7])
    def test_errors_up_to_half_distance_corrected(self, n):
        code = build_repetition_code(n)
        for weight in range(1, (n - 1) // 2 + 1):
            for qubits in itertools.combinations(range(n), weight):
                error = SignedPauli.from_support(n, "Z", qubits)
                correction = decode_min_weight(code, syndrome_of(code, error))
                assert correction == error
                restored = apply_pauli(apply_pauli(code.codeword_zero, error), correction)
                assert states_equal(restored, code.codeword_zero)

    def test_even_tie_keeps_first_qubit_clear(self):
        code = build_repetition_code(4)
        correction = decode_min_weight(code, syndrome_of(code, SignedPauli("ZZII")))
        assert correction == SignedPauli("IIZZ")


class TestShorCodes:

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_distance_three_is_valid(self, variant):
        code = build_shor_code(3, variant)
        validate_code(code)
        assert code.n_qubits == 9
        assert code.n_generators == 8

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    @pytest.mark.parametrize("n", [2, 4])
    def test_even_distance_codewords_stabilized(self, variant, n):
        code = build_shor_code(n, variant)
        validate_code(code)
        assert code.n_generators == n * n - 1
        for word in (code.codeword_zero, code.codeword_one):
            for g in code.generators:
                assert expectation(word, g) == pytest.approx(1.0, abs=1e-9)

    def test_fm_and_afm_differ_only_in_signs(self):
        fm, afm = build_shor_code(3, "fm"), build_shor_code(3, "afm")
        assert [g.letters for g in fm.generators] == [g.letters for g in afm.generators]
        assert any(g.sign != h.sign for g, h in zip(fm.generators, afm.generators))
        for bits in itertools.product((1, -1), repeat=fm.n_generators):
            assert decode_min_weight(fm, Syndrome(bits)) == decode_min_weight(afm, Syndrome(bits))

    def test_afm_row_generators_are_negative(self):
        code = build_shor_code(3, "afm")
        assert str(code.generators[0]) == "-ZZIIIIIII"
        assert code.row_patterns == ("010", "010", "010")

    def test_fm_codeword_is_ghz_product(self):
        code = build_shor_code(3, "fm")
        row = make_ghz(3, "000")
        assert code.codeword_zero.amplitude("000" * 3) == pytest.approx(row.amplitude("000") ** 3)

    def test_positions_standard_and_center(self):
        assert build_shor_code(3, "fm").positions.tolist() == [-6, -5, -4, -2, 0, 2, 4, 5, 6]
        center = build_shor_code(3, "afm", PositionMapping.CENTER_0_M2_P2)
        assert center.positions.tolist()[3:6] == [0, -2, 2]
        assert center.name.endswith("center_0_m2_p2")

    def test_center_mapping_only_for_distance_three(self):
        with pytest.raises(CodeConstructionError):
            build_shor_code(2, "afm", "center_0_m2_p2")

    def test_unknown_variant(self):
        with pytest.raises(CodeConstructionError):
            build_shor_code(3, "bogus")

    def test_too_large_for_dense_simulation(self):
        with pytest.raises(CodeConstructionError):
            build_shor_code(5, "fm")

    def test_swapped_rows_have_no_ghz_patterns(self):
        code = build_shor_code(3, "swapped_minus")
        assert not code.has_ghz_rows
        assert str(code.generators[-1]).startswith("-")

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_single_qubit_z_errors_corrected(self, variant):
        code = build_shor_code(3, variant)
        for qubit in range(code.n_qubits):
            error = SignedPauli.from_support(code.n_qubits, "Z", (qubit,))
            correction = decode_min_weight(code, syndrome_of(code, error))
            restored = apply_pauli(apply_pauli(code.codeword_zero, error), correction)
            assert states_equal(restored, code.codeword_zero)

    @pytest.mark.parametrize("variant", ALL_VARIANTS)
    def test_single_qubit_x_errors_corrected(self, variant):
        code = build_shor_code(3, variant)
        for qubit in range(code.n_qubits):
            error = SignedPauli.from_support(code.n_qubits, "X", (qubit,))
            correction = decode_min_weight(code, syndrome_of(code, error))
            restored = apply_pauli(apply_pauli(code.codeword_zero, error), correction)
            assert states_equal(restored, code.codeword_zero)

    def test_decoder_rejects_wrong_length(self):
        with pytest.raises(SyndromeError):
            decode_min_weight(build_shor_code(3, "fm"), Syndrome((1, 1)))

    def test_syndrome_bits_validated(self):
        with pytest.raises(SyndromeError):
            Syndrome((1, 0))


class TestSyndromeMeasurement:

    def test_codeword_gives_trivial_syndrome(self):
        code = build_shor_code(3, "afm")
        outcomes = measure_syndrome(code.codeword_zero, code)
        assert len(outcomes) == 1
        assert outcomes[0][0].is_trivial
        assert outcomes[0][1] == pytest.approx(1.0)

    def test_probabilities_sum_to_one(self):
        code = build_repetition_code(3)
        rotated = apply_z_rotations(code.codeword_zero, [0.3, -0.2, 0.5])
        outcomes = measure_syndrome(rotated, code)
        assert sum(p for _, p, _ in outcomes) == pytest.approx(1.0, abs=1e-12)
        assert len(outcomes) == 4


class TestDispatch:

    def test_build_code_repetition(self):
        assert build_code("repetition", 5).n_qubits == 5

    def test_code_to_dict(self):
        document = code_to_dict(build_shor_code(2, "afm"))
        assert document["n_qubits"] == 4
        assert document["row_patterns"] == ["01", "01"]
        assert len(document["generators"]) == 3
        assert np.array(document["positions"]).shape == (4,)
