"""Pauli label algebra against dense matrices built from definitions."""

import itertools

import numpy as np
import pytest

from magicforge.errors import ValidationError
from magicforge.pauli_core import (
    PauliLabel,
    commutes,
    from_index,
    pauli_conj,
    pauli_from_text,
    pauli_mul,
    pauli_to_text,
    symplectic_form,
    to_index,
)

from helpers import pauli_matrix


def all_labels(n, phases=(0,)):
    for x in range(1 << n):
        for z in range(1 << n):
            for ph in phases:
                yield PauliLabel(n, x, z, ph)


class TestSingleQubitMatrices:
    def test_identity_x_z_y(self):
        assert np.allclose(pauli_matrix(PauliLabel(1, 0, 0)), np.eye(2))
        assert np.allclose(pauli_matrix(PauliLabel(1, 1, 0)), [[0, 1], [1, 0]])
        assert np.allclose(pauli_matrix(PauliLabel(1, 0, 1)), [[1, 0], [0, -1]])
        assert np.allclose(pauli_matrix(PauliLabel(1, 1, 1)), [[0, -1j], [1j, 0]])

    def test_phase_prefactor(self):
        y = pauli_matrix(PauliLabel(1, 1, 1, 0))
        assert np.allclose(pauli_matrix(PauliLabel(1, 1, 1, 1)), 1j * y)
        assert np.allclose(pauli_matrix(PauliLabel(1, 1, 1, 2)), -y)


class TestMul:
    @pytest.mark.parametrize("n", [1, 2])
    def test_exhaustive_against_dense(self, n):
        labels = list(all_labels(n, phases=(0, 1, 2, 3)))
        for p in labels:
            for q in labels:
                prod = pauli_mul(p, q)
                got = pauli_matrix(prod)
                want = pauli_matrix(p) @ pauli_matrix(q)
                assert np.allclose(got, want), (p, q, prod)

    def test_random_three_qubits(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            p = PauliLabel(3, int(rng.integers(8)), int(rng.integers(8)), int(rng.integers(4)))
            q = PauliLabel(3, int(rng.integers(8)), int(rng.integers(8)), int(rng.integers(4)))
            assert np.allclose(
                pauli_matrix(pauli_mul(p, q)), pauli_matrix(p) @ pauli_matrix(q)
            )

    def test_size_mismatch(self):
        with pytest.raises(ValidationError):
            pauli_mul(PauliLabel(1, 0, 0), PauliLabel(2, 0, 0))


class TestConjAndStructure:
    def test_conj_is_adjoint(self):
        for p in all_labels(2, phases=(0, 1, 2, 3)):
            assert np.allclose(pauli_matrix(pauli_conj(p)), pauli_matrix(p).conj().T)

    def test_hermitian_iff_even_phase(self):
        for p in all_labels(2, phases=(0, 1, 2, 3)):
            m = pauli_matrix(p)
            assert p.is_hermitian == bool(np.allclose(m, m.conj().T))

    def test_weight(self):
        assert PauliLabel(3, 0b101, 0b001).weight == 2
        assert PauliLabel(3, 0, 0).weight == 0
        assert PauliLabel(3, 0b111, 0b111).weight == 3

    def test_identity_flag(self):
        assert PauliLabel(2, 0, 0).is_identity
        assert not PauliLabel(2, 0, 0, 2).is_identity
        assert not PauliLabel(2, 1, 0).is_identity


class TestCommutation:
    @pytest.mark.parametrize("n", [1, 2])
    def test_symplectic_matches_dense_commutator(self, n):
        for p, q in itertools.product(all_labels(n), repeat=2):
            a, b = pauli_matrix(p), pauli_matrix(q)
            dense_commutes = np.allclose(a @ b, b @ a)
            assert commutes(p, q) == dense_commutes
            assert symplectic_form(p, q) == (0 if dense_commutes else 1)


class TestText:
    def test_known_strings(self):
        assert pauli_to_text(PauliLabel(1, 1, 0)) == "+X"
        assert pauli_to_text(PauliLabel(1, 0, 1)) == "+Z"
        assert pauli_to_text(PauliLabel(1, 1, 1)) == "+Y"
        assert pauli_to_text(PauliLabel(1, 1, 1, 2)) == "-Y"
        assert pauli_to_text(PauliLabel(1, 0, 0, 1)) == "+iI"

    def test_qubit_one_leftmost(self):
        # X on qubit 1, Z on qubit 3
        p = PauliLabel(3, 0b001, 0b100)
        assert pauli_to_text(p) == "+XIZ"

    def test_round_trip_exhaustive(self):
        for p in all_labels(2, phases=(0, 1, 2, 3)):
            assert pauli_from_text(pauli_to_text(p)) == p

    def test_parse_variants(self):
        assert pauli_from_text("-iXY") == PauliLabel(2, 0b11, 0b10, 3)
        assert pauli_from_text("+ZI") == PauliLabel(2, 0, 0b01)

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValidationError):
            pauli_from_text("XQ")
        with pytest.raises(ValidationError):
            pauli_from_text("")


class TestIndexing:
    def test_round_trip(self):
        for p in all_labels(3):
            q = from_index(to_index(p), 3)
            assert (q.x, q.z) == (p.x, p.z)

    def test_index_layout(self):
        # index = (x << n) | z
        assert to_index(PauliLabel(2, 0b10, 0b01)) == 0b1001

    def test_index_bounds(self):
        with pytest.raises(ValidationError):
            from_index(16, 2)


class TestValidation:
    def test_phase_normalized_mod_four(self):
        assert PauliLabel(1, 0, 0, 7).phase_exp == 3
        assert PauliLabel(1, 0, 0, -1).phase_exp == 3

    def test_mask_bounds(self):
        with pytest.raises(ValidationError):
            PauliLabel(1, 2, 0)
        with pytest.raises(ValidationError):
            PauliLabel(1, 0, -1)

    def test_qubit_cap(self):
        with pytest.raises(ValidationError):
            PauliLabel(33, 0, 0)
