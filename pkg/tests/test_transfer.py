"""Heisenberg conjugation and the spectrum transfer map for full blocks."""

import numpy as np
import pytest

from magicforge.diagonal_gates import RotationVector
from magicforge.errors import ValidationError
from magicforge.oracle import apply_gates, apply_rotation, oracle_spectrum, statevector
from magicforge.pauli_core import PauliLabel, from_index, pauli_to_text, to_index
from magicforge.spectrum import f_alpha
from magicforge.stabilizer import plus_tableau, random_stabilizer, zeros_tableau
from magicforge.transfer import (
    CliffordOp,
    LayerBlock,
    apply_block,
    circuit_from_json,
    clifford_conjugate,
    conjugate_label,
    gamma,
    identity_clifford,
    initial_spectrum,
    random_clifford,
    transfer_orthogonality_check,
)

from helpers import circuit_matrix, pauli_matrix


GATES_1Q = [("H", 0), ("S", 0), ("X", 0), ("Z", 0)]
GATES_2Q = [("CX", 0, 1), ("CX", 1, 0), ("CZ", 0, 1)]


class TestConjugateLabel:
    # conjugate_label and CliffordOp.conjugate push forward: u p u^dagger

    @pytest.mark.parametrize("gate", GATES_1Q)
    def test_single_qubit_exhaustive(self, gate):
        for x in range(2):
            for z in range(2):
                for ph in range(4):
                    p = PauliLabel(1, x, z, ph)
                    got = pauli_matrix(conjugate_label(gate, p))
                    u = circuit_matrix(1, [gate])
                    want = u @ pauli_matrix(p) @ u.conj().T
                    assert np.allclose(got, want), (gate, pauli_to_text(p))

    @pytest.mark.parametrize("gate", GATES_2Q)
    def test_two_qubit_exhaustive(self, gate):
        for x in range(4):
            for z in range(4):
                p = PauliLabel(2, x, z)
                got = pauli_matrix(conjugate_label(gate, p))
                u = circuit_matrix(2, [gate])
                want = u @ pauli_matrix(p) @ u.conj().T
                assert np.allclose(got, want), (gate, pauli_to_text(p))

    def test_embedded_in_larger_register(self):
        p = PauliLabel(3, 0b101, 0b011, 1)
        got = pauli_matrix(conjugate_label(("CX", 2, 0), p))
        u = circuit_matrix(3, [("CX", 2, 0)])
        assert np.allclose(got, u @ pauli_matrix(p) @ u.conj().T)


class TestCliffordConjugateSplit:
    def test_known_single_qubit_images(self):
        h = CliffordOp(1, (("H", 0),))
        s = CliffordOp(1, (("S", 0),))
        x, y, z = PauliLabel(1, 1, 0), PauliLabel(1, 1, 1), PauliLabel(1, 0, 1)
        assert clifford_conjugate(h, x) == (1, z)
        assert clifford_conjugate(s, x) == (1, y)
        assert clifford_conjugate(s, y) == (-1, x)

    def test_sign_times_image_matches_dense(self):
        rng = np.random.default_rng(7)
        n = 4
        c = random_clifford(n, rng)
        u = circuit_matrix(n, c.gates)
        for idx in range(4**n):
            p = from_index(idx, n)
            sign, image = clifford_conjugate(c, p)
            assert image.phase_exp == 0
            want = u @ pauli_matrix(p) @ u.conj().T
            assert np.allclose(sign * pauli_matrix(image), want), pauli_to_text(p)

    def test_rejects_odd_phase(self):
        c = identity_clifford(1)
        with pytest.raises(ValidationError):
            clifford_conjugate(c, PauliLabel(1, 1, 0, 1))


class TestCliffordOp:
    def test_conjugate_matches_dense(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 3):
            c = random_clifford(n, rng)
            u = circuit_matrix(n, c.gates)
            for _ in range(20):
                p = PauliLabel(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)),
                               int(rng.integers(4)))
                got = pauli_matrix(c.conjugate(p))
                assert np.allclose(got, u @ pauli_matrix(p) @ u.conj().T)

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(1)
        for n in (1, 2, 3):
            c = random_clifford(n, rng)
            inv = c.inverse()
            for _ in range(10):
                p = PauliLabel(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)))
                assert inv.conjugate(c.conjugate(p)) == p

    def test_heisenberg_table_is_pullback(self):
        # table convention is the other direction: C^dagger P(v) C
        rng = np.random.default_rng(2)
        for n in (1, 2):
            c = random_clifford(n, rng)
            perm, sign = c.heisenberg_table()
            u = circuit_matrix(n, c.gates)
            for v in range(1 << (2 * n)):
                want = u.conj().T @ pauli_matrix(from_index(v, n)) @ u
                got = sign[v] * pauli_matrix(from_index(int(perm[v]), n))
                assert np.allclose(got, want)

    def test_heisenberg_table_matches_scalar_inverse(self):
        rng = np.random.default_rng(3)
        for n in (2, 3):
            c = random_clifford(n, rng)
            perm, sign = c.heisenberg_table()
            inv = c.inverse()
            for v in range(1 << (2 * n)):
                q = inv.conjugate(from_index(v, n))
                assert to_index(q) == perm[v]
                assert q.phase_exp in (0, 2)
                assert sign[v] == (1 if q.phase_exp == 0 else -1)

    def test_vectorized_matches_scalar_per_gate(self):
        # same single gate through both code paths, all labels
        rng = np.random.default_rng(4)
        for n in (2, 3):
            for _ in range(15):
                gate = random_clifford(n, rng, length=1).gates[0]
                # a table built from a circuit whose inverse is that one gate
                if gate[0] == "S":
                    fwd = CliffordOp(n, (("S", gate[1]),) * 3)
                else:
                    fwd = CliffordOp(n, (gate,))
                perm, sign = fwd.heisenberg_table()
                for v in range(1 << (2 * n)):
                    q = conjugate_label(gate, from_index(v, n))
                    assert to_index(q) == perm[v]
                    assert sign[v] == (1 if q.phase_exp == 0 else -1)

    def test_identity(self):
        c = identity_clifford(2)
        assert c.gates == ()
        p = PauliLabel(2, 1, 2, 3)
        assert c.conjugate(p) == p

    def test_random_clifford_deterministic(self):
        a = random_clifford(3, np.random.default_rng(9))
        b = random_clifford(3, np.random.default_rng(9))
        assert a.gates == b.gates

    def test_rejects_unknown_gate(self):
        with pytest.raises(ValidationError):
            CliffordOp(1, (("T", 0),))


class TestGamma:
    def test_submask_required(self):
        with pytest.raises(ValidationError):
            gamma(0b01, 0b10, RotationVector.continuous((0.1, 0.2)))

    def test_product_form(self):
        w = RotationVector.continuous((0.1, 0.2, 0.3))
        x, u = 0b101, 0b100
        want = np.cos(2 * np.pi * 0.1) * np.sin(2 * np.pi * 0.3)
        assert abs(gamma(x, u, w) - want) < 1e-12

    def test_unit_row_norm(self):
        # the gamma values over submasks of x form a unit vector
        w = RotationVector.continuous((0.13, 0.74, 0.09))
        for x in range(8):
            total = 0.0
            u = x
            while True:
                total += gamma(x, u, w) ** 2
                if u == 0:
                    break
                u = (u - 1) & x
            assert abs(total - 1.0) < 1e-12


class TestInitialSpectrum:
    def test_matches_oracle(self):
        rng = np.random.default_rng(4)
        for n in (1, 2, 3, 4):
            for _ in range(8):
                tab = random_stabilizer(n, int(rng.integers(1 << 30)))
                s = initial_spectrum(tab)
                o = oracle_spectrum(statevector(tab))
                assert np.max(np.abs(s.values - o.values)) < 1e-12

    def test_entries_signed_unit(self):
        s = initial_spectrum(zeros_tableau(2))
        vals = np.real(s.values)
        assert set(np.round(vals, 12)) <= {-1.0, 0.0, 1.0}


class TestApplyBlock:
    def test_golden_single_qubit_block(self):
        # H then an eighth-turn rotation on |0>: magnitudes (1, 0, r, r)
        s = initial_spectrum(zeros_tableau(1))
        block = LayerBlock(1, CliffordOp(1, (("H", 0),)), RotationVector.dyadic((1,), 3))
        out = apply_block(s, block)
        r = np.sqrt(0.5)
        assert np.allclose(np.abs(out.values), [1, 0, r, r], atol=1e-12)

    def test_three_block_circuits_vs_oracle(self):
        rng = np.random.default_rng(5)
        for n in (2, 3):
            for _ in range(6):
                tab = random_stabilizer(n, int(rng.integers(1 << 30)))
                s = initial_spectrum(tab)
                st = statevector(tab)
                for _ in range(3):
                    c = random_clifford(n, rng)
                    w = RotationVector.continuous(tuple(rng.uniform(0, 1, n)))
                    s = apply_block(s, LayerBlock(n, c, w))
                    st = apply_rotation(apply_gates(st, c.gates), w)
                assert np.max(np.abs(s.values - oracle_spectrum(st).values)) < 1e-10

    def test_clifford_only_block(self):
        rng = np.random.default_rng(6)
        tab = random_stabilizer(3, 1)
        c = random_clifford(3, rng)
        s = apply_block(initial_spectrum(tab), LayerBlock(3, c, None))
        o = oracle_spectrum(apply_gates(statevector(tab), c.gates))
        assert np.max(np.abs(s.values - o.values)) < 1e-12

    def test_rotation_only_block(self):
        tab = plus_tableau(2)
        w = RotationVector.continuous((0.21, 0.68))
        s = apply_block(initial_spectrum(tab), LayerBlock(2, None, w))
        o = oracle_spectrum(apply_rotation(statevector(tab), w))
        assert np.max(np.abs(s.values - o.values)) < 1e-10

    def test_f_alpha_clifford_invariance(self):
        rng = np.random.default_rng(7)
        tab = random_stabilizer(3, 2)
        s = apply_block(initial_spectrum(tab),
                        LayerBlock(3, None, RotationVector.continuous((.1, .2, .3))))
        before = f_alpha(s, 2)
        for _ in range(5):
            c = random_clifford(3, rng)
            after = f_alpha(apply_block(s, LayerBlock(3, c, None)), 2)
            assert abs(after - before) < 1e-12

    def test_size_mismatch(self):
        s = initial_spectrum(zeros_tableau(2))
        with pytest.raises(ValidationError):
            apply_block(s, LayerBlock(1, None, RotationVector.continuous((0.1,))))


class TestOrthogonality:
    def test_generic_blocks_are_isometries(self):
        rng = np.random.default_rng(8)
        for n in (1, 2, 3):
            block = LayerBlock(
                n, random_clifford(n, rng),
                RotationVector.continuous(tuple(rng.uniform(0, 1, n))),
            )
            assert transfer_orthogonality_check(block, trials=30, seed=0) < 1e-9


class TestCircuitJson:
    def test_default_initial_is_plus(self):
        parsed = circuit_from_json({"n": 2, "layers": []})
        assert parsed.initial == plus_tableau(2)

    def test_explicit_initial(self):
        parsed = circuit_from_json(
            {"n": 1, "initial": {"n": 1, "generators": ["+Z"]}, "layers": []}
        )
        assert parsed.initial == zeros_tableau(1)

    def test_layer_kinds(self):
        parsed = circuit_from_json(
            {
                "n": 2,
                "layers": [
                    {"clifford": [["H", 0], ["CX", 0, 1]]},
                    {"sqr": {"m": 3, "k": [1, 0]}},
                    {"gate": {"n": 2, "terms": [{"m": 2, "a": "11", "c": 1}]}},
                ],
            }
        )
        kinds = [kind for kind, _ in parsed.layers]
        assert kinds == ["clifford", "sqr", "gate"]

    def test_sqr_blocks_found(self):
        parsed = circuit_from_json(
            {
                "n": 1,
                "layers": [
                    {"clifford": [["H", 0]]},
                    {"sqr": {"m": 3, "k": [1]}},
                    {"clifford": [["S", 0]]},
                    {"sqr": {"w": [0.3]}},
                ],
            }
        )
        blocks = parsed.sqr_blocks()
        assert blocks is not None and len(blocks) == 2
        assert blocks[0].clifford.gates == (("H", 0),)
        assert blocks[1].w == RotationVector.continuous((0.3,))

    def test_sqr_blocks_refused_for_general_gates(self):
        parsed = circuit_from_json(
            {"n": 2, "layers": [{"gate": {"n": 2, "terms": [{"m": 3, "a": "11", "c": 1}]}}]}
        )
        assert parsed.sqr_blocks() is None

    def test_bad_layer(self):
        with pytest.raises(ValidationError):
            circuit_from_json({"n": 1, "layers": [{"what": 1}]})

    def test_missing_n(self):
        with pytest.raises(ValidationError):
            circuit_from_json({"layers": []})
