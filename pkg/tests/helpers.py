"""Dense linear-algebra builders for cross-checking, written from definitions.

Everything here is constructed from 2x2 matrices and numpy.kron, with no
imports from the package's numeric code paths, so tests that compare package
output against these helpers exercise a genuinely independent route.

Conventions under test: basis index bit j holds the value of qubit j+1
(qubit 1 is the least significant bit), and a Pauli label means
i**phase_exp * i**(popcount(x & z)) * X^x Z^z.
"""

from __future__ import annotations

import numpy as np

from magicforge.pauli_core import PauliLabel

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S2 = np.diag([1, 1j]).astype(complex)


def embed(n: int, op: np.ndarray, qubits: list[int]) -> np.ndarray:
    """Tensor-embed a k-qubit op acting on 0-based ``qubits`` into n qubits.

    Built by applying the op amplitude-wise over the selected index bits, so
    the qubit-1-is-LSB convention is explicit rather than inherited from a
    kron ordering.
    """
    k = len(qubits)
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        sub_in = 0
        for pos, q in enumerate(qubits):
            sub_in |= ((col >> q) & 1) << pos
        base = col
        for q in qubits:
            base &= ~(1 << q)
        for sub_out in range(1 << k):
            amp = op[sub_out, sub_in]
            if amp == 0:
                continue
            row = base
            for pos, q in enumerate(qubits):
                row |= ((sub_out >> pos) & 1) << q
            out[row, col] += amp
    return out


def kron_chain(mats: list[np.ndarray]) -> np.ndarray:
    """kron with mats[0] acting on qubit 1 (the LSB), mats[-1] on qubit n."""
    out = np.array([[1]], dtype=complex)
    for m in mats:
        out = np.kron(m, out)
    return out


def pauli_matrix(p: PauliLabel) -> np.ndarray:
    """Dense matrix of a labelled Pauli, from the X^x Z^z action on basis states."""
    dim = 1 << p.n
    mat = np.zeros((dim, dim), dtype=complex)
    for b in range(dim):
        sign = -1.0 if ((b & p.z).bit_count() & 1) else 1.0
        mat[b ^ p.x, b] = sign
    phase = 1j ** ((p.phase_exp + (p.x & p.z).bit_count()) & 3)
    return phase * mat


_ONE_QUBIT = {"H": H2, "S": S2, "X": X2, "Z": Z2}


def gate_matrix(n: int, gate: tuple) -> np.ndarray:
    name = gate[0]
    if name in _ONE_QUBIT:
        return embed(n, _ONE_QUBIT[name], [gate[1]])
    if name == "CX":
        # control = first listed qubit (sub-index bit 0), target = second
        cx = np.zeros((4, 4), dtype=complex)
        for b in range(4):
            c, t = b & 1, (b >> 1) & 1
            cx[(c | ((t ^ c) << 1)), b] = 1.0
        return embed(n, cx, [gate[1], gate[2]])
    if name == "CZ":
        cz = np.diag([1, 1, 1, -1]).astype(complex)
        return embed(n, cz, [gate[1], gate[2]])
    raise ValueError(f"unknown gate {name!r}")


def circuit_matrix(n: int, gates) -> np.ndarray:
    out = np.eye(1 << n, dtype=complex)
    for g in gates:
        out = gate_matrix(n, g) @ out
    return out


def stabilizer_dense(tableau) -> np.ndarray:
    """Unit vector from the projector product (1 + sign*P)/2 over generators."""
    n = tableau.n
    dim = 1 << n
    proj = np.eye(dim, dtype=complex)
    for row, hb in zip(tableau.rows, tableau.h):
        sign = -1.0 if hb else 1.0
        proj = proj @ (np.eye(dim, dtype=complex) + sign * pauli_matrix(row)) / 2.0
    for col in range(dim):
        v = proj[:, col]
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            return v / norm
    raise AssertionError("projector annihilated every basis column")


def diagonal_matrix(f) -> np.ndarray:
    """Dense diagonal of a phase polynomial from its exact per-state values."""
    angles = [float(f.evaluate(b)) for b in range(1 << f.n)]
    return np.diag(np.exp(2j * np.pi * np.array(angles)))


def rotation_matrix(w) -> np.ndarray:
    """Dense diagonal of a single-qubit-rotation layer."""
    angles = w.angles()
    diag = np.ones(1 << w.n, dtype=complex)
    for b in range(1 << w.n):
        theta = sum(angles[j] for j in range(w.n) if (b >> j) & 1)
        diag[b] = np.exp(2j * np.pi * theta)
    return np.diag(diag)


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    return abs(np.vdot(u, v)) ** 2
