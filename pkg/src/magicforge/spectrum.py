"""Closed-form Pauli spectra of diagonal gates on stabilizer states, and the
magic functionals evaluated on spectra.

For a stabilizer input with canonical data (r, pure-Z rows z_i, signs h'_i,
coset references x -> (z_ref, s0)) and a diagonal gate with phase function
theta, the output expectation at label (x, z) is

    a(x, z) = i^(x.z) * (2^r / 2^n) * (-1)^s0 * i^(x.z_ref) * (-1)^(z_ref.x)
              * sum over support b of
                    e^(2 pi i (theta(b) - theta(b^x))) (-1)^(z_ref.b) (-1)^(z.b)

where the support is the set of b with b.z_i = h'_i for every pure-Z row.
Labels with x outside the X-part row space are zero; equivalently some
x.z_i is odd there, which is the only place the integer obstruction
k_i = (x.z_i mod 4)/2 matters.  The z sum over each x sector is a plain
Walsh-Hadamard transform of the masked phase vector.

Only magnitudes are gauge independent: (z_ref, s0) are a fixed choice of
coset representative (smallest z index), and different choices rotate each
x sector by a phase.  Entries at x = 0 carry no gauge and reproduce the
tableau expectations exactly.

Dense enumeration is capped at n = 8 (4**n = 65536 entries).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from ._bits import parity, popcount
from .diagonal_gates import PhasePolynomial, RotationVector, theta_diff
from .errors import CapacityError, ValidationError

if TYPE_CHECKING:
    from .stabilizer import CanonicalTableau

MAX_SPECTRUM_QUBITS = 8

_KINDS = ("real_signed", "complex_gauged")


@dataclass(frozen=True)
class PauliSpectrum:
    """All 4**n Pauli expectations of a pure state, indexed x * 2**n + z.

    real_signed spectra are float valued (stabilizer states, transfer
    outputs); complex_gauged spectra carry per-sector phases fixed by the
    evaluator's coset gauge.  Both satisfy sum |a|^2 = 2**n and a = 1 at the
    identity label, checked on construction to 1e-9.
    """

    n: int
    values: np.ndarray
    kind: str

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_SPECTRUM_QUBITS:
            raise CapacityError(f"spectra support 1..{MAX_SPECTRUM_QUBITS} qubits, got {self.n}")
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown spectrum kind {self.kind!r}")
        dtype = np.float64 if self.kind == "real_signed" else np.complex128
        vals = np.asarray(self.values, dtype=dtype)
        if vals.shape != (1 << (2 * self.n),):
            raise ValidationError(
                f"spectrum has shape {vals.shape}, expected ({1 << (2 * self.n)},)"
            )
        total = math.fsum(np.abs(vals) ** 2)
        if abs(total - float(1 << self.n)) > 1e-9:
            raise ValidationError(f"spectrum norm {total!r} != 2**n")
        if abs(complex(vals[0]) - 1.0) > 1e-9:
            raise ValidationError(f"identity entry is {vals[0]!r}, expected 1")
        object.__setattr__(self, "values", vals)

    def abs2(self) -> np.ndarray:
        a = np.abs(self.values)
        return a * a

    def entry(self, x: int, z: int):
        return self.values[(x << self.n) | z]


def _fwht(vec: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform, out[z] = sum_b vec[b] (-1)^(z.b)."""
    out = vec.copy()
    h = 1
    while h < out.size:
        for start in range(0, out.size, 2 * h):
            a = out[start:start + h]
            b = out[start + h:start + 2 * h]
            a, b = a + b, a - b
            out[start:start + h] = a
            out[start + h:start + 2 * h] = b
        h *= 2
    return out


def _sector_gauge(c: "CanonicalTableau", x: int) -> tuple[int, int, complex]:
    """(z_ref, s0, scalar) for one x sector; scalar collects all b-independent
    factors except i^(x.z)."""
    z_ref, s0 = c.cosets[x]
    scale = float(1 << c.r) / float(1 << c.n)
    phase = (1j) ** ((x & z_ref).bit_count() & 3)
    sign = -1.0 if s0 else 1.0
    ref_sign = -1.0 if (z_ref & x).bit_count() & 1 else 1.0
    return z_ref, s0, scale * sign * phase * ref_sign


def _finish_sector(n: int, x: int, row: np.ndarray, scalar: complex, out: np.ndarray) -> None:
    size = 1 << n
    zs = np.arange(size, dtype=np.int64)
    ixz = (1j) ** (popcount(np.int64(x) & zs) & 3)
    out[x * size:(x + 1) * size] = ixz * scalar * row


def shallow_spectrum(c: "CanonicalTableau", f: PhasePolynomial) -> PauliSpectrum:
    """Exact spectrum of (diagonal gate) applied to the canonicalized state."""
    n = c.n
    if n > MAX_SPECTRUM_QUBITS:
        raise CapacityError(f"shallow_spectrum cap is n={MAX_SPECTRUM_QUBITS}, got {n}")
    if f.n != n:
        raise ValidationError(f"gate on {f.n} qubits, state on {n}")
    size = 1 << n
    supp = c.support_states()
    out = np.zeros(size * size, dtype=np.complex128)
    for x in c.cosets:
        for z_i in c.z_pure:
            if (x & z_i).bit_count() & 1:
                raise ValidationError("coset element with odd pure-Z overlap")
        z_ref, _, scalar = _sector_gauge(c, x)
        v = np.zeros(size, dtype=np.complex128)
        for b in supp:
            turn = theta_diff(f, b, x)
            amp = np.exp(2j * np.pi * float(turn)) if turn else 1.0
            if (z_ref & b).bit_count() & 1:
                amp = -amp
            v[b] = amp
        _finish_sector(n, x, _fwht(v), scalar, out)
    return PauliSpectrum(n, out, kind="complex_gauged")


def sqr_shallow_spectrum(c: "CanonicalTableau", w: RotationVector) -> PauliSpectrum:
    """Same spectrum for a single-qubit-rotation layer, no polynomial needed.

    Here theta(b) - theta(b^x) is linear: 2*(w on x).b - (w on x).1, so the
    masked phase vector is assembled directly from the angles.  Works for
    continuous angles; for dyadic angles it must agree with shallow_spectrum
    of the equivalent polynomial to near machine precision.
    """
    n = c.n
    if n > MAX_SPECTRUM_QUBITS:
        raise CapacityError(f"sqr_shallow_spectrum cap is n={MAX_SPECTRUM_QUBITS}, got {n}")
    if w.n != n:
        raise ValidationError(f"rotation on {w.n} qubits, state on {n}")
    size = 1 << n
    supp = np.asarray(c.support_states(), dtype=np.int64)
    angles = np.asarray(w.angles(), dtype=np.float64)
    bits = ((supp[:, None] >> np.arange(n)) & 1).astype(np.float64)  # [b, j]
    out = np.zeros(size * size, dtype=np.complex128)
    for x in c.cosets:
        z_ref, _, scalar = _sector_gauge(c, x)
        wx = np.where((x >> np.arange(n)) & 1 == 1, angles, 0.0)
        turns = 2.0 * (bits @ wx) - float(np.sum(wx))
        amps = np.exp(2j * np.pi * turns)
        amps *= 1.0 - 2.0 * parity(supp & z_ref)
        v = np.zeros(size, dtype=np.complex128)
        v[supp] = amps
        _finish_sector(n, x, _fwht(v), scalar, out)
    return PauliSpectrum(n, out, kind="complex_gauged")


def f_alpha(s: PauliSpectrum, alpha: int = 2) -> float:
    """Magic functional F_alpha = sum |a|^(2 alpha), compensated summation."""
    if int(alpha) != alpha or alpha < 2:
        raise ValidationError(f"alpha must be an integer >= 2, got {alpha!r}")
    a2 = s.abs2()
    return math.fsum((a2 ** int(alpha)).tolist())


def sre(s: PauliSpectrum, alpha: int = 2) -> float:
    """Stabilizer Renyi entropy M_alpha; 0 exactly on stabilizer states."""
    f = f_alpha(s, alpha)
    a = int(alpha)
    return math.log2(f * 2.0 ** (-s.n * a)) / (1 - a) - s.n


def nullity(s: PauliSpectrum) -> float:
    """n - log2 of the number of unit-magnitude entries (|a| within 1e-9 of 1)."""
    count = int(np.count_nonzero(np.abs(np.abs(s.values) - 1.0) <= 1e-9))
    if count < 1:
        raise ValidationError("no unit entries; identity entry should always qualify")
    return s.n - math.log2(count)


def support_size(s: PauliSpectrum, threshold: float = 1e-12) -> int:
    """Number of labels with |a|^2 above the threshold."""
    return int(np.count_nonzero(s.abs2() > threshold))


def flat_bound(n: int, alpha: int = 2) -> float:
    """Lower bound on F_alpha from flattening all non-identity weight:
    1 + (2**n - 1) * 2**(n (1 - alpha))."""
    if int(alpha) != alpha or alpha < 2:
        raise ValidationError(f"alpha must be an integer >= 2, got {alpha!r}")
    return 1.0 + (2.0 ** n - 1.0) * 2.0 ** (n * (1 - int(alpha)))


def stabilizer_max(n: int) -> float:
    """Upper bound on F_alpha over these circuits: the stabilizer value 2**n."""
    return float(1 << n)


def spectrum_csv_rows(s: PauliSpectrum) -> list[tuple[str, str, float, float, float]]:
    """Rows (x_bits, z_bits, re, im, abs2) with qubit 1 leftmost in the strings."""
    rows = []
    size = 1 << s.n
    for v in range(size * size):
        x, z = v >> s.n, v & (size - 1)
        val = complex(s.values[v])
        rows.append(
            (
                format(x, f"0{s.n}b")[::-1],
                format(z, f"0{s.n}b")[::-1],
                val.real,
                val.imag,
                abs(val) ** 2,
            )
        )
    return rows
