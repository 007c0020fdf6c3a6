"""Heisenberg transfer of Pauli spectra through Clifford + rotation blocks.

A block is a Clifford circuit C followed by a layer of single-qubit Z
rotations U_w.  For the output state the spectrum entry at label (x, z) is

    a'(x, z) = sum over submasks u of x of
               Gamma_x(u; w) * (-1)^(|u| + u.z) * sgn * a(pre(x, z^u))

where (sgn, pre) come from conjugating P(x, z^u) by C^dagger with exact signs,
and Gamma_x(u; w) multiplies cos(2 pi w_j) on qubits of x outside u and
sin(2 pi w_j) on qubits inside u.  Everything is derived in the Heisenberg
picture (conjugate the observable, keep the state), which fixes the
(-1)^|u| sign; the same convention is used by the optimizer objective.

Clifford conjugation comes in two forms that are tested against each other:
a scalar exact fold over gate image tables (`conjugate_label`) and a
vectorized whole-register update used to build lookup tables for all 4**n
labels at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Sequence

import numpy as np

from ._bits import parity
from .errors import CapacityError, ValidationError
from .pauli_core import MAX_QUBITS, PauliLabel, pauli_mul, to_index
from .diagonal_gates import PhasePolynomial, RotationVector

if TYPE_CHECKING:
    from .stabilizer import StabilizerTableau
    from .spectrum import PauliSpectrum

MAX_BLOCK_QUBITS = 8

_CLIFFORD_GATES = ("H", "S", "X", "Z", "CX", "CZ")


def _gate_qubits(n: int, gate: tuple) -> tuple[str, list[int]]:
    name = str(gate[0]).upper()
    if name not in _CLIFFORD_GATES:
        raise ValidationError(f"unsupported Clifford gate {gate[0]!r}")
    qs = [int(q) for q in gate[1:]]
    want = 2 if name in ("CX", "CZ") else 1
    if len(qs) != want:
        raise ValidationError(f"{name} takes {want} qubit(s), got {gate!r}")
    for q in qs:
        if not 0 <= q < n:
            raise ValidationError(f"qubit index {q} outside 0..{n - 1} in {gate!r}")
    if want == 2 and qs[0] == qs[1]:
        raise ValidationError(f"two-qubit gate on a single wire: {gate!r}")
    return name, qs


def _gate_images(n: int, name: str, qs: list[int]) -> dict[tuple[str, int], PauliLabel]:
    """Images of the single-qubit basis labels under u (.) u^dagger."""
    e = lambda j: 1 << j
    if name == "H":
        (j,) = qs
        return {("X", j): PauliLabel(n, 0, e(j)), ("Z", j): PauliLabel(n, e(j), 0)}
    if name == "S":
        (j,) = qs
        return {("X", j): PauliLabel(n, e(j), e(j)), ("Z", j): PauliLabel(n, 0, e(j))}
    if name == "X":
        (j,) = qs
        return {("X", j): PauliLabel(n, e(j), 0), ("Z", j): PauliLabel(n, 0, e(j), 2)}
    if name == "Z":
        (j,) = qs
        return {("X", j): PauliLabel(n, e(j), 0, 2), ("Z", j): PauliLabel(n, 0, e(j))}
    if name == "CX":
        c, t = qs
        return {
            ("X", c): PauliLabel(n, e(c) | e(t), 0),
            ("X", t): PauliLabel(n, e(t), 0),
            ("Z", c): PauliLabel(n, 0, e(c)),
            ("Z", t): PauliLabel(n, 0, e(c) | e(t)),
        }
    # CZ
    a, b = qs
    return {
        ("X", a): PauliLabel(n, e(a), e(b)),
        ("X", b): PauliLabel(n, e(b), e(a)),
        ("Z", a): PauliLabel(n, 0, e(a)),
        ("Z", b): PauliLabel(n, 0, e(b)),
    }


def conjugate_label(gate: tuple, p: PauliLabel) -> PauliLabel:
    """u p u^dagger for one gate, exact phase included.

    Splits the label into i^phase * X^x Z^z, replaces the factors on the
    gate's qubits by their images, and remultiplies with pauli_mul.  Slow and
    trustworthy; the vectorized path is checked against this.
    """
    n = p.n
    name, qs = _gate_qubits(n, gate)
    images = _gate_images(n, name, qs)
    qmask = 0
    for q in qs:
        qmask |= 1 << q
    x_rest, z_rest = p.x & ~qmask, p.z & ~qmask
    phase = (
        p.phase_exp
        + (p.x & p.z).bit_count()
        - (x_rest & z_rest).bit_count()
    ) & 3
    acc = PauliLabel(n, x_rest, z_rest, phase)
    for q in qs:
        if (p.x >> q) & 1:
            acc = pauli_mul(acc, images[("X", q)])
    for q in qs:
        if (p.z >> q) & 1:
            acc = pauli_mul(acc, images[("Z", q)])
    return acc


def _conjugate_arrays(n: int, gate: tuple, X: np.ndarray, Z: np.ndarray, PH: np.ndarray) -> None:
    """In-place u (.) u^dagger on parallel label arrays (closed-form updates)."""
    name, qs = _gate_qubits(n, gate)
    if name == "H":
        (j,) = qs
        xj, zj = (X >> j) & 1, (Z >> j) & 1
        PH += 2 * (xj & zj)
        diff = (xj ^ zj) << j
        X ^= diff
        Z ^= diff
    elif name == "S":
        (j,) = qs
        xj, zj = (X >> j) & 1, (Z >> j) & 1
        PH += 2 * (xj & zj)
        Z ^= xj << j
    elif name == "X":
        (j,) = qs
        PH += 2 * ((Z >> j) & 1)
    elif name == "Z":
        (j,) = qs
        PH += 2 * ((X >> j) & 1)
    elif name == "CX":
        c, t = qs
        xc, zc = (X >> c) & 1, (Z >> c) & 1
        xt, zt = (X >> t) & 1, (Z >> t) & 1
        zc2 = zc ^ zt
        xt2 = xt ^ xc
        PH += (xc & zc) + (xt & zt) - (xc & zc2) - (xt2 & zt)
        X ^= (xt ^ xt2) << t
        Z ^= (zc ^ zc2) << c
    else:  # CZ
        a, b = qs
        xa, za = (X >> a) & 1, (Z >> a) & 1
        xb, zb = (X >> b) & 1, (Z >> b) & 1
        za2 = za ^ xb
        zb2 = zb ^ xa
        PH += (xa & za) + (xb & zb) - (xa & za2) - (xb & zb2) + 2 * (xa & xb)
        Z ^= ((za ^ za2) << a) | ((zb ^ zb2) << b)
    PH &= 3


@dataclass
class CliffordOp:
    """A Clifford circuit as an ordered gate list; qubit indices are 0-based."""

    n: int
    gates: tuple[tuple, ...] = ()
    _tables: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValidationError(f"n={self.n} outside 1..{MAX_QUBITS}")
        gates = []
        for gate in self.gates:
            name, qs = _gate_qubits(self.n, tuple(gate))
            gates.append((name, *qs))
        self.gates = tuple(gates)

    def inverse(self) -> "CliffordOp":
        inv: list[tuple] = []
        for gate in reversed(self.gates):
            if gate[0] == "S":
                inv += [gate, gate, gate]
            else:
                inv.append(gate)
        return CliffordOp(self.n, tuple(inv))

    def conjugate(self, p: PauliLabel) -> PauliLabel:
        """C p C^dagger with exact phase, by folding over the gates in order."""
        if p.n != self.n:
            raise ValidationError(f"label on {p.n} qubits, circuit on {self.n}")
        out = p
        for gate in self.gates:
            out = conjugate_label(gate, out)
        return out

    def heisenberg_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(perm, sign) with C^dagger P(v) C = sign[v] * P(perm[v]) for all labels.

        Cached on the instance; needs 4**n entries.
        """
        if "heis" in self._tables:
            return self._tables["heis"]
        n = self.n
        if n > MAX_BLOCK_QUBITS:
            raise CapacityError(f"label tables cap is n={MAX_BLOCK_QUBITS}, got {n}")
        size = 1 << n
        v = np.arange(size * size, dtype=np.int64)
        X = v >> n
        Z = v & (size - 1)
        PH = np.zeros(size * size, dtype=np.int64)
        for gate in self.inverse().gates:
            _conjugate_arrays(n, gate, X, Z, PH)
        if np.any(PH % 2 != 0):
            raise ValidationError("Clifford conjugation produced imaginary phases")
        perm = (X << n) | Z
        sign = np.where(PH == 0, 1.0, -1.0)
        self._tables["heis"] = (perm, sign)
        return perm, sign


def clifford_conjugate(c: CliffordOp, p: PauliLabel) -> tuple[int, PauliLabel]:
    """Forward image as a (sign, canonical label) pair: c p c^dagger = sign * image.

    Only defined for Hermitian inputs (even phase_exp); the sign absorbs the
    whole residual phase, so the returned image always has phase_exp 0.
    """
    out = c.conjugate(p)
    if out.phase_exp % 2:
        raise ValidationError("sign split needs a Hermitian label (even phase_exp)")
    sign = 1 if out.phase_exp == 0 else -1
    return sign, PauliLabel(out.n, out.x, out.z, 0)


def identity_clifford(n: int) -> CliffordOp:
    return CliffordOp(n, ())


def random_clifford(n: int, rng: np.random.Generator, length: int | None = None) -> CliffordOp:
    """Random gate string; long enough defaults to scramble at these sizes."""
    if length is None:
        length = 3 * n * n + 2 * n
    gates: list[tuple] = []
    one_q = ["H", "S", "X", "Z"]
    for _ in range(length):
        if n > 1 and rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append((("CX", "CZ")[int(rng.integers(2))], int(a), int(b)))
        else:
            gates.append((one_q[int(rng.integers(4))], int(rng.integers(n))))
    return CliffordOp(n, tuple(gates))


@dataclass(frozen=True)
class LayerBlock:
    """One transfer block: optional Clifford circuit, then optional rotation layer."""

    n: int
    clifford: CliffordOp | None = None
    w: RotationVector | None = None

    def __post_init__(self) -> None:
        if self.clifford is not None and self.clifford.n != self.n:
            raise ValidationError("block Clifford is on the wrong number of qubits")
        if self.w is not None and self.w.n != self.n:
            raise ValidationError("block rotation is on the wrong number of qubits")


def gamma(x: int, u: int, w: RotationVector) -> float:
    """Mixing coefficient Gamma_x(u; w); requires u to be a submask of x."""
    if u & ~x:
        raise ValidationError(f"u={u:#x} is not a submask of x={x:#x}")
    out = 1.0
    for j, wj in enumerate(w.angles()):
        if (x >> j) & 1:
            t = 2.0 * np.pi * wj
            out *= np.sin(t) if (u >> j) & 1 else np.cos(t)
    return float(out)


def _gamma_vector(x: int, angles: Sequence[float]) -> dict[int, float]:
    """Gamma over every submask u of x, built by per-qubit extension."""
    table = {0: 1.0}
    for j, wj in enumerate(angles):
        if not (x >> j) & 1:
            continue
        t = 2.0 * np.pi * wj
        c, s = np.cos(t), np.sin(t)
        nxt: dict[int, float] = {}
        for u, g in table.items():
            nxt[u] = g * c
            nxt[u | (1 << j)] = g * s
        table = nxt
    return table


def _mix_sqr_raw(n: int, arr: np.ndarray, angles: Sequence[float]) -> np.ndarray:
    """Rotation-layer mixing on a raw length-4**n vector, sector by sector."""
    size = 1 << n
    zs = np.arange(size, dtype=np.int64)
    out = np.empty_like(arr)
    for x in range(size):
        sector = arr[x * size:(x + 1) * size]
        gam = _gamma_vector(x, angles)
        acc = np.zeros(size, dtype=arr.dtype)
        for u, g in gam.items():
            if g == 0.0:
                continue
            signs = 1.0 - 2.0 * ((parity(zs & u) + (u.bit_count() & 1)) & 1)
            acc += g * signs * sector[zs ^ u]
        out[x * size:(x + 1) * size] = acc
    return out


def _apply_block_raw(arr: np.ndarray, block: LayerBlock) -> np.ndarray:
    out = arr
    if block.clifford is not None:
        perm, sign = block.clifford.heisenberg_table()
        out = sign * out[perm]
    if block.w is not None:
        out = _mix_sqr_raw(block.n, out, block.w.angles())
    return out


def initial_spectrum(t: "StabilizerTableau") -> "PauliSpectrum":
    """Exact signed spectrum of a stabilizer state: +-1 on the group, 0 off it."""
    from .spectrum import PauliSpectrum
    from .stabilizer import canonicalize, group_elements

    if t.n > MAX_BLOCK_QUBITS:
        raise CapacityError(f"spectrum cap is n={MAX_BLOCK_QUBITS}, got {t.n}")
    values = np.zeros(1 << (2 * t.n), dtype=np.float64)
    for elem in group_elements(canonicalize(t)):
        if elem.phase_exp % 2 != 0:
            raise ValidationError("group walk produced a non-Hermitian element")
        values[to_index(PauliLabel(t.n, elem.x, elem.z))] = 1.0 if elem.phase_exp == 0 else -1.0
    return PauliSpectrum(t.n, values, kind="real_signed")


def apply_block(s: "PauliSpectrum", block: LayerBlock) -> "PauliSpectrum":
    """Push a real signed spectrum through one Clifford + rotation block."""
    from .spectrum import PauliSpectrum

    if s.kind != "real_signed":
        raise ValidationError("transfer blocks act on real signed spectra only")
    if block.n != s.n:
        raise ValidationError(f"block on {block.n} qubits, spectrum on {s.n}")
    values = _apply_block_raw(np.asarray(s.values, dtype=np.float64), block)
    return PauliSpectrum(s.n, values, kind="real_signed")


def transfer_orthogonality_check(block: LayerBlock, trials: int, seed: int = 0) -> float:
    """Max norm deviation of the raw block map over random unit vectors.

    The vectors are generic, not physical spectra; the map must still be an
    isometry of R^(4**n).
    """
    rng = np.random.default_rng(seed)
    size = 1 << (2 * block.n)
    worst = 0.0
    for _ in range(trials):
        g = rng.standard_normal(size)
        g /= np.linalg.norm(g)
        worst = max(worst, abs(float(np.linalg.norm(_apply_block_raw(g, block))) - 1.0))
    return worst


@dataclass(frozen=True)
class ParsedCircuit:
    """Circuit JSON: initial stabilizer state plus an ordered layer list.

    Layers are ("clifford", CliffordOp), ("sqr", RotationVector) or
    ("gate", PhasePolynomial).  The initial state defaults to |+...+>.
    """

    n: int
    initial: "StabilizerTableau"
    layers: tuple[tuple, ...]

    def sqr_blocks(self) -> list[LayerBlock] | None:
        """Merge into Clifford+rotation blocks; None if a general gate appears."""
        blocks: list[LayerBlock] = []
        pending: list[tuple] = []
        for kind, obj in self.layers:
            if kind == "clifford":
                pending.extend(obj.gates)
            elif kind == "sqr":
                blocks.append(LayerBlock(self.n, CliffordOp(self.n, tuple(pending)), obj))
                pending = []
            else:
                return None
        if pending:
            blocks.append(LayerBlock(self.n, CliffordOp(self.n, tuple(pending)), None))
        return blocks


def circuit_from_json(obj: Mapping) -> ParsedCircuit:
    from .stabilizer import StabilizerTableau, plus_tableau

    try:
        n = int(obj["n"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"circuit JSON needs an integer 'n': {exc}") from exc
    if "initial" in obj:
        initial = StabilizerTableau.from_json(obj["initial"])
        if initial.n != n:
            raise ValidationError("initial tableau size disagrees with circuit n")
    else:
        initial = plus_tableau(n)
    layers: list[tuple] = []
    for i, layer in enumerate(obj.get("layers", [])):
        if not isinstance(layer, Mapping) or len(layer) != 1:
            raise ValidationError(f"layer {i} must be a single-key object")
        (kind, body), = layer.items()
        if kind == "clifford":
            layers.append(("clifford", CliffordOp(n, tuple(tuple(g) for g in body))))
        elif kind == "sqr":
            w = RotationVector.from_json(body)
            if w.n != n:
                raise ValidationError(f"layer {i} rotation has {w.n} angles, circuit has n={n}")
            layers.append(("sqr", w))
        elif kind == "gate":
            f = PhasePolynomial.from_json({"n": n, **body} if "terms" in body or "sqr" in body else body)
            if f.n != n:
                raise ValidationError(f"layer {i} gate is on {f.n} qubits, circuit has n={n}")
            layers.append(("gate", f))
        else:
            raise ValidationError(f"layer {i} has unknown kind {kind!r}")
    return ParsedCircuit(n, initial, tuple(layers))
