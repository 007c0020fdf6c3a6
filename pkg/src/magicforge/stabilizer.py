"""Stabilizer tableaux with exact sign tracking.

A tableau holds n commuting, independent generator rows.  Row i is the signed
operator ``(-1)^h[i] * P(x_i, z_i)`` where the row label itself is kept at
``phase_exp = 0``; all sign information lives in the ``h`` bits.  Internally
the algorithms absorb ``h`` into ``phase_exp = 2*h`` so that ``pauli_mul``
composes rows exactly.

Canonical form: generators are re-chosen (row operations only, same group) so
the x-parts of the mixed rows are in reduced row echelon form with pivots in
ascending qubit order, followed by r pure-Z rows whose z-parts are in RREF.
On top of the block shape we store, for every x in the X-part row space, the
group element with the smallest z index: the pair (z_ref, s0).  Those
references fix the gauge used by the closed-form spectrum evaluator; only
entry magnitudes are gauge independent.

The canonical coset table enumerates all 2**n group elements, so
canonicalization is capped at n = 16.  Plain tableau construction and row
validation work to the 32-qubit mask cap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CapacityError, ValidationError
from .pauli_core import (
    PauliLabel,
    commutes,
    pauli_from_text,
    pauli_mul,
    pauli_to_text,
)

MAX_CANONICAL_QUBITS = 16


def _f2_rank(vectors: list[int]) -> int:
    rank = 0
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
            rank += 1
    return rank


@dataclass(frozen=True)
class StabilizerTableau:
    """n signed commuting independent Pauli generators on n qubits."""

    n: int
    rows: tuple[PauliLabel, ...]
    h: tuple[int, ...]

    def __post_init__(self) -> None:
        rows = tuple(self.rows)
        h = tuple(int(b) & 1 for b in self.h)
        if len(rows) != self.n or len(h) != self.n:
            raise ValidationError(f"need exactly n={self.n} rows and sign bits")
        for i, row in enumerate(rows):
            if row.n != self.n:
                raise ValidationError(f"row {i} is on {row.n} qubits, tableau on {self.n}")
            if row.phase_exp != 0:
                raise ValidationError(f"row {i} must be a phase_exp=0 label; signs go in h")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if not commutes(rows[i], rows[j]):
                    raise ValidationError(f"rows {i} and {j} anticommute")
        vecs = [(row.x << self.n) | row.z for row in rows]
        if _f2_rank(vecs) != self.n:
            raise ValidationError("generator rows are not independent")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "h", h)

    def signed_rows(self) -> list[PauliLabel]:
        """Rows with the sign absorbed as phase_exp = 2*h, ready for pauli_mul."""
        return [
            PauliLabel(self.n, row.x, row.z, 2 * hb) for row, hb in zip(self.rows, self.h)
        ]

    def to_json(self) -> dict:
        gens = []
        for row, hb in zip(self.rows, self.h):
            text = pauli_to_text(PauliLabel(self.n, row.x, row.z, 2 * hb))
            gens.append(text)
        return {"n": self.n, "generators": gens}

    @classmethod
    def from_json(cls, obj: Mapping) -> "StabilizerTableau":
        try:
            n = int(obj["n"])
            texts = list(obj["generators"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed tableau JSON: {exc}") from exc
        rows, h = [], []
        for s in texts:
            p = pauli_from_text(str(s), n)
            if p.phase_exp % 2 != 0:
                raise ValidationError(f"generator {s!r} has an imaginary sign")
            rows.append(PauliLabel(n, p.x, p.z, 0))
            h.append(p.phase_exp // 2)
        return cls(n, tuple(rows), tuple(h))


def zeros_tableau(n: int) -> StabilizerTableau:
    """|0...0>: generators Z_1 .. Z_n, all positive."""
    rows = tuple(PauliLabel(n, 0, 1 << j) for j in range(n))
    return StabilizerTableau(n, rows, (0,) * n)


def plus_tableau(n: int) -> StabilizerTableau:
    """|+...+>: generators X_1 .. X_n, all positive."""
    rows = tuple(PauliLabel(n, 1 << j, 0) for j in range(n))
    return StabilizerTableau(n, rows, (0,) * n)


def product_tableau(n: int, frozen: Mapping[int, int]) -> StabilizerTableau:
    """|v>_S tensor |+> elsewhere; ``frozen`` maps 1-based qubits to bit values."""
    if not isinstance(frozen, Mapping):
        raise ValidationError("frozen must map 1-based qubit indices to bit values")
    rows, h = [], []
    for j in range(n):
        if j + 1 in frozen:
            bit = int(frozen[j + 1]) & 1
            rows.append(PauliLabel(n, 0, 1 << j))
            h.append(bit)
        else:
            rows.append(PauliLabel(n, 1 << j, 0))
            h.append(0)
    return StabilizerTableau(n, tuple(rows), tuple(h))


@dataclass(frozen=True)
class CanonicalTableau:
    """Canonicalized tableau plus the gauge references used by the evaluator.

    rows/h: the re-chosen generators, mixed block first (x-parts in RREF),
    then r pure-Z rows (z-parts in RREF).  cosets maps each x in the X-part
    row space to (z_ref, s0): the group element with x-part x and smallest
    z index, with its sign bit.
    """

    base: StabilizerTableau
    n: int
    r: int
    rows: tuple[PauliLabel, ...]
    h: tuple[int, ...]
    cosets: Mapping[int, tuple[int, int]]

    @property
    def x_mixed(self) -> tuple[int, ...]:
        return tuple(row.x for row in self.rows[: self.n - self.r])

    @property
    def z_mixed(self) -> tuple[int, ...]:
        return tuple(row.z for row in self.rows[: self.n - self.r])

    @property
    def z_pure(self) -> tuple[int, ...]:
        return tuple(row.z for row in self.rows[self.n - self.r:])

    @property
    def h_mixed(self) -> tuple[int, ...]:
        return self.h[: self.n - self.r]

    @property
    def h_prime(self) -> tuple[int, ...]:
        return self.h[self.n - self.r:]

    def support_states(self) -> list[int]:
        """Basis states b with b.z_i = h'_i for every pure-Z row (2**(n-r) many)."""
        out = []
        zs = self.z_pure
        hp = self.h_prime
        for b in range(1 << self.n):
            if all((b & z).bit_count() & 1 == hb for z, hb in zip(zs, hp)):
                out.append(b)
        return out


def group_elements(c: CanonicalTableau) -> list[PauliLabel]:
    """All 2**n signed group elements as phase-absorbed labels."""
    signed = [
        PauliLabel(c.n, row.x, row.z, 2 * hb) for row, hb in zip(c.rows, c.h)
    ]
    elems = [PauliLabel(c.n, 0, 0, 0)]
    for row in signed:
        elems += [pauli_mul(e, row) for e in elems]
    return elems


def _rref_rows(work: list[PauliLabel], n: int, start: int, part: str) -> int:
    """In-place RREF of work[start:] on the x or z part; returns pivot count."""
    count = start
    for bit in range(n):
        sel = None
        for i in range(count, len(work)):
            word = work[i].x if part == "x" else work[i].z
            if (word >> bit) & 1:
                sel = i
                break
        if sel is None:
            continue
        work[count], work[sel] = work[sel], work[count]
        for i in range(start, len(work)):
            if i == count:
                continue
            word = work[i].x if part == "x" else work[i].z
            if (word >> bit) & 1:
                work[i] = pauli_mul(work[i], work[count])
        count += 1
    return count - start


def canonicalize(t: StabilizerTableau) -> CanonicalTableau:
    """Block-canonical generators plus the per-x gauge reference table."""
    if t.n > MAX_CANONICAL_QUBITS:
        raise CapacityError(f"canonicalize cap is n={MAX_CANONICAL_QUBITS}, got {t.n}")
    work = t.signed_rows()
    n = t.n
    n_mixed = _rref_rows(work, n, 0, "x")
    for row in work[n_mixed:]:
        if row.x:
            raise ValidationError("x elimination left a mixed row below the block")
    _rref_rows(work, n, n_mixed, "z")
    r = n - n_mixed

    rows, h = [], []
    for row in work:
        if row.phase_exp % 2 != 0:
            raise ValidationError("canonicalization produced a non-Hermitian row")
        rows.append(PauliLabel(n, row.x, row.z, 0))
        h.append(row.phase_exp // 2)

    # Enumerate the full group once: per x-coset keep the smallest-z element.
    ident = PauliLabel(n, 0, 0, 0)
    pure_elems = [ident]
    for row in work[n_mixed:]:
        pure_elems += [pauli_mul(e, row) for e in pure_elems]
    cosets: dict[int, tuple[int, int]] = {}
    mixed_elems = [ident]
    for row in work[:n_mixed]:
        mixed_elems += [pauli_mul(e, row) for e in mixed_elems]
    for elem in mixed_elems:
        best: tuple[int, int] | None = None
        for q in pure_elems:
            prod = pauli_mul(elem, q)
            if prod.phase_exp % 2 != 0:
                raise ValidationError("group element with imaginary sign; tableau invalid")
            cand = (prod.z, prod.phase_exp // 2)
            if best is None or cand[0] < best[0]:
                best = cand
        cosets[elem.x] = best

    return CanonicalTableau(t, n, r, tuple(rows), tuple(h), cosets)


def pure_z_rank(t: StabilizerTableau) -> int:
    """Rank r of the pure-Z part; n - r is the support dimension."""
    return canonicalize(t).r


def is_graph_type(t: StabilizerTableau):
    """(flag, adjacency, signs) when the state is a signed graph state.

    Graph type means r = 0, the x-block reduces to the identity, and no row
    acts as Y on its own qubit (zero adjacency diagonal).  The adjacency is
    returned as n row masks, signs as the h bits of the graph generators.
    Returns (False, None, None) otherwise.
    """
    c = canonicalize(t)
    if c.r != 0:
        return False, None, None
    n = t.n
    rows_by_pivot: dict[int, tuple[int, int]] = {}
    for row, hb in zip(c.rows, c.h):
        if row.x.bit_count() != 1:
            return False, None, None
        j = row.x.bit_length() - 1
        rows_by_pivot[j] = (row.z, hb)
    if len(rows_by_pivot) != n:
        return False, None, None
    adjacency, signs = [], []
    for j in range(n):
        z, hb = rows_by_pivot[j]
        if (z >> j) & 1:
            return False, None, None
        adjacency.append(z)
        signs.append(hb)
    for i in range(n):
        for j in range(n):
            if ((adjacency[i] >> j) & 1) != ((adjacency[j] >> i) & 1):
                return False, None, None  # cannot happen for commuting rows
    return True, tuple(adjacency), tuple(signs)


def tableau_expectation(t: StabilizerTableau, p: PauliLabel) -> int:
    """Signed expectation of a Hermitian label in the stabilizer state: -1, 0, +1."""
    if p.n != t.n:
        raise ValidationError(f"label on {p.n} qubits, tableau on {t.n}")
    if p.phase_exp % 2 != 0:
        raise ValidationError("expectation of a non-Hermitian label is not a sign")
    c = canonicalize(t)
    work_rows = [
        PauliLabel(t.n, row.x, row.z, 2 * hb) for row, hb in zip(c.rows, c.h)
    ]
    elem = PauliLabel(t.n, 0, 0, 0)
    xw = p.x
    for row in work_rows[: t.n - c.r]:
        pivot = row.x & -row.x
        lead = pivot.bit_length() - 1
        if (xw >> lead) & 1:
            elem = pauli_mul(elem, row)
            xw ^= row.x
    if xw:
        return 0
    zw = p.z ^ elem.z
    for row in work_rows[t.n - c.r:]:
        lead = (row.z & -row.z).bit_length() - 1
        if (zw >> lead) & 1:
            elem = pauli_mul(elem, row)
            zw ^= row.z
    if zw or elem.x != p.x or elem.z != p.z:
        return 0
    diff = (elem.phase_exp - p.phase_exp) & 3
    if diff % 2 != 0:
        raise ValidationError("phase bookkeeping broke; group element differs by i")
    return 1 if diff == 0 else -1


def _conjugate_rows(rows: list[PauliLabel], gates: Sequence[tuple]) -> list[PauliLabel]:
    from .transfer import conjugate_label  # deferred: transfer imports this module

    out = list(rows)
    for gate in gates:
        out = [conjugate_label(gate, p) for p in out]
    return out


def canonical_frame(t: StabilizerTableau):
    """Clifford u_c (gates in application order) mapping the state to the
    frozen product form |0>^r tensor |+>^(n-r), plus that target tableau.

    Uses only CX, CZ, S, Z, X gates, so the induced basis-state map is affine.
    Returns (CliffordOp, StabilizerTableau).
    """
    from .transfer import CliffordOp

    c = canonicalize(t)
    n, r = c.n, c.r
    work = [PauliLabel(n, row.x, row.z, 2 * hb) for row, hb in zip(c.rows, c.h)]
    n_mixed = n - r
    gates: list[tuple] = []

    def emit(*gs: tuple) -> None:
        nonlocal work
        gates.extend(gs)
        work = _conjugate_rows(work, gs)

    # 1) keep only the pivot column in each mixed row's x-part
    pivots = [(row.x & -row.x).bit_length() - 1 for row in work[:n_mixed]]
    for i in range(n_mixed):
        extra = work[i].x & ~(1 << pivots[i])
        for q in range(n):
            if (extra >> q) & 1:
                emit(("CX", pivots[i], q))
    # 2) move pivot i to qubit r + i via CX swaps
    perm = list(range(n))  # perm[qubit] = where that wire currently sits

    def swap(a: int, b: int) -> None:
        if a != b:
            emit(("CX", a, b), ("CX", b, a), ("CX", a, b))

    for i, piv in enumerate(sorted(pivots)):
        target = r + i
        cur = perm.index(piv)
        if cur != target:
            swap(cur, target)
            perm[cur], perm[target] = perm[target], perm[cur]
    # re-read mixed pivots; re-sort mixed rows into pivot order r..n-1
    work[:n_mixed] = sorted(work[:n_mixed], key=lambda row: row.x)
    # 3) pure rows now live on qubits 0..r-1; re-reduce their z-parts to I_r
    _rref_rows(work, n, n_mixed, "z")
    # 4) clear the z-parts of the mixed rows
    for i in range(n_mixed):
        q = r + i
        if (work[i].z >> q) & 1:
            emit(("S", q), ("Z", q))
        zrest = work[i].z & ~(1 << q)
        for other in range(n):
            if (zrest >> other) & 1:
                emit(("CZ", q, other))
    # 5) sign cleanup
    for i in range(n_mixed):
        if work[i].phase_exp == 2:
            emit(("Z", r + i))
    for j in range(n_mixed, n):
        if work[j].phase_exp == 2:
            lead = (work[j].z & -work[j].z).bit_length() - 1
            emit(("X", lead))

    for i in range(n_mixed):
        if work[i] != PauliLabel(n, 1 << (r + i), 0, 0):
            raise ValidationError("frame reduction failed on a mixed row")
    for j in range(n_mixed, n):
        expect_z = 1 << (j - n_mixed)
        if work[j] != PauliLabel(n, 0, expect_z, 0):
            raise ValidationError("frame reduction failed on a pure row")

    target = product_tableau(n, {q: 0 for q in range(1, r + 1)})
    return CliffordOp(n, tuple(gates)), target


def apply_clifford(t: StabilizerTableau, c) -> StabilizerTableau:
    """Tableau of (circuit c)|state>: conjugate each generator forward."""
    if c.n != t.n:
        raise ValidationError(f"circuit on {c.n} qubits, tableau on {t.n}")
    rows = _conjugate_rows(t.signed_rows(), c.gates)
    out_rows, out_h = [], []
    for row in rows:
        if row.phase_exp % 2 != 0:
            raise ValidationError("conjugation produced a non-Hermitian row")
        out_rows.append(PauliLabel(t.n, row.x, row.z, 0))
        out_h.append(row.phase_exp // 2)
    return StabilizerTableau(t.n, tuple(out_rows), tuple(out_h))


def random_stabilizer(n: int, seed: int) -> StabilizerTableau:
    """Random stabilizer state, built by conjugating |0...0> through a random
    Clifford circuit of 3n^2 + 2n gates.  Deterministic in the seed."""
    import numpy as np

    from .transfer import random_clifford

    rng = np.random.default_rng(seed)
    circ = random_clifford(n, rng, length=3 * n * n + 2 * n)
    rows = [PauliLabel(n, 0, 1 << j, 0) for j in range(n)]
    rows = _conjugate_rows(rows, circ.gates)
    out_rows, out_h = [], []
    for row in rows:
        if row.phase_exp % 2 != 0:
            raise ValidationError("random conjugation produced a non-Hermitian row")
        out_rows.append(PauliLabel(n, row.x, row.z, 0))
        out_h.append(row.phase_exp // 2)
    return StabilizerTableau(n, tuple(out_rows), tuple(out_h))
