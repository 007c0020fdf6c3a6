"""Angle optimization of the magic functional over one rotation layer.

The objective is f(w) = F_alpha of the spectrum after applying a rotation
layer with angles w (in turns) to the current real signed spectrum; the
Clifford part of a block is applied beforehand, so optimization always runs
over R^n angles only.  The mixing here re-derives the sector sums locally
(with their analytic gradients) rather than calling the transfer module, so
the objective / apply_block agreement is a real cross-check.

Plain gradient descent with an adaptive step: halve on increase (move
rejected), grow 1.1x on decrease.  Restarts are uniform in [0,1)^n and the
w = 0 candidate is always included, so the reported minimum never exceeds
the input F_alpha.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

from ._bits import parity, submasks
from .errors import CapacityError, ValidationError
from .diagonal_gates import RotationVector
from .spectrum import PauliSpectrum, f_alpha
from .transfer import CliffordOp, LayerBlock, apply_block, identity_clifford, random_clifford

if TYPE_CHECKING:
    from .stabilizer import StabilizerTableau

MAX_PIPELINE_QUBITS = 8
MAX_GRID_QUBITS = 2


@dataclass(frozen=True)
class OptimizerConfig:
    alpha: int = 2
    restarts: int = 16
    max_iters: int = 500
    step: float = 0.05
    tol: float = 1e-10
    clifford_pool: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.alpha) != self.alpha or self.alpha < 2:
            raise ValidationError(f"alpha must be an integer >= 2, got {self.alpha!r}")
        if self.restarts < 0 or self.max_iters < 1 or self.clifford_pool < 0:
            raise ValidationError("restarts/max_iters/clifford_pool out of range")
        if self.step <= 0 or self.tol <= 0:
            raise ValidationError("step and tol must be positive")


def _gamma_table(x: int, angles: np.ndarray) -> dict[int, float]:
    """Gamma_x(u) for every submask u, each from a fresh product over qubits."""
    table: dict[int, float] = {}
    for u in submasks(x):
        g = 1.0
        for j in range(int(x).bit_length()):
            if (x >> j) & 1:
                t = 2.0 * np.pi * angles[j]
                g *= np.sin(t) if (u >> j) & 1 else np.cos(t)
        table[u] = float(g)
    return table


def _objective_parts(s: PauliSpectrum, w, alpha: int, want_grad: bool):
    if s.kind != "real_signed":
        raise ValidationError("objective is defined on real signed spectra")
    angles = np.asarray(w, dtype=np.float64)
    n = s.n
    if angles.shape != (n,):
        raise ValidationError(f"angle vector has shape {angles.shape}, expected ({n},)")
    size = 1 << n
    zs = np.arange(size, dtype=np.int64)
    values = s.values
    power = 2 * int(alpha)
    terms: list[float] = []
    grad_terms: list[list[float]] = [[] for _ in range(n)] if want_grad else []
    for x in range(size):
        sector = values[x * size:(x + 1) * size]
        gam = _gamma_table(x, angles)
        mixed = np.zeros(size, dtype=np.float64)
        contribs: dict[int, np.ndarray] = {}
        for u, g in gam.items():
            signs = 1.0 - 2.0 * ((parity(zs & u) + (int(u).bit_count() & 1)) & 1)
            piece = signs * sector[zs ^ u]
            contribs[u] = piece
            mixed += g * piece
        terms.extend((mixed ** power).tolist())
        if want_grad:
            outer = power * mixed ** (power - 1)
            for j in range(n):
                if not (x >> j) & 1:
                    continue
                dmix = np.zeros(size, dtype=np.float64)
                for u, piece in contribs.items():
                    flip = u ^ (1 << j)
                    dg = 2.0 * np.pi * (gam[flip] if (u >> j) & 1 else -gam[flip])
                    dmix += dg * piece
                grad_terms[j].extend((outer * dmix).tolist())
    f = math.fsum(terms)
    if not want_grad:
        return f, None
    grad = np.array([math.fsum(col) for col in grad_terms], dtype=np.float64)
    return f, grad


def objective(s: PauliSpectrum, w, alpha: int = 2) -> float:
    """F_alpha after a rotation layer with angles w (turns) on spectrum s."""
    f, _ = _objective_parts(s, w, alpha, want_grad=False)
    return f


def objective_grad(s: PauliSpectrum, w, alpha: int = 2) -> np.ndarray:
    """Analytic gradient of the objective with respect to the angles."""
    _, grad = _objective_parts(s, w, alpha, want_grad=True)
    return grad


def _descend(s: PauliSpectrum, w0: np.ndarray, config: OptimizerConfig):
    w = np.asarray(w0, dtype=np.float64).copy()
    f, _ = _objective_parts(s, w, config.alpha, want_grad=False)
    step = config.step
    iters = 0
    for _ in range(config.max_iters):
        iters += 1
        _, grad = _objective_parts(s, w, config.alpha, want_grad=True)
        w_try = w - step * grad
        f_try, _ = _objective_parts(s, w_try, config.alpha, want_grad=False)
        if f_try < f:
            drop = f - f_try
            w, f = w_try, f_try
            step *= 1.1
            if drop < config.tol:
                break
        else:
            step *= 0.5
            if step < 1e-15:
                break
    return w % 1.0, f, iters


def _optimize_angles_full(s: PauliSpectrum, config: OptimizerConfig, stream=(0,)):
    rng = np.random.default_rng([config.seed, *stream])
    starts = [np.zeros(s.n)]
    starts += [rng.uniform(0.0, 1.0, s.n) for _ in range(config.restarts)]
    best_w, best_f, total = None, np.inf, 0
    for w0 in starts:
        w, f, iters = _descend(s, w0, config)
        total += iters
        if f < best_f:
            best_w, best_f = w, f
    return best_w, best_f, total


def optimize_angles(s: PauliSpectrum, config: OptimizerConfig = OptimizerConfig()):
    """Best angles for one rotation layer: (w_star, f_star)."""
    w, f, _ = _optimize_angles_full(s, config)
    return w, f


def precondition_clifford(s: PauliSpectrum, config: OptimizerConfig = OptimizerConfig(),
                          stream=(0,)) -> CliffordOp:
    """Pick the pool Clifford that best exposes non-uniform weight to mixing.

    Score of C is sum over labels v of |x(v)| * (a(pre(v))^2 - 2^-n)^2 where
    pre is the Heisenberg preimage of v; the identity is always candidate 0
    and ties keep the earliest candidate.
    """
    if s.kind != "real_signed":
        raise ValidationError("preconditioning works on real signed spectra")
    n = s.n
    rng = np.random.default_rng([config.seed, 1, *stream])
    pool = [identity_clifford(n)]
    pool += [random_clifford(n, rng) for _ in range(config.clifford_pool)]
    size = 1 << n
    xw = np.bitwise_count((np.arange(size * size, dtype=np.int64) >> n)).astype(np.float64)
    uniform = 2.0 ** (-n)
    a2 = np.asarray(s.values, dtype=np.float64) ** 2
    best, best_score = pool[0], -np.inf
    for cand in pool:
        perm, _ = cand.heisenberg_table()
        score = float(np.sum(xw * (a2[perm] - uniform) ** 2))
        if score > best_score + 1e-15:
            best, best_score = cand, score
    return best


@dataclass(frozen=True)
class LayerResult:
    """One optimized block and its before/after bookkeeping."""

    block: LayerBlock
    f_before: float
    f_after: float
    spectrum_after: PauliSpectrum
    iterations: int


def optimize_layer(s: PauliSpectrum, config: OptimizerConfig = OptimizerConfig(),
                   layer_index: int = 0) -> LayerResult:
    """Precondition with a Clifford, then optimize the rotation angles."""
    if s.n > MAX_PIPELINE_QUBITS:
        raise CapacityError(f"optimizer cap is n={MAX_PIPELINE_QUBITS}, got {s.n}")
    f_before = f_alpha(s, config.alpha)
    cliff = precondition_clifford(s, config, stream=(layer_index,))
    s_mid = apply_block(s, LayerBlock(s.n, cliff, None))
    w, f_star, iters = _optimize_angles_full(s_mid, config, stream=(layer_index,))
    block = LayerBlock(s.n, cliff, RotationVector.continuous(w))
    s_after = apply_block(s, block)
    f_direct = f_alpha(s_after, config.alpha)
    if abs(f_direct - f_star) > 1e-9:
        raise ValidationError(
            f"objective ({f_star!r}) and transfer ({f_direct!r}) disagree past 1e-9"
        )
    return LayerResult(block, f_before, f_direct, s_after, iters)


def run_pipeline(t: "StabilizerTableau", n_layers: int,
                 config: OptimizerConfig = OptimizerConfig()) -> list[LayerResult]:
    """Greedy layer-by-layer minimization starting from a stabilizer state."""
    from .transfer import initial_spectrum

    if n_layers < 1:
        raise ValidationError("need at least one layer")
    s = initial_spectrum(t)
    results: list[LayerResult] = []
    for layer in range(n_layers):
        res = optimize_layer(s, config, layer_index=layer)
        results.append(res)
        s = res.spectrum_after
    return results


def grid_min(s: PauliSpectrum, alpha: int = 2, points: int = 256):
    """Exhaustive angle grid (k/points per qubit): (w_best, f_best).

    Meant as an optimizer oracle at n <= 2; cost is points**n objective calls.
    """
    if s.n > MAX_GRID_QUBITS:
        raise CapacityError(f"grid scan cap is n={MAX_GRID_QUBITS}, got {s.n}")
    if points < 1:
        raise ValidationError("points must be positive")
    best_w, best_f = None, np.inf
    for ks in itertools.product(range(points), repeat=s.n):
        w = np.array([k / points for k in ks], dtype=np.float64)
        f = objective(s, w, alpha)
        if f < best_f:
            best_w, best_f = w, f
    return best_w, best_f


def config_from_dict(obj: dict) -> OptimizerConfig:
    """Build a config from a JSON-style dict, rejecting unknown keys."""
    known = {f.name for f in OptimizerConfig.__dataclass_fields__.values()}
    extra = set(obj) - known
    if extra:
        raise ValidationError(f"unknown optimizer config keys: {sorted(extra)}")
    return replace(OptimizerConfig(), **obj)
