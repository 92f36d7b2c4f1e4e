"""Statevector simulation, dense unitaries, the brute-force C^nU oracle, and noisy sampling.

Bit order: wire 0 is the most significant bit of a basis index, so the ket
|a_1 a_2 ... a_m> has index sum(a_w << (m-1-w)).

Every kernel accepts a batch: an array of shape (2**m,) or (2**m, B) where
each column is an independent state. Dense unitaries and Monte Carlo
trajectories both run through the same batched gate application.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .circuit import Circuit, Gate, LoweringRequiredError
from .su2 import Unitary2

MAX_DENSE_WIDTH = 12
ROUTINE_DENSE_WIDTH = 10
SHOT_CHUNK = 4096


def worker_count() -> int:
    env = os.environ.get("MCU_FORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


class Statevector:
    """Normalised amplitude vector of an m-wire register (read-only view)."""

    __slots__ = ("amplitudes", "width")

    def __init__(self, amplitudes, *, check: bool = True):
        amps = np.array(amplitudes, dtype=complex).ravel()
        m = amps.size.bit_length() - 1
        if amps.size != 1 << m:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        if check and abs(np.vdot(amps, amps).real - 1.0) > 1e-10:
            raise ValueError("statevector is not normalised")
        amps.flags.writeable = False
        self.amplitudes = amps
        self.width = m

    @classmethod
    def basis(cls, bits: str) -> "Statevector":
        """Computational basis state from a bitstring, wire 0 first."""
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"bad bitstring {bits!r}")
        amps = np.zeros(1 << len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(amps, check=False)

    @classmethod
    def random(cls, width: int, rng: np.random.Generator) -> "Statevector":
        v = rng.normal(size=1 << width) + 1j * rng.normal(size=1 << width)
        return cls(v / np.linalg.norm(v), check=False)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"Statevector(width={self.width})"


@dataclass(frozen=True)
class NoiseSpec:
    p: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"depolarizing probability must lie in [0, 1], got {self.p}")


# --- kernels ---------------------------------------------------------------

def _view(state: np.ndarray, m: int, wire: int) -> np.ndarray:
    """Reshape so axis 1 is ``wire``: (left, 2, right, batch)."""
    return state.reshape(1 << wire, 2, 1 << (m - 1 - wire), -1)


def _mix(x0: np.ndarray, x1: np.ndarray, mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, d = mat.ravel()
    return a * x0 + b * x1, c * x0 + d * x1


def apply_gate_inplace(state: np.ndarray, m: int, g: Gate) -> None:
    """Apply ``g`` to a (2**m,) or (2**m, B) array in place."""
    mat = g.matrix.array
    if g.control is None:
        v = _view(state, m, g.target)
        x0, x1 = v[:, 0], v[:, 1]
        v[:, 0], v[:, 1] = _mix(x0, x1, mat)
        return
    c, t = g.control, g.target
    lo, hi = min(c, t), max(c, t)
    v = state.reshape(1 << lo, 2, 1 << (hi - lo - 1), 2, 1 << (m - 1 - hi), -1)
    if c < t:
        x0, x1 = v[:, 1, :, 0], v[:, 1, :, 1]
        n0, n1 = _mix(x0, x1, mat)
        v[:, 1, :, 0], v[:, 1, :, 1] = n0, n1
    else:
        x0, x1 = v[:, 0, :, 1], v[:, 1, :, 1]
        n0, n1 = _mix(x0, x1, mat)
        v[:, 0, :, 1], v[:, 1, :, 1] = n0, n1


def _check_width(c: Circuit, m: int) -> None:
    if c.width != m:
        raise ValueError(f"circuit width {c.width} does not match register width {m}")


def run_circuit(c: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply ``c`` to a raw amplitude array (or batch); returns a new array."""
    out = np.array(state, dtype=complex, copy=True)
    m = out.shape[0].bit_length() - 1
    _check_width(c, m)
    for g in c.gates:
        apply_gate_inplace(out, m, g)
    return out


def apply_gate(state: Statevector, g: Gate) -> Statevector:
    amps = np.array(state.amplitudes)
    apply_gate_inplace(amps, state.width, g)
    return Statevector(amps, check=False)


def apply_circuit(c: Circuit, state: Statevector) -> Statevector:
    return Statevector(run_circuit(c, state.amplitudes), check=False)


def circuit_unitary(c: Circuit, *, allow_large: bool = False, workers: Optional[int] = None) -> np.ndarray:
    """Dense 2**m x 2**m matrix whose columns are ``c`` applied to basis states.

    Widths up to 10 are routine; 11 and 12 need ``allow_large``; beyond 12
    is refused.
    """
    m = c.width
    if m > MAX_DENSE_WIDTH:
        raise ValueError(f"dense unitary limited to {MAX_DENSE_WIDTH} wires, circuit has {m}")
    if m > ROUTINE_DENSE_WIDTH and not allow_large:
        raise ValueError(
            f"dense unitary for {m} wires needs allow_large=True (routine limit {ROUTINE_DENSE_WIDTH})"
        )
    dim = 1 << m
    workers = worker_count() if workers is None else workers
    # column blocks are independent
    blocks = np.array_split(np.arange(dim), max(1, min(workers, dim // 64 or 1)))

    def run_block(cols: np.ndarray) -> np.ndarray:
        block = np.zeros((dim, cols.size), dtype=complex)
        block[cols, np.arange(cols.size)] = 1.0
        for g in c.gates:
            apply_gate_inplace(block, m, g)
        return block

    if len(blocks) == 1:
        return run_block(blocks[0])
    with ThreadPoolExecutor(len(blocks)) as pool:
        parts = list(pool.map(run_block, blocks))
    return np.concatenate(parts, axis=1)


# --- brute-force oracle ------------------------------------------------------

def oracle_apply(n: int, u: Unitary2, state: np.ndarray) -> np.ndarray:
    """C^nU on raw amplitudes: mix the target pair wherever all n controls are 1."""
    out = np.array(state, dtype=complex, copy=True)
    if out.shape[0] != 1 << (n + 1):
        raise ValueError(f"register has {out.shape[0]} amplitudes, expected {1 << (n + 1)}")
    # indices 2^{n+1}-2 (target 0) and 2^{n+1}-1 (target 1) are the only ones with every control set
    i0, i1 = (1 << (n + 1)) - 2, (1 << (n + 1)) - 1
    a, b, c, d = u.array.ravel()
    x0, x1 = out[i0].copy(), out[i1].copy()
    out[i0] = a * x0 + b * x1
    out[i1] = c * x0 + d * x1
    return out


def oracle_cnu(spec, state: Statevector) -> Statevector:
    if state.width != spec.n + 1:
        raise ValueError(f"register width {state.width} does not match n+1 = {spec.n + 1}")
    return Statevector(oracle_apply(spec.n, spec.u, state.amplitudes), check=False)


def oracle_unitary(n: int, u: Unitary2) -> np.ndarray:
    dim = 1 << (n + 1)
    out = np.eye(dim, dtype=complex)
    out[dim - 2:, dim - 2:] = u.array
    return out


# --- noisy sampling ----------------------------------------------------------

def _apply_paulis(batch: np.ndarray, m: int, wire: int, which: np.ndarray) -> None:
    """Apply X (1), Y (2) or Z (3) per column; 0 leaves the column alone."""
    v = _view(batch, m, wire)
    flip = (which == 1) | (which == 2)
    if flip.any():
        v[:, :, :, flip] = v[:, ::-1, :, flip]
    # Y = i X Z; after the flip, |0> holds old |1> and vice versa
    ys = which == 2
    if ys.any():
        v[:, 0, :, ys] *= -1j
        v[:, 1, :, ys] *= 1j
    zs = which == 3
    if zs.any():
        v[:, 1, :, zs] *= -1


def _sample_chunk(c: Circuit, init: np.ndarray, p: float, shots: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    m = c.width
    batch = np.repeat(init[:, None], shots, axis=1)
    for g in c.gates:
        apply_gate_inplace(batch, m, g)
        if p > 0.0:
            for w in g.wires:
                hit = rng.random(shots) < p
                which = np.where(hit, rng.integers(0, 4, size=shots), 0)
                _apply_paulis(batch, m, w, which)
    probs = np.abs(batch) ** 2
    cdf = np.cumsum(probs, axis=0)
    draws = rng.random(shots) * cdf[-1]
    outcomes = (cdf < draws[None, :]).sum(axis=0)
    return np.minimum(outcomes, (1 << m) - 1)


def run_noisy(
    c: Circuit,
    initial: Statevector,
    noise: NoiseSpec,
    shots: int,
    *,
    workers: Optional[int] = None,
) -> dict[str, int]:
    """Sample measurement outcomes from Pauli-trajectory depolarizing noise.

    After every gate each wire it touched independently, with probability
    ``noise.p``, gets one of I, X, Y, Z chosen uniformly. Shots are split into
    fixed-size chunks whose RNG streams are spawned by chunk index, so the
    histogram depends only on the seed, never on ``workers``.
    """
    if not c.is_lowered():
        raise LoweringRequiredError("noisy simulation requires a circuit lowered to {CX, 1q}")
    _check_width(c, initial.width)
    if shots < 0:
        raise ValueError("shots must be non-negative")
    sizes = [SHOT_CHUNK] * (shots // SHOT_CHUNK)
    if shots % SHOT_CHUNK:
        sizes.append(shots % SHOT_CHUNK)
    seeds = np.random.SeedSequence(noise.seed).spawn(len(sizes))
    init = np.asarray(initial.amplitudes)
    jobs = list(zip(sizes, seeds))
    workers = worker_count() if workers is None else max(1, workers)

    def job(args):
        size, seq = args
        return _sample_chunk(c, init, noise.p, size, seq)

    if workers == 1 or len(jobs) <= 1:
        results = [job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(min(workers, len(jobs))) as pool:
            results = list(pool.map(job, jobs))
    counts = np.zeros(1 << c.width, dtype=np.int64)
    for r in results:
        counts += np.bincount(r, minlength=1 << c.width)
    return {format(i, f"0{c.width}b"): int(k) for i, k in enumerate(counts) if k}


def histogram_to_csv(hist: dict[str, int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bitstring", "count"])
    for bits in sorted(hist):
        w.writerow([bits, hist[bits]])
    return buf.getvalue()


def histogram_to_json(hist: dict[str, int], *, shots: int, seed: int, p: float) -> str:
    return json.dumps({"shots": shots, "seed": seed, "p": p, "counts": dict(sorted(hist.items()))})
