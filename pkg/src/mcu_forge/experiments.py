"""Noisy proof-of-principle circuits and the depth-scaling benchmark."""

from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional

import numpy as np

from .circuit import Circuit, Gate, lower_controlled, schedule_asap
from .ldd import MCGateSpec, build_cnu, count_formula, depth_formula
from .sim import NoiseSpec, Statevector, run_noisy
from .su2 import PAULI_X, Unitary2, adjoint, random_su2

DEFAULT_SHOTS = {"a": 50000, "b": 32000}

# reported depths are raw ASAP depths of the lowered circuit; no peephole optimiser runs
OPTIMIZATION_NOTE = "depths are unoptimised (no transpiler pass applied after lowering)"


@dataclass(frozen=True)
class ExperimentResult:
    experiment: str
    n: int
    noise_p: float
    shots: int
    ones: int
    p_ones: float
    depth_controlled: int
    depth_lowered: int
    cx_count: int
    seed: int

    @property
    def stderr(self) -> float:
        """Binomial standard error of ``p_ones``."""
        if self.shots == 0:
            return 0.0
        return float(np.sqrt(self.p_ones * (1 - self.p_ones) / self.shots))


def _prepare(wires: Iterable[int]) -> list[Gate]:
    return [Gate(PAULI_X, w) for w in wires]


def build_experiment_a(n: int, *, lower: bool = True) -> Circuit:
    """|1..10> then C^n X; every shot should read all ones."""
    if n < 1:
        raise ValueError("experiment (a) needs n >= 1")
    cnu = build_cnu(MCGateSpec(n, PAULI_X))
    c = Circuit(n + 1, _prepare(range(n)), f"exp-a C^{n}X") + cnu
    return lower_controlled(c) if lower else c


def build_experiment_b(n: int, u: Unitary2, *, lower: bool = True) -> Circuit:
    """|1..11>, u^dag on the target, then C^n u; should return to all ones."""
    if n < 1:
        raise ValueError("experiment (b) needs n >= 1")
    prep = _prepare(range(n + 1)) + [Gate(adjoint(u), n)]
    c = Circuit(n + 1, prep, f"exp-b C^{n}U") + build_cnu(MCGateSpec(n, u))
    return lower_controlled(c) if lower else c


def experiment_unitary(seed: int) -> Unitary2:
    return random_su2(np.random.default_rng(seed))


def run_experiment(
    kind: str,
    n: int,
    noise_p: float,
    shots: Optional[int] = None,
    seed: int = 0,
    *,
    u: Optional[Unitary2] = None,
    workers: Optional[int] = None,
) -> ExperimentResult:
    if kind not in DEFAULT_SHOTS:
        raise ValueError(f"experiment must be 'a' or 'b', got {kind!r}")
    shots = DEFAULT_SHOTS[kind] if shots is None else shots
    if kind == "a":
        raw = build_experiment_a(n, lower=False)
    else:
        raw = build_experiment_b(n, experiment_unitary(seed) if u is None else u, lower=False)
    report = schedule_asap(raw)
    lowered = lower_controlled(raw)
    start = Statevector.basis("0" * (n + 1))
    hist = run_noisy(lowered, start, NoiseSpec(noise_p, seed), shots, workers=workers)
    ones = hist.get("1" * (n + 1), 0)
    return ExperimentResult(
        experiment=kind,
        n=n,
        noise_p=float(noise_p),
        shots=shots,
        ones=ones,
        p_ones=ones / shots if shots else 0.0,
        depth_controlled=report.depth_controlled,
        depth_lowered=report.depth_lowered,
        cx_count=report.count_cx,
        seed=seed,
    )


@dataclass(frozen=True)
class ScalingRow:
    n: int
    depth_controlled: float
    depth_lowered: float
    cx_count: float
    count_controlled: float
    count_formula: int
    depth_formula: int
    u_independent: bool


def depth_scaling_table(n_min: int, n_max: int, trials: int = 3, seed: int = 0) -> list[ScalingRow]:
    """Measured depths and counts of the C^nU circuit for n_min..n_max.

    Each row averages ``trials`` random unitaries; ``u_independent`` records
    whether every trial produced the same numbers (it always should).
    """
    if not 3 <= n_min <= n_max:
        raise ValueError("need 3 <= n_min <= n_max")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(n_min, n_max + 1):
        measured = []
        for _ in range(trials):
            r = schedule_asap(build_cnu(MCGateSpec(n, random_su2(rng))))
            measured.append((r.depth_controlled, r.depth_lowered, r.count_cx, r.count_controlled))
        arr = np.array(measured, dtype=float)
        mean = arr.mean(axis=0)
        rows.append(
            ScalingRow(
                n=n,
                depth_controlled=_num(mean[0]),
                depth_lowered=_num(mean[1]),
                cx_count=_num(mean[2]),
                count_controlled=_num(mean[3]),
                count_formula=count_formula(n),
                depth_formula=depth_formula(n),
                u_independent=bool((arr == arr[0]).all()),
            )
        )
    return rows


def _num(x: float):
    return int(x) if float(x).is_integer() else float(x)


def rows_to_csv(rows) -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    names = [f.name for f in fields(rows[0])]
    w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(asdict(r))
    return buf.getvalue()
