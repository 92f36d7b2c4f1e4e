"""Oracle suite: compare emitted circuits with the brute-force C^nU map."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .circuit import Circuit, lower_controlled
from .ldd import MCGateSpec, RootFn, build_cnu
from .sim import (
    Statevector,
    circuit_unitary,
    oracle_apply,
    oracle_unitary,
    run_circuit,
    worker_count,
)
from .su2 import END_TO_END_TOL, PAULI_X, Unitary2, eigendecompose, principal_root, random_su2

DENSE_MAX_N = 9
STATEVECTOR_TOL = 1e-8


def unitary_seed(seed: int, n: int, trial: int) -> int:
    """Integer seed for trial ``trial`` at ``n``; ``random:<value>`` on the CLI reproduces it."""
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1)[0])


def unitary_error(c: Circuit, n: int, u: Unitary2) -> float:
    """Max-entry error against the dense oracle, no phase freedom."""
    return float(np.max(np.abs(circuit_unitary(c, workers=1) - oracle_unitary(n, u))))


def statevector_error(c: Circuit, n: int, u: Unitary2, state: Statevector) -> float:
    got = run_circuit(c, state.amplitudes)
    want = oracle_apply(n, u, state.amplitudes)
    return float(np.linalg.norm(got - want))


@dataclass
class CheckResult:
    n: int
    kind: str
    u_seed: Optional[int]
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.error < self.tol


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def worst_by_n(self) -> dict[int, CheckResult]:
        worst: dict[int, CheckResult] = {}
        for c in self.checks:
            if c.n not in worst or c.error > worst[c.n].error:
                worst[c.n] = c
        return dict(sorted(worst.items()))


def _check(n: int, u: Unitary2, u_seed: Optional[int], state_seed: int, root_fn: RootFn, lowered: bool) -> CheckResult:
    c = build_cnu(MCGateSpec(n, u), root_fn=root_fn)
    if lowered:
        c = lower_controlled(c)
    if n <= DENSE_MAX_N:
        return CheckResult(n, "unitary", u_seed, unitary_error(c, n, u), END_TO_END_TOL)
    state = Statevector.random(n + 1, np.random.default_rng(state_seed))
    return CheckResult(n, "statevector", u_seed, statevector_error(c, n, u, state), STATEVECTOR_TOL)


def run_verification(
    n_max: int = 12,
    trials: int = 10,
    seed: int = 0,
    *,
    n_min: int = 1,
    include_x: bool = True,
    lowered: bool = False,
    root_fn: RootFn = principal_root,
    workers: Optional[int] = None,
) -> VerifyReport:
    """Dense-unitary checks for n <= 9, random-statevector checks above.

    Every n gets ``trials`` Haar-random SU(2) targets; dense sizes also get
    Pauli X (determinant -1).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    jobs = []
    for n in range(n_min, n_max + 1):
        for t in range(trials):
            s = unitary_seed(seed, n, t)
            jobs.append((n, random_su2(np.random.default_rng(s)), s, s + 1))
        if include_x and n <= DENSE_MAX_N:
            jobs.append((n, PAULI_X, None, 0))
    workers = worker_count() if workers is None else workers

    def job(args):
        n, u, s, state_seed = args
        return _check(n, u, s, state_seed, root_fn, lowered)

    if workers <= 1:
        checks = [job(j) for j in jobs]
    else:
        with ThreadPoolExecutor(workers) as pool:
            checks = list(pool.map(job, jobs))
    return VerifyReport(checks)


def wrong_branch_root(u: Unitary2, k: int) -> Unitary2:
    """Principal roots, except square roots take the other branch on one eigenvalue.

    Each result is still a valid k-th root of u, but the square root no longer
    equals the square of the fourth root, so the telescoping products fail for
    n >= 3. Used as a mutation check. A uniform +2pi shift on every order would
    stay self-consistent and go unnoticed.
    """
    if k != 2:
        return principal_root(u, k)
    eig = eigendecompose(u)
    phases = np.array([eig.phases[0], eig.phases[1] + 2 * math.pi]) / k
    v = eig.basis
    return Unitary2(v @ np.diag(np.exp(1j * phases)) @ v.conj().T)


FAULTS = {"root-branch": wrong_branch_root}

