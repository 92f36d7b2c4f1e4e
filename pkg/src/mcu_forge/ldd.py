"""Linear-depth, ancilla-free decomposition of an n-controlled one-qubit unitary.

Wire convention: controls a_1..a_n sit on wires 0..n-1 and the target
a_{n+1} on wire n. Every builder returns a :class:`Circuit` of width n+1
whose gates are one-qubit or singly-controlled one-qubit unitaries.

    C^n U = Qn^dag . Pn(U)^dag . Qn . C(a_1 -> a_{n+1}, U^(1/2^(n-1))) . Pn(U)

(rightmost first). Qn is the cascade C^{n-1}Rx(pi), ..., C^1Rx(pi), emitted
in its fully expanded form so its depth stays linear in n.
"""

from __future__ import annotations

import contextlib
import functools
import gc
import math
from dataclasses import dataclass
from typing import Callable, Optional

from .circuit import Circuit, Gate, invert
from .su2 import Unitary2, adjoint, make_rx, principal_root

RootFn = Callable[[Unitary2, int], Unitary2]


@dataclass(frozen=True)
class MCGateSpec:
    n: int
    u: Unitary2

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"number of controls must be a non-negative integer, got {self.n!r}")
        if not isinstance(self.u, Unitary2):
            raise TypeError("u must be a Unitary2")

    @property
    def width(self) -> int:
        return self.n + 1

    @property
    def target(self) -> int:
        return self.n


_new_gate = tuple.__new__  # skips the NamedTuple wrapper on hot paths


def root_table(base: Unitary2, top: int, root_fn: RootFn = principal_root) -> list[Unitary2]:
    """``[base^(1/2^e) for e in 0..top]``."""
    return [base] + [root_fn(base, 1 << e) for e in range(1, top + 1)]


@functools.lru_cache(maxsize=None)
def _rx_pi_root(exponent: int) -> Unitary2:
    # principal 2^e-th root of Rx(pi) is Rx(pi / 2^e)
    return make_rx(math.ldexp(math.pi, -exponent))


def _rx_pi_roots(top: int) -> list[Unitary2]:
    return [_rx_pi_root(e) for e in range(top + 1)]


def _p_gates(j: int, roots: list[Unitary2], *, descending: bool = False) -> list[Gate]:
    # P_j: for k = 2..j, root 2^(j-k+1) controlled by a_k (wire k-1) onto a_{j+1} (wire j)
    ks = range(j, 1, -1) if descending else range(2, j + 1)
    return [_new_gate(Gate, (roots[j - k + 1], j, k - 1)) for k in ks]


@contextlib.contextmanager
def _gc_paused():
    # cyclic GC rescans the growing gate list; emitting ~n^2 tuples is ~3x faster without it
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def build_p(j: int, base: Unitary2, *, width: Optional[int] = None, root_fn: RootFn = principal_root) -> Circuit:
    """Ladder of controlled roots of ``base`` onto wire j, one per control a_2..a_j."""
    if j < 2:
        raise ValueError(f"P block needs j >= 2, got {j}")
    width = j + 1 if width is None else width
    return Circuit(width, _p_gates(j, root_table(base, j - 1, root_fn)), label=f"P_{j}")


def _q_gates(n: int) -> list[Gate]:
    # Blocks P_{n-1} .. P_2 run in descending order, each followed by its a_1 gate,
    # then Q_2, then P_2^dag .. P_{n-1}^dag ascending. Gates inside one block
    # commute; ordering them against the block direction (high controls first
    # on the way down, low controls first on the way up) is what lets ASAP
    # overlap neighbouring blocks.
    roots = _rx_pi_roots(n)
    adj = [adjoint(r) for r in roots]
    gates: list[Gate] = []
    for j in range(n - 1, 1, -1):
        gates += _p_gates(j, roots, descending=True)
        gates.append(Gate(roots[j - 1], j, 0))
    gates.append(Gate(roots[0], 1, 0))
    for j in range(2, n):
        gates += _p_gates(j, adj)
    return gates


def build_q(n: int, *, width: Optional[int] = None) -> Circuit:
    """Expanded cascade C^{n-1}Rx(pi) ... C^1Rx(pi); exactly (n-1)^2 gates.

    On |1>^n it leaves a_1 alone and sends a_2..a_n to -i|0> each.
    """
    if n < 2:
        raise ValueError(f"Q block needs n >= 2, got {n}")
    width = n + 1 if width is None else width
    with _gc_paused():
        return Circuit(width, _q_gates(n), label=f"Q_{n}", validate=False)


def build_cnu(spec: MCGateSpec, *, root_fn: RootFn = principal_root) -> Circuit:
    """Ancilla-free linear-depth circuit for C^n U.

    ``root_fn`` is the k-th root used on the target; swapping it out is how
    the verification suite checks that a wrong branch gets caught.
    """
    n, u = spec.n, spec.u
    label = f"C^{n}U"
    width = n + 1
    if n == 0:
        return Circuit(width, [Gate(u, 0)], label)
    if n == 1:
        return Circuit(width, [Gate(u, 1, 0)], label)
    roots = root_table(u, n - 1, root_fn)
    with _gc_paused():
        q = Circuit(width, _q_gates(n), validate=False)
        gates = _p_gates(n, roots, descending=True)
        gates.append(Gate(roots[n - 1], n, 0))
        gates += q.gates
        gates += _p_gates(n, [adjoint(r) for r in roots])
        gates += invert(q).gates
        return Circuit(width, gates, label, validate=False)


def count_formula(n: int) -> int:
    """Controlled-gate count of :func:`build_cnu` for n >= 2 (n = 0, 1 give 1)."""
    if n < 2:
        return 1
    return 2 * (n - 1) ** 2 + 2 * (n - 1) + 1


def depth_formula(n: int) -> int:
    """Published depth 8n - 12 for C^nU at controlled-gate granularity (n >= 3)."""
    if n < 3:
        raise ValueError(f"depth formula holds for n >= 3, got {n}")
    return 8 * n - 12


def p_product(n: int, base: Optional[Unitary2] = None) -> Circuit:
    """P_2 P_3 ... P_n in program order (P_2 first) on n+1 wires."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    roots = _rx_pi_roots(n) if base is None else root_table(base, n - 1)
    gates: list[Gate] = []
    for k in range(2, n + 1):
        gates += _p_gates(k, roots)
    return Circuit(n + 1, gates, label=f"prod P_2..P_{n}", validate=False)
