import numpy as np
import pytest

from mcu_forge.circuit import Circuit, Gate
from mcu_forge.su2 import PAULI_X, random_su2

ACCEPTANCE_LOG: list[str] = []


def kron_gate(g: Gate, m: int) -> np.ndarray:
    """Dense 2^m matrix of one gate built from Kronecker products (wire 0 = MSB)."""
    eye = np.eye(2)
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])

    def chain(ops):
        out = np.array([[1.0 + 0j]])
        for w in range(m):
            out = np.kron(out, ops.get(w, eye))
        return out

    if g.control is None:
        return chain({g.target: g.matrix.array})
    return chain({g.control: p0}) + chain({g.control: p1, g.target: g.matrix.array})


def kron_unitary(c: Circuit) -> np.ndarray:
    out = np.eye(1 << c.width, dtype=complex)
    for g in c.gates:
        out = kron_gate(g, c.width) @ out
    return out


def random_circuit(rng, width: int, size: int, cx_fraction: float = 0.3) -> Circuit:
    gates = []
    for _ in range(size):
        r = rng.random()
        if width == 1 or r < 0.3:
            gates.append(Gate(random_su2(rng), int(rng.integers(width))))
        else:
            c, t = rng.choice(width, size=2, replace=False)
            mat = PAULI_X if r < 0.3 + cx_fraction * 0.7 else random_su2(rng)
            gates.append(Gate(mat, int(t), int(c)))
    return Circuit(width, gates, "random")


@pytest.fixture
def rng():
    return np.random.default_rng(7)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
