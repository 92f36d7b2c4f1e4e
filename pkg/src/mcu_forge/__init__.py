"""Ancilla-free linear-depth synthesis of multi-controlled one-qubit gates."""

from .circuit import (
    Circuit,
    DepthReport,
    Gate,
    from_json,
    invert,
    lower_controlled,
    schedule_asap,
    to_json,
    to_qasm,
)
from .ldd import MCGateSpec, build_cnu, build_p, build_q, count_formula, depth_formula
from .sim import NoiseSpec, Statevector, apply_gate, circuit_unitary, oracle_cnu, run_noisy
from .su2 import (
    Unitary2,
    adjoint,
    compose,
    distance,
    eigendecompose,
    make_rx,
    principal_root,
    zyz_decompose,
)

__version__ = "0.1.0"
