"""Circuit IR: gates, ASAP depth scheduling, inversion, CX lowering, QASM/JSON."""

from __future__ import annotations

import cmath
import json
import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .su2 import (
    PAULI_X,
    Unitary2,
    adjoint,
    make_phase,
    make_ry,
    make_rz,
    zyz_decompose,
)


class LoweringRequiredError(ValueError):
    pass


class Gate(NamedTuple):
    """A one-qubit unitary on ``target``, or the same controlled on ``control``."""

    matrix: Unitary2
    target: int
    control: Optional[int] = None

    @property
    def kind(self) -> str:
        return "one-qubit" if self.control is None else "controlled"

    @property
    def wires(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)

    def is_cx(self) -> bool:
        return self.control is not None and self.matrix == PAULI_X


class Circuit:
    """Ordered gate sequence over ``width`` wires; earlier gates act first."""

    __slots__ = ("width", "gates", "label")

    def __init__(self, width: int, gates: Iterable[Gate] = (), label: str = "", *, validate: bool = True):
        if width < 0:
            raise ValueError("width must be non-negative")
        self.width = int(width)
        self.gates = tuple(gates)
        self.label = label
        if validate:
            for i, g in enumerate(self.gates):
                if not 0 <= g.target < width:
                    raise ValueError(f"gate {i}: target {g.target} outside width {width}")
                if g.control is not None:
                    if not 0 <= g.control < width:
                        raise ValueError(f"gate {i}: control {g.control} outside width {width}")
                    if g.control == g.target:
                        raise ValueError(f"gate {i}: control equals target ({g.target})")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.width == other.width and self.label == other.label and self.gates == other.gates

    def __repr__(self) -> str:
        return f"Circuit(width={self.width}, gates={len(self.gates)}, label={self.label!r})"

    def __add__(self, other: "Circuit") -> "Circuit":
        if self.width != other.width:
            raise ValueError("cannot concatenate circuits of different width")
        return Circuit(self.width, self.gates + other.gates, self.label, validate=False)

    def count_controlled(self) -> int:
        return sum(1 for g in self.gates if g.control is not None)

    def is_lowered(self) -> bool:
        return all(g.control is None or g.is_cx() for g in self.gates)


@dataclass(frozen=True)
class DepthReport:
    layers: tuple[int, ...]
    depth_controlled: int
    depth_lowered: int
    count_controlled: int
    count_cx: int
    count_1q: int


def asap_layers(c: Circuit) -> list[int]:
    """1-based ASAP layer of every gate, respecting program order per wire."""
    last = [0] * c.width
    layers = []
    for g in c.gates:
        t = g.target
        if g.control is None:
            layer = last[t] + 1
            last[t] = layer
        else:
            layer = max(last[t], last[g.control]) + 1
            last[t] = last[g.control] = layer
        layers.append(layer)
    return layers


def asap_depth(c: Circuit) -> int:
    return max(asap_layers(c), default=0)


def schedule_asap(c: Circuit) -> DepthReport:
    layers = asap_layers(c)
    lowered = c if c.is_lowered() else lower_controlled(c)
    n_cx = sum(1 for g in lowered.gates if g.control is not None)
    return DepthReport(
        layers=tuple(layers),
        depth_controlled=max(layers, default=0),
        depth_lowered=asap_depth(lowered),
        count_controlled=c.count_controlled(),
        count_cx=n_cx,
        count_1q=len(lowered.gates) - n_cx,
    )


def invert(c: Circuit) -> Circuit:
    new = tuple.__new__
    gates = [new(Gate, (adjoint(g[0]), g[1], g[2])) for g in reversed(c.gates)]
    return Circuit(c.width, gates, c.label, validate=False)


def _controlled_plan(u: Unitary2) -> tuple[Unitary2, Unitary2, Unitary2, Unitary2]:
    """(C, B, A, phase) with u = e^{i alpha} A X B X C and ABC = I."""
    z = zyz_decompose(u)
    a_mat = make_rz(z.phi) @ make_ry(z.theta / 2)
    b_mat = make_ry(-z.theta / 2) @ make_rz(-(z.phi + z.lam) / 2)
    c_mat = make_rz((z.lam - z.phi) / 2)
    return c_mat, b_mat, a_mat, make_phase(z.global_phase)


def lower_gate(g: Gate, _plans: Optional[dict] = None) -> list[Gate]:
    """Exact {CX, 1q} replacement for one gate (global phase included)."""
    if g.control is None or g.is_cx():
        return [g]
    if _plans is None:
        plan = _controlled_plan(g.matrix)
    else:
        plan = _plans.get(g.matrix)
        if plan is None:
            plan = _plans[g.matrix] = _controlled_plan(g.matrix)
    c_mat, b_mat, a_mat, phase = plan
    ctl, tgt = g.control, g.target
    return [
        Gate(phase, ctl),
        Gate(c_mat, tgt),
        Gate(PAULI_X, tgt, ctl),
        Gate(b_mat, tgt),
        Gate(PAULI_X, tgt, ctl),
        Gate(a_mat, tgt),
    ]


def lower_controlled(c: Circuit) -> Circuit:
    """Rewrite every non-CX controlled gate into 2 CX plus one-qubit gates."""
    plans: dict[Unitary2, tuple] = {}
    out: list[Gate] = []
    for g in c.gates:
        out += lower_gate(g, plans)
    return Circuit(c.width, out, c.label, validate=False)


# --- serialization -------------------------------------------------------

QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def _fmt(x: float) -> str:
    return repr(float(x))


def to_qasm(c: Circuit) -> str:
    """OpenQASM 2.0 text using only ``u3`` and ``cx``.

    ``u3(t, p, l)`` equals ``e^{i(p+l)/2} Rz(p) Ry(t) Rz(l)``, so each
    one-qubit gate contributes a known scalar; their sum is written as a
    ``// global_phase:`` comment so the listed program is exact.
    """
    if not c.is_lowered():
        raise LoweringRequiredError("lowering required: circuit contains non-CX controlled gates")
    body = []
    phase = 0.0
    for g in c.gates:
        if g.control is not None:
            body.append(f"cx q[{g.control}],q[{g.target}];")
            continue
        z = zyz_decompose(g.matrix)
        phase += z.global_phase - 0.5 * (z.phi + z.lam)
        body.append(f"u3({_fmt(z.theta)},{_fmt(z.phi)},{_fmt(z.lam)}) q[{g.target}];")
    phase = math.remainder(phase, 2 * math.pi)
    lines = [QASM_HEADER.rstrip("\n")]
    if c.label:
        lines.append("// " + " ".join(c.label.split()))
    if phase != 0.0:
        lines.append(f"// global_phase: {_fmt(phase)}")
    lines.append(f"qreg q[{c.width}];")
    lines += body
    return "\n".join(lines) + "\n"


_U3_RE = re.compile(r"^u3\(([^,]+),([^,]+),([^)]+)\)\s+q\[(\d+)\];$")
_CX_RE = re.compile(r"^cx\s+q\[(\d+)\],\s*q\[(\d+)\];$")


def u3_matrix(theta: float, phi: float, lam: float) -> Unitary2:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Unitary2(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ]
    )


def from_qasm(text: str) -> tuple[Circuit, float]:
    """Read back the subset written by :func:`to_qasm`.

    Returns the circuit and the recorded global phase; the original program
    equals ``e^{i phase}`` times the returned circuit.
    """
    width = None
    phase = 0.0
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if line.startswith("//"):
            if line.startswith("// global_phase:"):
                phase = float(line.split(":", 1)[1])
            continue
        if line.startswith("qreg"):
            width = int(re.match(r"qreg\s+q\[(\d+)\];", line).group(1))
            continue
        m = _U3_RE.match(line)
        if m:
            theta, phi, lam = (float(x) for x in m.groups()[:3])
            gates.append(Gate(u3_matrix(theta, phi, lam), int(m.group(4))))
            continue
        m = _CX_RE.match(line)
        if m:
            gates.append(Gate(PAULI_X, int(m.group(2)), int(m.group(1))))
            continue
        raise ValueError(f"unsupported QASM line: {line!r}")
    if width is None:
        raise ValueError("missing qreg declaration")
    return Circuit(width, gates), phase


def circuit_to_dict(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        d = {"kind": g.kind}
        if g.control is not None:
            d["control"] = g.control
        d["target"] = g.target
        d["matrix"] = g.matrix.to_json()
        gates.append(d)
    return {"width": c.width, "label": c.label, "gates": gates}


def circuit_from_dict(d: dict) -> Circuit:
    gates = []
    cache: dict[tuple, Unitary2] = {}
    for i, gd in enumerate(d["gates"]):
        kind = gd.get("kind")
        control = gd.get("control")
        if kind == "controlled" and control is None:
            raise ValueError(f"gate {i}: controlled gate without control")
        if kind == "one-qubit" and control is not None:
            raise ValueError(f"gate {i}: one-qubit gate with a control")
        if kind not in ("controlled", "one-qubit"):
            raise ValueError(f"gate {i}: unknown kind {kind!r}")
        key = tuple(tuple(p) for p in gd["matrix"])
        mat = cache.get(key)
        if mat is None:
            mat = cache[key] = Unitary2.from_json(gd["matrix"])
        gates.append(Gate(mat, int(gd["target"]), None if control is None else int(control)))
    return Circuit(int(d["width"]), gates, d.get("label", ""))


def to_json(c: Circuit) -> str:
    return json.dumps(circuit_to_dict(c))


def from_json(text: str) -> Circuit:
    return circuit_from_dict(json.loads(text))


def gate_unitary_4x4(g: Gate) -> np.ndarray:
    """Dense matrix of a controlled gate on (control, target), control as MSB."""
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = g.matrix.array
    return out
