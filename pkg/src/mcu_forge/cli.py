"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or invalid input,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from typing import Optional, Sequence

import numpy as np

from . import circuit as cir
from .experiments import (
    DEFAULT_SHOTS,
    OPTIMIZATION_NOTE,
    depth_scaling_table,
    rows_to_csv,
    run_experiment,
)
from .ldd import MCGateSpec, build_cnu
from .su2 import (
    HADAMARD,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    NotUnitaryError,
    Unitary2,
    make_rx,
    make_ry,
    make_rz,
    principal_root,
    random_su2,
)
from .verify import FAULTS, run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_NAMED = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z, "h": HADAMARD}
_ROTATIONS = {"rx": make_rx, "ry": make_ry, "rz": make_rz}
_PI_RE = re.compile(r"^([+-]?(?:\d+(?:\.\d*)?|\.\d+)?)\*?pi(?:/((?:\d+(?:\.\d*)?|\.\d+)))?$")


class SpecError(ValueError):
    pass


def parse_angle(text: str) -> float:
    """Float literal, or a multiple of pi such as ``pi/4``, ``-pi``, ``3*pi/2``."""
    t = text.strip().lower().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    m = _PI_RE.match(t)
    if not m:
        raise SpecError(f"cannot parse angle {text!r}")
    coeff, denom = m.groups()
    c = 1.0 if coeff in ("", "+") else -1.0 if coeff == "-" else float(coeff)
    return c * math.pi / (float(denom) if denom else 1.0)


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise SpecError(f"bad matrix entry {v!r}; use a number or [re, im]")


def parse_unitary(text: str) -> Unitary2:
    """Resolve a unitary spec: x|y|z|h, rx:ANGLE, ry:ANGLE, rz:ANGLE, random:SEED, or JSON.

    JSON may be ``{"matrix": [[re, im] x4]}``, a bare list of four pairs, or
    a nested 2x2 list whose entries are numbers or [re, im] pairs.
    """
    t = text.strip()
    key = t.lower()
    if key in _NAMED:
        return _NAMED[key]
    head, sep, arg = key.partition(":")
    if sep and head in _ROTATIONS:
        return _ROTATIONS[head](parse_angle(arg))
    if sep and head == "random":
        try:
            seed = int(arg)
        except ValueError:
            raise SpecError(f"random seed must be an integer, got {arg!r}") from None
        return random_su2(np.random.default_rng(seed))
    try:
        data = json.loads(t)
    except json.JSONDecodeError:
        raise SpecError(f"unknown unitary spec {text!r}") from None
    if isinstance(data, dict):
        data = data.get("matrix")
    try:
        if isinstance(data, list) and len(data) == 4:
            entries = [_complex(v) for v in data]
        elif isinstance(data, list) and len(data) == 2 and all(isinstance(r, list) and len(r) == 2 for r in data):
            entries = [_complex(v) for row in data for v in row]
        else:
            raise SpecError("matrix JSON must hold four entries")
        return Unitary2(entries)
    except NotUnitaryError as exc:
        raise SpecError(str(exc)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_decompose(args) -> int:
    if args.n < 0:
        raise SpecError("n must be non-negative")
    u = parse_unitary(args.unitary)
    c = build_cnu(MCGateSpec(args.n, u))
    report = cir.schedule_asap(c)
    if args.lower:
        c = cir.lower_controlled(c)
    if args.format == "qasm":
        if not c.is_lowered():
            raise SpecError("lowering required for QASM output; pass --lower")
        text = cir.to_qasm(c)
    else:
        text = cir.to_json(c) + "\n"
    _emit(text, args.out)
    summary = (
        f"n={args.n} width={c.width} gates={len(c)} controlled={report.count_controlled} "
        f"depth_controlled={report.depth_controlled} depth_lowered={report.depth_lowered} "
        f"cx={report.count_cx} one_qubit={report.count_1q}"
    )
    # keep stdout clean when the circuit itself goes there
    print(summary, file=sys.stdout if args.out not in (None, "-") else sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.n_max < 1:
        raise SpecError("--n-max must be at least 1")
    root_fn = FAULTS[args.inject_fault] if args.inject_fault else principal_root
    report = run_verification(args.n_max, args.trials, args.seed, lowered=args.lowered, root_fn=root_fn)
    for n, worst in report.worst_by_n().items():
        status = "ok" if all(c.passed for c in report.checks if c.n == n) else "FAIL"
        print(f"n={n:3d} {worst.kind:11s} worst_error={worst.error:.3e} tol={worst.tol:.0e} {status}")
    failures = report.failures()
    for f in failures:
        seed = "x" if f.u_seed is None else f.u_seed
        print(f"failure: n={f.n} u-seed={seed} error={f.error:.3e}")
    print(f"{len(report.checks) - len(failures)}/{len(report.checks)} checks passed")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_bench(args) -> int:
    if not 3 <= args.n_min <= args.n_max:
        raise SpecError("bench needs 3 <= N_MIN <= N_MAX")
    rows = depth_scaling_table(args.n_min, args.n_max, args.trials, args.seed)
    text = rows_to_csv(rows)
    _emit(text, args.out)
    if args.out not in (None, "-"):
        for r in rows:
            print(f"n={r.n:3d} depth={r.depth_controlled} (8n-12={r.depth_formula}) "
                  f"lowered={r.depth_lowered} cx={r.cx_count} count={r.count_controlled}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.n < 1:
        raise SpecError("-n must be at least 1")
    if not 0.0 <= args.p <= 1.0:
        raise SpecError("-p must lie in [0, 1]")
    u = parse_unitary(args.unitary) if args.unitary else None
    res = run_experiment(args.kind, args.n, args.p, args.shots, args.seed, u=u)
    _emit(rows_to_csv([res]), args.out)
    stream = sys.stdout if args.out not in (None, "-") else sys.stderr
    print(
        f"experiment {res.experiment}: n={res.n} p={res.noise_p} shots={res.shots} "
        f"p_ones={res.p_ones:.6f} +/- {res.stderr:.6f} (depolarized limit {1 / 2 ** (res.n + 1):.6f})",
        file=stream,
    )
    print(f"note: {OPTIMIZATION_NOTE}", file=stream)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mcu-forge", description="Linear-depth multi-controlled gate synthesis.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="emit the circuit for C^n U")
    d.add_argument("-n", type=int, required=True, help="number of controls")
    d.add_argument("-u", "--unitary", default="x", help="x|y|z|h, rx:ANGLE, ry:ANGLE, rz:ANGLE, random:SEED or JSON")
    d.add_argument("--lower", action="store_true", help="lower to {CX, one-qubit}")
    d.add_argument("-f", "--format", choices=("qasm", "json"), default="json")
    d.add_argument("-o", "--out", help="output path (default stdout)")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="run the oracle equivalence suite")
    v.add_argument("--n-max", type=int, default=12)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--lowered", action="store_true", help="check the lowered circuits instead")
    v.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="depth-scaling table as CSV")
    b.add_argument("n_min", type=int)
    b.add_argument("n_max", type=int)
    b.add_argument("--trials", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--out", help="CSV path (default stdout)")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("experiment", help="noisy all-ones experiment (a: C^nX, b: C^nU)")
    e.add_argument("kind", choices=sorted(DEFAULT_SHOTS))
    e.add_argument("-n", type=int, required=True)
    e.add_argument("-p", type=float, default=0.0, help="depolarizing probability per gate-wire touch")
    e.add_argument("--shots", type=int, default=None, help="default 50000 for a, 32000 for b")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("-u", "--unitary", help="target unitary for experiment b (default random from --seed)")
    e.add_argument("-o", "--out", help="CSV path (default stdout)")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
