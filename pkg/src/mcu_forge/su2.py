"""2x2 unitary algebra: construction, roots, ZYZ angles and distances."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

UNITARY_TOL = 1e-12
RECONSTRUCT_TOL = 1e-10
END_TO_END_TOL = 1e-9


class NotUnitaryError(ValueError):
    pass


class Unitary2:
    """Immutable 2x2 complex unitary matrix.

    The entries live in a read-only numpy array (``.array``). Adjoint and
    ZYZ angles are cached on first use, so circuits that reuse one matrix
    object for thousands of gates pay for them once.
    """

    __slots__ = ("_m", "_adj", "_zyz", "_hash")

    def __init__(self, entries, *, check: bool = True):
        m = np.array(entries, dtype=complex).reshape(2, 2)
        if check:
            if not np.all(np.isfinite(m)):
                raise NotUnitaryError("matrix entries must be finite")
            err = np.max(np.abs(m.conj().T @ m - np.eye(2)))
            if err > UNITARY_TOL:
                raise NotUnitaryError(f"matrix is not unitary (max |U^dag U - I| = {err:.3e})")
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if abs(abs(det) - 1.0) > UNITARY_TOL:
                raise NotUnitaryError(f"|det| = {abs(det):.15f} differs from 1")
        m.flags.writeable = False
        self._m = m
        self._adj = None
        self._zyz = None
        self._hash = None

    @property
    def array(self) -> np.ndarray:
        return self._m

    def entries(self) -> tuple[complex, complex, complex, complex]:
        a, b, c, d = self._m.ravel()
        return complex(a), complex(b), complex(c), complex(d)

    def det(self) -> complex:
        m = self._m
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Unitary2):
            return NotImplemented
        return self is other or bool(np.array_equal(self._m, other._m))

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.entries())
        return self._hash

    def __repr__(self) -> str:
        a, b, c, d = self.entries()
        return f"Unitary2([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"

    def to_json(self) -> list[list[float]]:
        return [[z.real, z.imag] for z in self.entries()]

    @classmethod
    def from_json(cls, pairs: Sequence[Sequence[float]]) -> "Unitary2":
        if len(pairs) != 4 or any(len(p) != 2 for p in pairs):
            raise ValueError("expected four [re, im] pairs")
        return cls([complex(float(re), float(im)) for re, im in pairs])


@dataclass(frozen=True)
class EigenForm2:
    """Eigenphases in (-pi, pi] and the matching orthonormal eigenvectors (columns)."""

    phases: tuple[float, float]
    basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.basis
        return v @ np.diag(np.exp(1j * np.asarray(self.phases))) @ v.conj().T


@dataclass(frozen=True)
class ZyzAngles:
    """``exp(i*global_phase) * Rz(phi) @ Ry(theta) @ Rz(lam)``."""

    global_phase: float
    theta: float
    phi: float
    lam: float

    def to_matrix(self) -> np.ndarray:
        return cmath.exp(1j * self.global_phase) * (
            _rz(self.phi) @ _ry(self.theta) @ _rz(self.lam)
        )


IDENTITY = Unitary2(np.eye(2))
PAULI_X = Unitary2([[0, 1], [1, 0]])
PAULI_Y = Unitary2([[0, -1j], [1j, 0]])
PAULI_Z = Unitary2([[1, 0], [0, -1]])
HADAMARD = Unitary2(np.array([[1, 1], [1, -1]]) / math.sqrt(2))


def _rz(angle: float) -> np.ndarray:
    return np.array([[cmath.exp(-0.5j * angle), 0], [0, cmath.exp(0.5j * angle)]])


def _ry(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _check_angle(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"rotation angle must be finite, got {theta!r}")
    return theta


def make_rx(theta: float) -> Unitary2:
    theta = _check_angle(theta)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return Unitary2([[c, -1j * s], [-1j * s, c]])


def make_ry(theta: float) -> Unitary2:
    return Unitary2(_ry(_check_angle(theta)))


def make_rz(theta: float) -> Unitary2:
    return Unitary2(_rz(_check_angle(theta)))


def make_phase(alpha: float) -> Unitary2:
    """diag(1, e^{i alpha})."""
    return Unitary2([[1, 0], [0, cmath.exp(1j * _check_angle(alpha))]])


def compose(a: Unitary2, b: Unitary2) -> Unitary2:
    """Matrix product ``a @ b`` (b acts first)."""
    return Unitary2(a.array @ b.array)


def adjoint(a: Unitary2) -> Unitary2:
    if a._adj is None:
        adj = Unitary2(a.array.conj().T, check=False)
        adj._adj = a
        a._adj = adj
    return a._adj


def _wrap_phase(phi: float) -> float:
    # keep the principal interval (-pi, pi]
    if phi <= -math.pi:
        phi += 2 * math.pi
    elif phi > math.pi:
        phi -= 2 * math.pi
    return phi


def eigendecompose(u: Unitary2) -> EigenForm2:
    """Closed-form eigendecomposition of a 2x2 unitary.

    Eigenvectors come from the traceless part ``u - tr(u)/2``, rescaled to unit
    Frobenius norm, which keeps them well conditioned even when the two
    eigenvalues nearly coincide. Scalar matrices get the standard basis.
    """
    m = u.array
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    t = m - half_tr * np.eye(2)
    scale = np.linalg.norm(t)
    if scale < 1e-14:
        basis = np.eye(2, dtype=complex)
    else:
        t = t / scale
        mu = np.sqrt(t[0, 0] ** 2 + t[0, 1] * t[1, 0])
        cand1 = np.array([t[0, 1], mu - t[0, 0]])
        cand2 = np.array([mu + t[0, 0], t[1, 0]])
        v1 = cand1 if np.linalg.norm(cand1) >= np.linalg.norm(cand2) else cand2
        v1 = v1 / np.linalg.norm(v1)
        v2 = np.array([-np.conj(v1[1]), np.conj(v1[0])])
        basis = np.column_stack([v1, v2])
    phases = tuple(
        _wrap_phase(float(np.angle(basis[:, i].conj() @ m @ basis[:, i]))) for i in range(2)
    )
    basis.flags.writeable = False
    return EigenForm2(phases=phases, basis=basis)


def principal_root(u: Unitary2, k: int) -> Unitary2:
    """Principal k-th root: same eigenbasis, eigenphases divided by k.

    For powers of two this satisfies ``root(u, 2k) @ root(u, 2k) == root(u, k)``
    up to rounding, which is what makes telescoping root products cancel.
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"root order must be a positive integer, got {k!r}")
    k = int(k)
    if k == 1:
        return u
    eig = eigendecompose(u)
    if k & (k - 1) == 0:
        # k = 2**e can exceed the float range for very wide circuits
        shift = k.bit_length() - 1
        scaled = [math.ldexp(phi, -shift) for phi in eig.phases]
    else:
        scaled = [phi / k for phi in eig.phases]
    v = eig.basis
    root = v @ np.diag(np.exp(1j * np.asarray(scaled))) @ v.conj().T
    return Unitary2(root)


def zyz_decompose(u: Unitary2) -> ZyzAngles:
    """Euler angles with theta in [0, pi]; lam = 0 at the gimbal points."""
    if u._zyz is not None:
        return u._zyz
    m = u.array
    alpha = 0.5 * cmath.phase(u.det())
    v = m * cmath.exp(-1j * alpha)
    a, c = v[0, 0], v[1, 0]
    theta = 2.0 * math.atan2(abs(c), abs(a))
    if abs(c) < 1e-14:
        phi, lam = -2.0 * cmath.phase(a), 0.0
    elif abs(a) < 1e-14:
        phi, lam = 2.0 * cmath.phase(c), 0.0
    else:
        pa, pc = cmath.phase(a), cmath.phase(c)
        phi, lam = pc - pa, -pa - pc
    angles = ZyzAngles(float(alpha), float(theta), float(phi), float(lam))
    u._zyz = angles
    return angles


def from_zyz(angles: ZyzAngles) -> Unitary2:
    return Unitary2(angles.to_matrix())


def distance(a: Unitary2, b: Unitary2, up_to_global_phase: bool = False) -> float:
    """Max absolute entry difference, optionally after aligning b's phase to a.

    The phase is fixed on the entry where ``a`` is largest.
    """
    x, y = a.array, b.array
    if up_to_global_phase:
        i = np.unravel_index(np.argmax(np.abs(x)), x.shape)
        if abs(y[i]) > 0:
            ratio = x[i] / y[i]
            y = y * (ratio / abs(ratio))
    return float(np.max(np.abs(x - y)))


def random_su2(rng: np.random.Generator) -> Unitary2:
    """Haar-random element of SU(2) built from ZYZ angles.

    phi and lam are uniform on [0, 2pi); theta has density sin(theta)/2 on
    [0, pi], which is the Haar measure in these coordinates.
    """
    phi, lam = rng.uniform(0.0, 2 * math.pi, size=2)
    theta = math.acos(1.0 - 2.0 * rng.uniform())
    return Unitary2(_rz(phi) @ _ry(theta) @ _rz(lam))
