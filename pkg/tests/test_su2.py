import cmath
import json
import math

import numpy as np
import pytest
import scipy.linalg
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from mcu_forge.su2 import (
    HADAMARD,
    IDENTITY,
    PAULI_X,
    NotUnitaryError,
    Unitary2,
    ZyzAngles,
    adjoint,
    compose,
    distance,
    eigendecompose,
    from_zyz,
    make_rx,
    principal_root,
    random_su2,
    zyz_decompose,
)

angles = st.floats(min_value=-4 * math.pi, max_value=4 * math.pi, allow_nan=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


def close(a, b, tol):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) < tol


def test_rejects_non_unitary():
    with pytest.raises(NotUnitaryError):
        Unitary2([[1, 1], [0, 1]])
    with pytest.raises(NotUnitaryError):
        Unitary2([[np.nan, 0], [0, 1]])


def test_unitary_is_read_only():
    u = make_rx(0.3)
    with pytest.raises(ValueError):
        u.array[0, 0] = 2


def test_make_rx_zero_is_identity():
    assert make_rx(0).array.tolist() == np.eye(2).tolist()


def test_make_rx_pi_is_minus_i_x():
    # cos(pi/2) = 0, sin(pi/2) = 1
    expected = np.array([[0, -1j], [-1j, 0]])
    assert close(make_rx(math.pi).array, expected, 1e-15)
    # (-iX)|1> = -i|0>
    assert close(make_rx(math.pi).array @ np.array([0, 1]), [-1j, 0], 1e-15)


def test_make_rx_additive():
    half = make_rx(math.pi / 2)
    assert distance(compose(half, half), make_rx(math.pi)) < 1e-15


def test_make_rx_rejects_non_finite():
    with pytest.raises(ValueError):
        make_rx(float("inf"))
    with pytest.raises(ValueError):
        make_rx(float("nan"))


def test_make_rx_has_unit_determinant():
    for t in np.linspace(-7, 7, 15):
        assert abs(make_rx(t).det() - 1) < 1e-12


def test_eigendecompose_identity():
    e = eigendecompose(IDENTITY)
    assert e.phases == (0.0, 0.0)
    assert np.array_equal(e.basis, np.eye(2))


def test_eigendecompose_x():
    e = eigendecompose(PAULI_X)
    assert sorted(round(p, 12) for p in e.phases) == [0.0, round(math.pi, 12)]
    plus = np.array([1, 1]) / math.sqrt(2)
    for i, ph in enumerate(e.phases):
        v = e.basis[:, i]
        want = plus if abs(ph) < 1e-12 else np.array([1, -1]) / math.sqrt(2)
        assert abs(abs(np.vdot(v, want)) - 1) < 1e-12
    assert close(e.reconstruct(), PAULI_X.array, 1e-10)


def test_eigendecompose_rx_pi():
    e = eigendecompose(make_rx(math.pi))
    assert sorted(e.phases) == pytest.approx([-math.pi / 2, math.pi / 2], abs=1e-12)
    assert close(e.reconstruct(), make_rx(math.pi).array, 1e-10)


def test_eigendecompose_random(rng):
    for _ in range(200):
        u = random_su2(rng)
        e = eigendecompose(u)
        assert close(e.reconstruct(), u.array, 1e-10)
        assert close(e.basis.conj().T @ e.basis, np.eye(2), 1e-12)
        assert all(-math.pi < p <= math.pi for p in e.phases)


def test_eigendecompose_near_degenerate():
    # eigenvalues 1e-10 apart
    u = make_rx(1e-10)
    e = eigendecompose(u)
    assert close(e.reconstruct(), u.array, 1e-10)


def test_eigenphase_minus_pi_maps_to_pi():
    e = eigendecompose(Unitary2(-np.eye(2)))
    assert e.phases == (math.pi, math.pi)


def test_principal_root_identity():
    for k in (1, 2, 3, 8, 1 << 20):
        assert distance(principal_root(IDENTITY, k), IDENTITY) < 1e-15


def test_principal_root_of_rx_pi_is_smaller_rotation():
    for m in range(0, 14):
        got = principal_root(make_rx(math.pi), 2**m)
        assert distance(got, make_rx(math.pi / 2**m)) < 1e-12


def test_principal_sqrt_x():
    expected = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])
    v = principal_root(PAULI_X, 2)
    assert close(v.array, expected, 1e-12)
    assert close(v.array @ v.array, PAULI_X.array, 1e-12)
    assert distance(compose(v, v), PAULI_X) < 1e-12


def test_principal_root_one_returns_input():
    u = HADAMARD
    assert principal_root(u, 1) is u


@pytest.mark.parametrize("k", [0, -1, 2.0, True])
def test_principal_root_rejects_bad_order(k):
    with pytest.raises(ValueError):
        principal_root(PAULI_X, k)


def test_principal_root_matches_scipy_sqrtm(rng):
    # independent oracle: Schur-based principal square root
    for _ in range(50):
        u = random_su2(rng)
        assert close(principal_root(u, 2).array, scipy.linalg.sqrtm(u.array), 1e-10)


def test_principal_root_powers(rng):
    us = [random_su2(rng) for _ in range(200)]
    for u in us:
        for e in range(1, 13):
            k = 2**e
            v = principal_root(u, k).array
            assert close(np.linalg.matrix_power(v, k), u.array, 1e-9)


def test_roots_of_x_and_non_powers_of_two():
    for k in (3, 5, 7):
        v = principal_root(PAULI_X, k).array
        assert close(np.linalg.matrix_power(v, k), PAULI_X.array, 1e-10)


def test_huge_root_order_does_not_overflow():
    v = principal_root(PAULI_X, 1 << 1100)
    assert distance(v, IDENTITY) < 1e-12


def test_roots_commute(rng):
    for _ in range(20):
        u = random_su2(rng)
        roots = [u] + [principal_root(u, 2**e) for e in range(1, 9)]
        for a in roots:
            for b in roots:
                assert close(a.array @ b.array, b.array @ a.array, 1e-10)


@pytest.mark.parametrize("n", range(2, 10))
def test_telescoping_root_product(rng, n):
    # root_{2^{n-1}} root_{2^{n-1}} root_{2^{n-2}} ... root_{2^{n-j+2}} (root_{2^{n-j+1}})^dag = I
    for _ in range(10):
        u = random_su2(rng)
        for j in range(2, n + 1):
            prod = principal_root(u, 2 ** (n - 1)).array
            for e in range(n - 1, n - j + 1, -1):
                prod = prod @ principal_root(u, 2**e).array
            prod = prod @ adjoint(principal_root(u, 2 ** (n - j + 1))).array
            assert close(prod, np.eye(2), 1e-9)


def test_compose_adjoint(rng):
    u = random_su2(rng)
    assert distance(compose(adjoint(u), u), IDENTITY) < 1e-12
    assert adjoint(adjoint(u)) is u


@given(angles)
def test_adjoint_of_rx_is_negative_angle(theta):
    assert distance(adjoint(make_rx(theta)), make_rx(-theta)) < 1e-15


def test_zyz_identity():
    z = zyz_decompose(IDENTITY)
    assert (z.global_phase, z.theta, z.phi, z.lam) == (0.0, 0.0, 0.0, 0.0)


def test_zyz_x_reconstructs():
    z = zyz_decompose(PAULI_X)
    assert z.theta == pytest.approx(math.pi)
    assert close(z.to_matrix(), PAULI_X.array, 1e-10)


@settings(max_examples=200)
@given(angles, st.floats(0, math.pi), angles, angles)
def test_zyz_roundtrip(alpha, theta, phi, lam):
    u = Unitary2(ZyzAngles(alpha, theta, phi, lam).to_matrix())
    z = zyz_decompose(u)
    assert 0 <= z.theta <= math.pi
    assert distance(from_zyz(z), u) < 1e-10


def test_zyz_random(rng):
    for _ in range(200):
        u = Unitary2(scipy.stats.unitary_group.rvs(2, random_state=rng))
        assert close(zyz_decompose(u).to_matrix(), u.array, 1e-10)


def test_distance():
    u = HADAMARD
    assert distance(u, u) == 0
    assert distance(u, u, True) == 0
    assert distance(u, Unitary2(cmath.exp(0.7j) * u.array), True) < 1e-12
    assert distance(IDENTITY, PAULI_X) == pytest.approx(1.0)


def test_json_shape():
    doc = {"matrix": PAULI_X.to_json()}
    assert json.loads(json.dumps(doc)) == {"matrix": [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]}


def test_json_roundtrip_is_exact(rng):
    for _ in range(50):
        u = random_su2(rng)
        back = Unitary2.from_json(json.loads(json.dumps(u.to_json())))
        assert back == u


def test_random_su2_has_unit_determinant(rng):
    for _ in range(100):
        assert abs(random_su2(rng).det() - 1) < 1e-12


def test_random_su2_is_haar(rng):
    # Haar on SU(2): |u_00|^2 is uniform on [0, 1]
    samples = [abs(random_su2(rng).array[0, 0]) ** 2 for _ in range(4000)]
    assert scipy.stats.kstest(samples, "uniform").pvalue > 0.01
