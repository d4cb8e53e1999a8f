"""Unit tests for the small linear-algebra layer."""

import math

import numpy as np
import pytest

from berrydet import (
    NotHermitian,
    NotUnitary,
    SingularInput,
    TWO_PI,
    circular_distance,
    det_phase,
    expm,
    herm_eig,
    hermitize,
    polar_unitary,
    selfadjoint_log_unitary,
    wrap_angle,
)


def random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2.0


def random_unitary(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_wrap_angle_branch():
    assert wrap_angle(0.0) == 0.0
    assert math.isclose(wrap_angle(math.pi), math.pi)
    # -pi and +pi are the same circle point; floats may land on either side
    assert circular_distance(wrap_angle(-math.pi), math.pi) < 1e-12
    assert math.isclose(wrap_angle(3 * math.pi / 2), -math.pi / 2)
    xs = np.linspace(-20, 20, 401)
    ws = wrap_angle(xs)
    assert np.all(ws > -math.pi - 1e-15) and np.all(ws <= math.pi + 1e-15)
    np.testing.assert_allclose(np.exp(1j * ws), np.exp(1j * xs), atol=1e-12)


def test_circular_distance_properties():
    rng = np.random.default_rng(7)
    a = rng.uniform(-10, 10, 100)
    b = rng.uniform(-10, 10, 100)
    d = circular_distance(a, b)
    assert np.all(d >= 0) and np.all(d <= math.pi + 1e-12)
    np.testing.assert_allclose(d, circular_distance(b, a), atol=1e-12)
    np.testing.assert_allclose(circular_distance(a, a + TWO_PI), 0.0, atol=1e-12)
    assert math.isclose(circular_distance(-math.pi + 0.01, math.pi - 0.01), 0.02,
                        rel_tol=1e-9)


def test_hermitize_fixes_roundoff():
    rng = np.random.default_rng(1)
    h = random_hermitian(rng, 5)
    noisy = h + 1e-14 * rng.standard_normal((5, 5))
    fixed = hermitize(noisy)
    np.testing.assert_allclose(fixed, fixed.conj().T, atol=0)


def test_herm_eig_sorted_and_reconstructs():
    rng = np.random.default_rng(2)
    h = random_hermitian(rng, 6)
    res = herm_eig(h)
    assert np.all(np.diff(res.eigenvalues) >= 0)
    rec = (res.eigenvectors * res.eigenvalues) @ res.eigenvectors.conj().T
    np.testing.assert_allclose(rec, h, atol=1e-12)


def test_herm_eig_rejects_nonhermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_herm_eig_rejects_nonsquare_and_nonfinite():
    with pytest.raises(ValueError):
        herm_eig(np.zeros((2, 3), dtype=complex))
    bad = np.eye(2, dtype=complex)
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        herm_eig(bad)


def test_expm_matches_diagonal_formula():
    a = np.diag([1.0j, -2.0j])
    np.testing.assert_allclose(expm(a), np.diag(np.exp([1.0j, -2.0j])), atol=1e-14)


def test_polar_unitary_projects_to_unitary():
    rng = np.random.default_rng(3)
    u = random_unitary(rng, 5)
    drifted = u + 1e-6 * rng.standard_normal((5, 5))
    q = polar_unitary(drifted)
    np.testing.assert_allclose(q.conj().T @ q, np.eye(5), atol=1e-12)
    assert np.linalg.norm(q - u) < 1e-5


def test_polar_unitary_rejects_singular():
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = 1.0
    with pytest.raises(SingularInput):
        polar_unitary(m)


def test_selfadjoint_log_roundtrip_and_branch():
    rng = np.random.default_rng(4)
    v = random_unitary(rng, 5)
    a = selfadjoint_log_unitary(v)
    np.testing.assert_allclose(a, a.conj().T, atol=1e-12)
    np.testing.assert_allclose(expm(TWO_PI * 1j * a), v, atol=1e-9)
    evs = np.linalg.eigvalsh(a)
    assert np.all(evs >= -1e-12) and np.all(evs < 1.0)  # eigenphases in [0, 2pi)


def test_selfadjoint_log_identity():
    a = selfadjoint_log_unitary(np.eye(4, dtype=complex))
    np.testing.assert_allclose(a, 0.0, atol=1e-12)


def test_selfadjoint_log_rejects_nonunitary():
    with pytest.raises(NotUnitary):
        selfadjoint_log_unitary(2.0 * np.eye(3, dtype=complex))


def test_det_phase_matches_direct_det():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    phase, logabs = det_phase(m)
    d = np.linalg.det(m)
    assert math.isclose(phase, np.angle(d), abs_tol=1e-10)
    assert math.isclose(logabs, math.log(abs(d)), rel_tol=1e-10)
