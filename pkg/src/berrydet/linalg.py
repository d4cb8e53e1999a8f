"""Dense complex linear algebra kernels.

Thin, contract-checked wrappers around LAPACK-backed routines: Hermitian
eigendecomposition, matrix exponential, self-adjoint logarithms of unitary
matrices (branch fixed to eigenphases in [0, 2pi)), unitary polar factors,
and determinant-phase helpers used throughout the package.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    NotHermitian,
    NotUnitary,
    SingularInput,
)

TWO_PI = 2.0 * np.pi


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues


def wrap_angle(x):
    """Reduce an angle (or array of angles) to the branch (-pi, pi]."""
    return np.angle(np.exp(1j * np.asarray(x, dtype=float)))


def circular_distance(a, b):
    """Distance |a - b| on the circle R / 2pi Z, always in [0, pi]."""
    return np.abs(wrap_angle(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))


def _as_square(m, name="matrix"):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} has non-finite entries")
    return a


def hermitize(m):
    """Symmetrize away the anti-Hermitian round-off part of m."""
    return 0.5 * (m + np.conj(np.swapaxes(m, -1, -2)))


def herm_eig(h, herm_tol: float = 1e-9) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    h : (n, n) array_like
        Hermitian matrix; deviation ||h - h*||_F must stay below
        herm_tol * max(1, ||h||_F).

    Returns
    -------
    HermitianEig
        Real eigenvalues in ascending order and a unitary eigenvector
        matrix whose columns match them.
    """
    a = _as_square(h, "h")
    dev = np.linalg.norm(a - a.conj().T)
    if dev > herm_tol * max(1.0, np.linalg.norm(a)):
        raise NotHermitian(f"||h - h*||_F = {dev:.3e} exceeds tolerance")
    try:
        w, v = np.linalg.eigh(hermitize(a))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceFailure(str(exc)) from exc
    return HermitianEig(w, v)


def expm(a) -> np.ndarray:
    """Matrix exponential e^a (scaling-and-squaring)."""
    return scipy.linalg.expm(_as_square(a, "a"))


def polar_unitary(m, cond_tol: float = 1e-12) -> np.ndarray:
    """Unitary factor of the polar decomposition m = u |m|.

    Raises SingularInput when the smallest singular value is below
    cond_tol times the largest (the nearest unitary is then ambiguous).
    """
    a = _as_square(m, "m")
    u, s, vh = np.linalg.svd(a)
    if s[-1] <= cond_tol * s[0]:
        raise SingularInput(
            f"singular values span [{s[-1]:.3e}, {s[0]:.3e}]; polar factor ill-defined"
        )
    return u @ vh


def selfadjoint_log_unitary(v, unitary_tol: float = 1e-8) -> np.ndarray:
    """Self-adjoint a with e^{2 pi i a} = v for unitary v.

    The branch is fixed by taking eigenphases of v in [0, 2pi), so the
    spectrum of a lies in [0, 1).  v must be unitary to unitary_tol; it is
    first projected onto the unitary group to suppress round-off.
    """
    a = _as_square(v, "v")
    n = a.shape[0]
    dev = np.linalg.norm(a.conj().T @ a - np.eye(n))
    if dev > unitary_tol:
        raise NotUnitary(f"||v*v - Id||_F = {dev:.3e} exceeds tolerance")
    u = polar_unitary(a)
    # complex Schur of a normal matrix: triangular factor is diagonal and
    # z holds an orthonormal eigenbasis, degeneracies included.
    t, z = scipy.linalg.schur(u, output="complex")
    phases = np.mod(np.angle(np.diagonal(t)), TWO_PI)  # branch [0, 2pi)
    log = (z * (phases / TWO_PI)) @ z.conj().T
    return hermitize(log)


def det_phase(m) -> tuple[float, float]:
    """(Im log det m, log |det m|) via a sign/log-magnitude split.

    The phase is returned on the branch (-pi, pi]; the magnitude is a
    natural log, safe for determinants that would overflow directly.
    """
    a = _as_square(m, "m")
    sign, logabs = np.linalg.slogdet(a)
    return float(np.angle(sign)), float(logabs)
