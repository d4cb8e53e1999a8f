"""Spectral projectors below a level curve and their time derivatives."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GapViolation
from .hamiltonians import LevelCurve, PeriodicHamiltonian
from .linalg import herm_eig, hermitize


@dataclass
class SpectralSplit:
    """Orthogonal splitting of C^n at one time by the level curve.

    frame holds an orthonormal basis of the below-level subspace as columns;
    frame_above completes it to an eigenbasis of H(t).
    """

    t: float
    P: np.ndarray
    Nminus: int
    Nplus: int
    frame: np.ndarray
    frame_above: np.ndarray

    @property
    def full_frame(self) -> np.ndarray:
        """Unitary [frame | frame_above]; below-level columns come first."""
        return np.hstack([self.frame, self.frame_above])


def projector_below(h, lam: float, t: float = 0.0, gap_tol: float = 1e-8) -> SpectralSplit:
    """Spectral projector of Hermitian h onto eigenvalues below lam.

    Raises GapViolation when some eigenvalue is within gap_tol (relative to
    the spectral scale) of the level, where "below" would be ambiguous.
    """
    evals, vecs = herm_eig(h)
    scale = max(1.0, float(np.abs(evals).max(initial=0.0)), abs(float(lam)))
    dist = np.abs(evals - lam)
    if dist.min() <= gap_tol * scale:
        raise GapViolation(
            f"eigenvalue {evals[int(np.argmin(dist))]:.12g} lies on the level {lam:.12g} "
            f"(t = {t:.6f})"
        )
    below = evals < lam
    k = int(below.sum())
    frame = vecs[:, below]
    proj = hermitize(frame @ frame.conj().T)
    return SpectralSplit(
        t=float(t),
        P=proj,
        Nminus=k,
        Nplus=int(evals.size - k),
        frame=frame,
        frame_above=vecs[:, ~below],
    )


def projector_derivative(fam: PeriodicHamiltonian, level: LevelCurve, t: float,
                         method: str = "finite_difference",
                         fd_step: float = 1e-5) -> np.ndarray:
    """dP/dt of the below-level projector at time t.

    method="finite_difference" (default) is a central difference of the
    gauge-free projector with step fd_step; method="analytic" assembles the
    derivative from first-order eigen-perturbation of H(t), summing only
    across the gap so the result is basis-independent under degeneracies.
    """
    if method == "finite_difference":
        plus = projector_below(fam.eval(t + fd_step), level(t + fd_step), t + fd_step)
        minus = projector_below(fam.eval(t - fd_step), level(t - fd_step), t - fd_step)
        if plus.Nminus != minus.Nminus:
            raise GapViolation(f"level crossing inside [{t - fd_step}, {t + fd_step}]")
        return (plus.P - minus.P) / (2.0 * fd_step)
    if method != "analytic":
        raise ValueError(f"unknown derivative method {method!r}")
    evals, vecs = herm_eig(fam.eval(t))
    lam = level(t)
    below = evals < lam
    k = int(below.sum())
    if k == 0 or k == evals.size:
        return np.zeros((evals.size, evals.size), dtype=complex)
    hdot = np.asarray(fam.eval_derivative(t), dtype=complex)
    w = vecs.conj().T @ hdot @ vecs
    # cross-gap sum: rows = above-level, cols = below-level
    x = np.zeros_like(w)
    denom = evals[None, :k] - evals[k:, None]
    x[k:, :k] = w[k:, :k] / denom
    m = x + x.conj().T
    return hermitize(vecs @ m @ vecs.conj().T)


# ---------------------------------------------------------------------------
# batched grid helpers used by the transport integrators
# ---------------------------------------------------------------------------

def grid_eigensystems(fam, ts):
    """Batched (eigenvalues, eigenvectors) of H over an array of times."""
    h = np.asarray(fam.eval(ts), dtype=complex)
    return np.linalg.eigh(h)


def grid_splits(fam, level, ts, gap_tol=1e-6):
    """Batched below-level frames over a grid.

    Returns (evals, vecs, k, margin) after verifying a uniform gap and a
    constant below-level count; raises GapViolation otherwise.
    """
    evals, vecs = grid_eigensystems(fam, ts)
    lam = np.asarray(level(ts))
    dist = np.abs(evals - lam[..., None]).min(axis=-1)
    i = int(np.argmin(dist))
    margin = float(dist[i])
    if margin <= gap_tol:
        raise GapViolation(
            f"level curve touches spectrum: margin {margin:.3e} at t = {float(np.asarray(ts)[i]):.6f}"
        )
    counts = (evals < lam[..., None]).sum(axis=-1)
    if not np.all(counts == counts.flat[0]):
        raise GapViolation("below-level dimension changes along the grid (level crossing)")
    return evals, vecs, int(counts.flat[0]), margin


def grid_projectors(vecs, k):
    """Projectors onto the first k eigenvector columns, batched."""
    frames = vecs[..., :, :k]
    return np.einsum("...ik,...jk->...ij", frames, frames.conj())


def grid_projector_derivatives(fam, level, ts, method="finite_difference",
                               fd_step=1e-5, gap_tol=1e-6, eig=None):
    """Batched dP/dt over a grid; eig may pass precomputed (evals, vecs, k)."""
    ts = np.asarray(ts, dtype=float)
    if method == "finite_difference":
        _, vp, kp, _ = grid_splits(fam, level, ts + fd_step, gap_tol)
        _, vm, km, _ = grid_splits(fam, level, ts - fd_step, gap_tol)
        if kp != km:
            raise GapViolation("level crossing within the finite-difference stencil")
        return (grid_projectors(vp, kp) - grid_projectors(vm, km)) / (2.0 * fd_step)
    if method != "analytic":
        raise ValueError(f"unknown derivative method {method!r}")
    if eig is None:
        evals, vecs, k, _ = grid_splits(fam, level, ts, gap_tol)
    else:
        evals, vecs, k = eig
    n = evals.shape[-1]
    if k == 0 or k == n:
        return np.zeros(ts.shape + (n, n), dtype=complex)
    hdot = np.asarray(fam.eval_derivative(ts), dtype=complex)
    w = np.einsum("...pi,...pq,...qj->...ij", vecs.conj(), hdot, vecs)
    x = np.zeros_like(w)
    denom = evals[..., None, :k] - evals[..., k:, None]
    x[..., k:, :k] = w[..., k:, :k] / denom
    m = x + np.conj(np.swapaxes(x, -1, -2))
    return np.einsum("...ip,...pq,...jq->...ij", vecs, m, vecs.conj())
