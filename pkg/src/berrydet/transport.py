"""Parallel transport along spectral subspaces and Berry phases.

The below-level subspaces F_t of a gapped family form a bundle over the
circle; the projected derivative P d/dt is a connection on it.  This module
integrates the associated transport equation

    dU/dt = [dP/dt, P(t)] U,   U(0) = Id,

whose solution intertwines the projectors (U^-1 P_t U = P_0), and computes
the holonomy phase gamma of the below-level subbundle four independent ways:

* holonomy     -- phase of det of U(2pi) restricted to the t=0 subspace;
* trace        -- i * integral of Tr(P_0 V^-1 dV/dt P_0) dt in a gauge V(t)
                  that closes up periodically (V(0) = V(2pi) = Id);
* wilson       -- phase of the determinant of a discretized projector loop
                  product (first-order oracle, no differential equation);
* exterior     -- rank-one holonomy of the lowest band of the induced family
                  on the k-th exterior power.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np
from scipy.integrate import simpson

from .errors import (
    BlockLeakage,
    DegenerateProduct,
    GapViolation,
    NonRealPhase,
    NonUnitaryHolonomy,
    OdeToleranceFailure,
)
from .hamiltonians import LevelCurve, PeriodicHamiltonian, ZERO_LEVEL, TWO_PI
from .linalg import polar_unitary, selfadjoint_log_unitary, wrap_angle
from .spectral import (
    SpectralSplit,
    grid_projector_derivatives,
    grid_projectors,
    grid_splits,
    projector_below,
)


@dataclass
class BerryPhase:
    """A holonomy phase in (-pi, pi] together with the method that produced it."""

    gamma: float
    method: str


@dataclass
class GaugePath:
    """Transport data along one loop.

    grid      : n+1 node times spanning [0, 2pi]
    U         : transport unitaries at the nodes, U[0] = Id
    gen       : transport generators [dP/dt, P] at the nodes
    margin    : measured distance from the level curve to the spectrum
    split0    : spectral splitting at t = 0
    calU      : periodic gauge V(t) = U(t) exp(-it a) at the nodes (after
                build_periodic_gauge), with V(0) = V(2pi) = Id
    aplus     : self-adjoint log of the above-block of U(2pi), block coords
    aminus    : self-adjoint log of the below-block of U(2pi), block coords
    """

    grid: np.ndarray
    U: np.ndarray
    gen: np.ndarray
    margin: float
    split0: SpectralSplit
    calU: np.ndarray | None = None
    aplus: np.ndarray | None = None
    aminus: np.ndarray | None = None


def _sandwich_const(w, x):
    """w^* x w for fixed w and stacked x."""
    return np.einsum("pi,...pq,qj->...ij", w.conj(), x, w)


def _sandwich_stacked(u, x):
    """u^* x u elementwise along the stack."""
    return np.einsum("...pi,...pq,...qj->...ij", u.conj(), x, u)


def kato_evolve(fam: PeriodicHamiltonian, level: LevelCurve = ZERO_LEVEL,
                steps: int = 2048, deriv_method: str = "finite_difference",
                fd_step: float = 1e-5, gap_tol: float = 1e-6,
                defect_tol: float = 1e-3) -> GaugePath:
    """Integrate the transport equation with fixed-step RK4.

    The generator [dP/dt, P] is sampled on the half-step grid ahead of time
    (one batched eigendecomposition per stencil point), and the iterate is
    re-unitarized with a polar projection after every accepted step, so the
    result stays unitary to machine precision.
    """
    if steps < 16:
        raise ValueError(f"steps must be >= 16, got {steps}")
    n = int(steps)
    h = TWO_PI / n
    ts = np.linspace(0.0, TWO_PI, 2 * n + 1)

    evals, vecs, k, margin = grid_splits(fam, level, ts, gap_tol)
    ps = grid_projectors(vecs, k)
    pdots = grid_projector_derivatives(
        fam, level, ts, method=deriv_method, fd_step=fd_step, gap_tol=gap_tol,
        eig=(evals, vecs, k) if deriv_method == "analytic" else None,
    )
    gens = pdots @ ps - ps @ pdots

    dim = fam.n
    eye = np.eye(dim, dtype=complex)
    u = eye.copy()
    us = np.empty((n + 1, dim, dim), dtype=complex)
    us[0] = u
    for i in range(n):
        g0, g1, g2 = gens[2 * i], gens[2 * i + 1], gens[2 * i + 2]
        k1 = g0 @ u
        k2 = g1 @ (u + (0.5 * h) * k1)
        k3 = g1 @ (u + (0.5 * h) * k2)
        k4 = g2 @ (u + h * k3)
        unew = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        defect = np.linalg.norm(unew.conj().T @ unew - eye)
        if not np.isfinite(defect) or defect > defect_tol:
            raise OdeToleranceFailure(
                f"unitarity defect {defect:.3e} at step {i + 1}/{n}; increase steps"
            )
        u = polar_unitary(unew)
        us[i + 1] = u

    split0 = SpectralSplit(
        t=0.0,
        P=ps[0],
        Nminus=k,
        Nplus=dim - k,
        frame=vecs[0][:, :k],
        frame_above=vecs[0][:, k:],
    )
    return GaugePath(grid=ts[::2], U=us, gen=gens[::2], margin=margin, split0=split0)


def berry_phase_holonomy(path: GaugePath, split0: SpectralSplit,
                         unitary_tol: float = 1e-4) -> BerryPhase:
    """Phase of det(F0* U(2pi) F0) on the below-level subspace."""
    f0 = split0.frame
    hol = f0.conj().T @ path.U[-1] @ f0
    det = np.linalg.det(hol)
    if abs(abs(det) - 1.0) > unitary_tol:
        raise NonUnitaryHolonomy(
            f"|det| = {abs(det):.8f} deviates from 1 beyond {unitary_tol:g}"
        )
    return BerryPhase(gamma=float(np.angle(det)), method="holonomy")


def _block_phase_factor(ts, aminus, aplus):
    """exp(-i t a) in block-frame coordinates, batched over ts."""
    k = aminus.shape[0]
    dim = k + aplus.shape[0]
    out = np.zeros((len(ts), dim, dim), dtype=complex)
    for sl, a in ((np.s_[:k], aminus), (np.s_[k:], aplus)):
        if a.shape[0] == 0:
            continue
        w, v = np.linalg.eigh(a)
        out[:, sl, sl] = np.einsum("ik,tk,jk->tij", v, np.exp(-1j * np.outer(ts, w)), v.conj())
    return out


def assemble_periodic_gauge(path: GaugePath, split0: SpectralSplit,
                            aminus: np.ndarray, aplus: np.ndarray) -> GaugePath:
    """Attach the periodic gauge V(t) = U(t) W exp(-it a) W* for given logs."""
    w = split0.full_frame
    qf = _block_phase_factor(path.grid, aminus, aplus)
    calu = path.U @ np.einsum("pi,tij,qj->tpq", w, qf, w.conj())
    return replace(path, calU=calu, aplus=aplus, aminus=aminus)


def build_periodic_gauge(path: GaugePath, split0: SpectralSplit,
                         leak_tol: float = 1e-5) -> GaugePath:
    """Close the transport path into a loop of unitaries.

    U(2pi) commutes with P_0, so it splits into blocks U_-, U_+ on the
    below/above subspaces.  With a_± the self-adjoint logs of those blocks
    (branch [0, 1)), V(t) = U(t) exp(-it a) satisfies V(0) = V(2pi) = Id and
    carries the same intertwining property as U.
    """
    w = split0.full_frame
    k = split0.Nminus
    bf = w.conj().T @ path.U[-1] @ w
    leak = max(np.linalg.norm(bf[:k, k:]), np.linalg.norm(bf[k:, :k]))
    if leak > leak_tol:
        raise BlockLeakage(
            f"U(2pi) leaks across the splitting: off-diagonal norm {leak:.3e}"
        )
    blocks = []
    for sl in (np.s_[:k], np.s_[k:]):
        b = bf[sl, sl]
        blocks.append(selfadjoint_log_unitary(polar_unitary(b)) if b.size else b.real)
    return assemble_periodic_gauge(path, split0, blocks[0], blocks[1])


def _gauge_velocity_blocks(path: GaugePath, split0: SpectralSplit):
    """V^-1 dV/dt at the nodes, in block-frame coordinates.

    With V = U Q and Q = W exp(-it a) W*, the product rule gives
    V^-1 dV/dt = Q^-1 (U^* [dP/dt, P] U) Q - i a, with no differencing of V.
    """
    if path.calU is None:
        raise ValueError("build_periodic_gauge must run first")
    w = split0.full_frame
    k = split0.Nminus
    x = _sandwich_const(w, _sandwich_stacked(path.U, path.gen))
    qf = _block_phase_factor(path.grid, path.aminus, path.aplus)
    kf = _sandwich_stacked(qf, x)
    af = np.zeros((w.shape[0], w.shape[0]), dtype=complex)
    af[:k, :k] = path.aminus
    af[k:, k:] = path.aplus
    return kf - 1j * af, k


def berry_phase_trace(path: GaugePath, split0: SpectralSplit,
                      purity_tol: float = 1e-8, imag_tol: float = 1e-6) -> BerryPhase:
    """gamma = i * integral Tr(P_0 V^-1 dV/dt P_0) dt in the periodic gauge.

    The integrand is the trace of a skew-adjoint block, hence purely
    imaginary up to round-off; its real part is checked sample by sample and
    the imaginary part of the assembled phase must vanish to imag_tol.
    """
    kf, k = _gauge_velocity_blocks(path, split0)
    integrand = np.einsum("tii->t", kf[:, :k, :k])
    worst = float(np.abs(integrand.real).max(initial=0.0))
    if worst > purity_tol:
        raise NonRealPhase(f"integrand real part {worst:.3e} exceeds {purity_tol:g}")
    gamma_c = 1j * simpson(integrand, x=path.grid)
    if abs(gamma_c.imag) > imag_tol:
        raise NonRealPhase(f"phase has imaginary part {gamma_c.imag:.3e}")
    return BerryPhase(gamma=float(wrap_angle(gamma_c.real)), method="trace")


def wilson_loop_oracle(fam: PeriodicHamiltonian, level: LevelCurve = ZERO_LEVEL,
                       points: int = 8192, gap_tol: float = 1e-6,
                       degenerate_tol: float = 1e-8) -> BerryPhase:
    """Discretized holonomy: phase of det(F0* P_{n-1} ... P_1 F0).

    Pure linear algebra over a uniform grid of projectors; converges to the
    holonomy phase as the grid is refined and serves as an oracle that is
    independent of any differential-equation machinery.
    """
    if points < 64:
        raise ValueError(f"points must be >= 64, got {points}")
    ts = np.linspace(0.0, TWO_PI, points, endpoint=False)
    _, vecs, k, _ = grid_splits(fam, level, ts, gap_tol)
    f0 = vecs[0][:, :k]
    acc = f0
    for j in range(1, points):
        vj = vecs[j][:, :k]
        acc = vj @ (vj.conj().T @ acc)
    loop = f0.conj().T @ acc
    det = np.linalg.det(loop)
    if abs(det) < degenerate_tol:
        raise DegenerateProduct(
            f"|det| = {abs(det):.3e}: grid too coarse for the loop product"
        )
    return BerryPhase(gamma=float(np.angle(det)), method="wilson")


# ---------------------------------------------------------------------------
# exterior-power cross-check
# ---------------------------------------------------------------------------

def _exterior_lift_matrix(n: int, k: int) -> np.ndarray:
    """Linear map sending vec(H) to vec(H_k) on the k-th exterior power.

    Basis: ordered k-subsets of {0..n-1} in lexicographic order.  A one-body
    operator acts by replacing a single occupied index, with the usual
    antisymmetric sign (-1)^(position(q) + position(p)).
    """
    subsets = list(combinations(range(n), k))
    index = {s: i for i, s in enumerate(subsets)}
    d = len(subsets)
    lift = np.zeros((d * d, n * n))
    for b, sb in enumerate(subsets):
        for pos_q, q in enumerate(sb):
            rest = sb[:pos_q] + sb[pos_q + 1:]
            for p in range(n):
                if p in rest:
                    continue
                sa = tuple(sorted(rest + (p,)))
                a = index[sa]
                pos_p = sa.index(p)
                sign = (-1.0) ** (pos_q + pos_p)
                lift[a * d + b, p * n + q] += sign
    return lift


class ExteriorFamily(PeriodicHamiltonian):
    """Induced family on the k-th exterior power of C^n."""

    def __init__(self, base: PeriodicHamiltonian, k: int):
        if not 1 <= k <= base.n:
            raise ValueError(f"k must lie in [1, {base.n}], got {k}")
        self.base = base
        self.k = k
        self._lift = _exterior_lift_matrix(base.n, k)
        self.n = round(self._lift.shape[0] ** 0.5)

    def _apply(self, h):
        h = np.asarray(h, dtype=complex)
        flat = h.reshape(h.shape[:-2] + (-1,))
        out = flat @ self._lift.T
        return out.reshape(h.shape[:-2] + (self.n, self.n))

    def eval(self, t):
        return self._apply(self.base.eval(t))

    def eval_derivative(self, t):
        return self._apply(self.base.eval_derivative(t))

    def describe(self):
        return f"exterior(k={self.k}, {self.base.describe()})"


def exterior_level(fam: PeriodicHamiltonian, k: int) -> LevelCurve:
    """Level curve isolating the lowest band of the induced exterior family.

    The induced spectrum consists of k-fold eigenvalue sums; the lowest is
    the sum of the k smallest, and the nearest competitor replaces the k-th
    smallest with the (k+1)-th.  The curve sits halfway across that gap.
    """
    n = fam.n

    def lam(ts):
        evals = np.linalg.eigvalsh(np.asarray(fam.eval(ts), dtype=complex))
        low = evals[..., :k].sum(axis=-1)
        if k < n:
            return low + 0.5 * (evals[..., k] - evals[..., k - 1])
        return low + 1.0

    return LevelCurve(lam)


def berry_phase_exterior(fam: PeriodicHamiltonian, level: LevelCurve = ZERO_LEVEL,
                         steps: int = 2048, **odeopts) -> BerryPhase:
    """gamma recomputed as the rank-one holonomy of the lowest exterior band."""
    split0 = projector_below(np.asarray(fam.eval(0.0)), level(0.0))
    k = split0.Nminus
    if k < 1:
        raise GapViolation("below-level subspace is empty; no phase to compute")
    lifted = ExteriorFamily(fam, k)
    lifted_level = exterior_level(fam, k)
    path = kato_evolve(lifted, lifted_level, steps=steps, **odeopts)
    s0 = projector_below(np.asarray(lifted.eval(0.0)), lifted_level(0.0))
    if s0.Nminus != 1:
        raise GapViolation("lowest exterior band is not isolated")
    phase = berry_phase_holonomy(path, s0)
    return BerryPhase(gamma=phase.gamma, method="exterior")
