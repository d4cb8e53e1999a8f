"""Phases of zeta-regularized determinants of -i d/dt + A(t) on the circle.

For a first-order elliptic operator D = -i d/dt + A(t) acting on C^n-valued
loops, the regularized determinant exists for the two natural choices of
spectral cut (upper or lower half plane) and both reduce to finite-dimensional
monodromy data:

    det_+ D = det(Id - T(2pi)),
    det_- D = (-1)^n exp(i * integral Tr A dt) det(Id - T(2pi)),

where T solves dT/dt = -i A(t) T, T(0) = Id.  For the transport-adapted
(block-diagonal) form of D_m = -i d/dt - i m H(t), the below-level block
grows like e^{c m t} while the above-level block decays, so the growing
factor is kept in log form: dlog det T / dt = Tr(-iA) turns the determinant
of the big block into a quadrature, and only the decaying inverse is ever
propagated.  That route stays finite for arbitrarily large m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline

from .errors import (
    BlockLeakage,
    BoundViolation,
    NonInvertibleOperator,
    OdeToleranceFailure,
    OverflowRisk,
)
from .hamiltonians import LevelCurve, PeriodicHamiltonian, TWO_PI, ZERO_LEVEL, gap_margin
from .linalg import circular_distance, wrap_angle
from .spectral import SpectralSplit
from .transport import (
    BerryPhase,
    GaugePath,
    _block_phase_factor,
    _sandwich_const,
    _sandwich_stacked,
    berry_phase_exterior,
    berry_phase_holonomy,
    berry_phase_trace,
    build_periodic_gauge,
    kato_evolve,
    wilson_loop_oracle,
)

LOGNORM_LIMIT = math.log(1e250)


@dataclass
class FirstOrderOperator:
    """Coefficient data of D = -i d/dt + A(t) on C^n-valued loops.

    coeff maps an array of times to stacked A samples; m tags operators in
    the adiabatic family (used for default step counts), label is a free tag.
    """

    n: int
    coeff: Callable[[np.ndarray], np.ndarray]
    label: tuple = ("generic",)
    m: float | None = None

    def sample(self, steps: int) -> tuple[np.ndarray, np.ndarray]:
        """Times and coefficient samples on the RK4 half-step grid."""
        ts = np.linspace(0.0, TWO_PI, 2 * steps + 1)
        a = np.asarray(self.coeff(ts), dtype=complex)
        if a.shape != (ts.size, self.n, self.n):
            raise ValueError(f"coefficient returned shape {a.shape}")
        return ts, a


def schrodinger_operator(fam: PeriodicHamiltonian, m: float,
                         adjoint: bool = False) -> FirstOrderOperator:
    """D_m = -i d/dt - i m H(t), or its formal adjoint -i d/dt + i m H(t)."""
    sign = 1.0 if adjoint else -1.0

    def coeff(ts, _sign=sign):
        return _sign * 1j * m * np.asarray(fam.eval(ts), dtype=complex)

    label = ("D_m_adjoint" if adjoint else "D_m", float(m))
    return FirstOrderOperator(n=fam.n, coeff=coeff, label=label, m=float(m))


@dataclass
class Monodromy:
    """Fundamental-solution data at t = 2pi.

    logdetT is the complex log-determinant of T(2pi) accumulated by
    quadrature of Tr(-iA); it is exact up to quadrature error and never
    overflows.  segments holds partial transfer products whose ordered
    product is T(2pi); keeping each factor at moderate norm lets
    det(Id - T(2pi)) be evaluated without the catastrophic cancellation
    that the assembled product suffers for hyperbolic monodromies.
    blockwise is reserved for split-route diagnostics.
    """

    T2pi: np.ndarray
    logdetT: complex
    steps: int
    predicted_lognorm: float
    segments: list | None = None
    blockwise: dict | None = None


def default_steps(m: float | None) -> int:
    """Step count scaling that keeps e^{c m h} growth resolved per step."""
    if m is None:
        return 2048
    return max(2048, 256 * int(math.ceil(abs(m))))


def _rk4_transfers(samples: np.ndarray, h: float) -> np.ndarray:
    """Per-step RK4 transfer matrices for dT/dt = M(t) T.

    samples holds M on the half-step grid (2n+1 points); the result r[i]
    satisfies T_{i+1} = r[i] T_i with exactly the classic RK4 update.
    """
    m0 = samples[0:-1:2]
    m1 = samples[1::2]
    m2 = samples[2::2]
    k1 = m0
    k2 = m1 + (0.5 * h) * (m1 @ k1)
    k3 = m1 + (0.5 * h) * (m1 @ k2)
    k4 = m2 + h * (m2 @ k3)
    eye = np.eye(samples.shape[-1], dtype=complex)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _accumulate(transfers: np.ndarray, snapshots=()) -> tuple[np.ndarray, dict]:
    """Left-to-right product T_n = r_{n-1} ... r_0 with optional snapshots.

    snapshots holds step indices (0 means the identity); the returned dict
    maps each index to the partial product after that many steps.
    """
    n, k = transfers.shape[0], transfers.shape[-1]
    wanted = set(int(i) for i in snapshots)
    snaps: dict[int, np.ndarray] = {}
    if 0 in wanted:
        snaps[0] = np.eye(k, dtype=complex)
    if k == 1:
        prod = np.cumprod(transfers[:, 0, 0])
        for i in wanted:
            if i > 0:
                snaps[i] = prod[i - 1].reshape(1, 1)
        final = prod[-1].reshape(1, 1)
    else:
        acc = np.eye(k, dtype=complex)
        for i in range(n):
            acc = transfers[i] @ acc
            if (i + 1) in wanted:
                snaps[i + 1] = acc.copy()
        final = acc
    if not np.isfinite(final).all():
        raise OdeToleranceFailure("monodromy product became non-finite; increase steps")
    return final, snaps


SEGMENT_LOGNORM = 12.0


def _segment_products(transfers: np.ndarray, n_segments: int) -> list:
    """Ordered partial products of the per-step transfers, split into chunks.

    The full monodromy is segments[-1] @ ... @ segments[0]; each factor
    accumulates only a fraction of the total exponential growth.
    """
    k = transfers.shape[-1]
    out = []
    for chunk in np.array_split(np.arange(transfers.shape[0]), n_segments):
        acc = np.eye(k, dtype=complex)
        for i in chunk:
            acc = transfers[i] @ acc
        out.append(acc)
    return out


def monodromy(op: FirstOrderOperator, steps: int | None = None,
              lognorm_limit: float = LOGNORM_LIMIT) -> Monodromy:
    """T(2pi) and log det T(2pi) for dT/dt = -i A(t) T via fixed-step RK4.

    Growth is predicted from integral ||A(t)||_2 dt on a coarse grid before
    any expensive work; if T(2pi) could exceed ~1e250 in norm the call
    refuses with OverflowRisk and the caller must use the block route.
    The transfer product is additionally stored in segments of moderate
    norm so downstream determinants stay accurate for hyperbolic T.
    """
    ts_coarse = np.linspace(0.0, TWO_PI, 257)
    a_coarse = np.asarray(op.coeff(ts_coarse), dtype=complex)
    norms = np.linalg.norm(a_coarse, ord=2, axis=(1, 2))
    predicted = float(np.trapezoid(norms, ts_coarse))
    if predicted > lognorm_limit:
        raise OverflowRisk(
            f"predicted log ||T(2pi)|| = {predicted:.1f} exceeds {lognorm_limit:.1f}; "
            "use the block route (det_phase_hat)"
        )
    n = default_steps(op.m) if steps is None else int(steps)
    ts, a = op.sample(n)
    if not np.isfinite(a).all():
        raise OdeToleranceFailure("coefficient samples are non-finite")
    msamples = -1j * a
    transfers = _rk4_transfers(msamples, TWO_PI / n)
    n_segments = max(1, int(math.ceil(predicted / SEGMENT_LOGNORM)))
    segments = _segment_products(transfers, n_segments)
    t2pi = segments[0]
    for seg in segments[1:]:
        t2pi = seg @ t2pi
    if not np.isfinite(t2pi).all():
        raise OdeToleranceFailure("monodromy product became non-finite; increase steps")
    logdet = simpson(np.einsum("tii->t", msamples), x=ts)
    return Monodromy(T2pi=t2pi, logdetT=complex(logdet), steps=n,
                     predicted_lognorm=predicted, segments=segments)


def _logdet_or_raise(b: np.ndarray, tol: float = 1e-12) -> tuple[float, float]:
    """(phase, log|det|) of b, raising when b is numerically singular.

    Singularity is judged by the condition of b (smallest vs largest singular
    value), not by |det| alone, so well-conditioned matrices of any scale pass.
    """
    if b.size:
        svals = np.linalg.svd(b, compute_uv=False)
        if not np.isfinite(svals).all() or svals[-1] <= tol * max(svals[0], 1.0):
            raise NonInvertibleOperator(
                f"Id - T(2pi) is numerically singular "
                f"(smallest/largest singular value = {svals[-1]:.3e}/{svals[0]:.3e})"
            )
    sign, logabs = np.linalg.slogdet(b)
    return float(np.angle(sign)), float(logabs)


def _shooting_matrix(segments: list) -> np.ndarray:
    """Block-cyclic matrix C with det C = det(Id - segments[-1] @ ... @ segments[0]).

    C couples one unknown per segment boundary: row j enforces
    x_j = segments[j-1] x_{j-1} and row 0 closes the loop.  Unlike the
    assembled product, C's entries stay at the scale of one segment, and for
    hyperbolic monodromies C is well conditioned, so its LU determinant
    gives an accurate phase where det(Id - T(2pi)) cancels catastrophically.
    """
    j = len(segments)
    k = segments[0].shape[-1]
    c = np.zeros((j * k, j * k), dtype=complex)
    for i in range(j):
        c[i * k:(i + 1) * k, i * k:(i + 1) * k] = np.eye(k)
        prev = (i - 1) % j
        c[i * k:(i + 1) * k, prev * k:(prev + 1) * k] -= segments[prev]
    return c


def det_pm_bfk(mon: Monodromy, op: FirstOrderOperator) -> tuple[complex, complex]:
    """Complex logs of det_+ and det_- from the monodromy.

        log det_+ = log det(Id - T(2pi))
        log det_- = i pi n + i*integral Tr A dt + log det(Id - T(2pi))

    with i*integral Tr A dt = -log det T(2pi).  Both imaginary parts are
    reduced to (-pi, pi].  det(Id - T(2pi)) is evaluated through the
    segment (multiple-shooting) form when available.
    """
    if mon.segments and len(mon.segments) > 1:
        b = _shooting_matrix(mon.segments)
    else:
        b = np.eye(op.n, dtype=complex) - mon.T2pi
    phase, logabs = _logdet_or_raise(b)
    log_plus = complex(logabs, phase)
    re_minus = logabs - mon.logdetT.real
    im_minus = wrap_angle(math.pi * op.n + phase - mon.logdetT.imag)
    return log_plus, complex(re_minus, float(im_minus))


# ---------------------------------------------------------------------------
# transport-adapted block operators
# ---------------------------------------------------------------------------

def _split_blocks(x, k):
    """(diagonal-block part, off-diagonal-block part) of stacked matrices."""
    diag = np.zeros_like(x)
    diag[..., :k, :k] = x[..., :k, :k]
    diag[..., k:, k:] = x[..., k:, k:]
    return diag, x - diag


@dataclass
class HatBlocks:
    """Coefficients of the block-diagonalized adiabatic operator.

    In the periodic gauge V(t) the conjugated operator V^-1 D_m V has the
    coefficient -i m Ht(t) - i K(t) with Ht = V^-1 H V block-diagonal and
    K = V^-1 dV/dt.  Dropping the off-diagonal blocks of K yields the
    decoupled plus/minus operators; the dropped part is the coupling R.

    The slowly varying frame quantities are stored as cubic splines over the
    gauge grid, so block coefficients can be sampled on step grids that
    scale with m without re-integrating the transport equation.
    """

    m: float
    n: int
    k: int
    grid: np.ndarray
    margin: float
    aminus: np.ndarray
    aplus: np.ndarray
    coupling: np.ndarray            # R = i * offdiag(K) at the grid nodes
    plus_op: FirstOrderOperator = field(default=None)
    minus_op: FirstOrderOperator = field(default=None)
    _spline_y: CubicSpline = field(default=None, repr=False)
    _spline_x: CubicSpline = field(default=None, repr=False)
    _af: np.ndarray = field(default=None, repr=False)

    def _parts(self, ts):
        """(Ht, K) in block-frame coordinates at arbitrary times."""
        ts = np.asarray(ts, dtype=float)
        qf = _block_phase_factor(ts, self.aminus, self.aplus)
        ht = _sandwich_stacked(qf, self._spline_y(ts))
        kf = _sandwich_stacked(qf, self._spline_x(ts)) - 1j * self._af
        return ht, kf

    def minus_coeff(self, ts, m):
        """dT/dt coefficient of the below-level block: -(m Ht^- + K^-)."""
        ht, kf = self._parts(ts)
        k = self.k
        return -(m * ht[..., :k, :k] + kf[..., :k, :k])

    def plus_coeff(self, ts, m):
        """dT/dt coefficient of the above-level block: -(m Ht^+ + K^+)."""
        ht, kf = self._parts(ts)
        k = self.k
        return -(m * ht[..., k:, k:] + kf[..., k:, k:])

    def hat_coeff(self, ts, m, s=0.0):
        """Full n x n operator coefficient A with the coupling scaled by s.

        s = 0 is the decoupled block operator; s = 1 restores the gauge
        conjugate of D_m exactly.
        """
        ht, kf = self._parts(ts)
        ht_diag, _ = _split_blocks(ht, self.k)
        k_diag, k_off = _split_blocks(kf, self.k)
        a = -1j * (m * ht_diag + k_diag)
        if s:
            a = a - s * 1j * k_off
        return a


def build_hat_blocks(fam: PeriodicHamiltonian, gauge: GaugePath,
                     split0: SpectralSplit, m: float,
                     leak_tol: float = 1e-5) -> HatBlocks:
    """Split the gauge-conjugated operator into decoupled spectral blocks.

    Verifies that the conjugated family Ht is block-diagonal to leak_tol
    relative to ||H|| and returns per-block first-order operators together
    with the off-diagonal coupling R (which is traceless by construction).
    """
    if gauge.calU is None:
        raise ValueError("gauge has no periodic closure; run build_periodic_gauge first")
    w = split0.full_frame
    k = split0.Nminus
    dim = fam.n
    ts = gauge.grid
    hs = np.asarray(fam.eval(ts), dtype=complex)
    y = _sandwich_const(w, _sandwich_stacked(gauge.U, hs))
    x = _sandwich_const(w, _sandwich_stacked(gauge.U, gauge.gen))
    af = np.zeros((dim, dim), dtype=complex)
    af[:k, :k] = gauge.aminus
    af[k:, k:] = gauge.aplus

    qf = _block_phase_factor(ts, gauge.aminus, gauge.aplus)
    ht_nodes = _sandwich_stacked(qf, y)
    _, ht_off = _split_blocks(ht_nodes, k)
    hscale = max(1.0, float(np.linalg.norm(hs, axis=(1, 2)).max()))
    leak = float(np.linalg.norm(ht_off, axis=(1, 2)).max())
    if leak > leak_tol * hscale:
        raise BlockLeakage(
            f"conjugated family leaks across the splitting: {leak:.3e} "
            f"(tolerance {leak_tol * hscale:.3e})"
        )
    kf_nodes = _sandwich_stacked(qf, x) - 1j * af
    _, k_off = _split_blocks(kf_nodes, k)

    blocks = HatBlocks(
        m=float(m), n=dim, k=k, grid=ts, margin=gauge.margin,
        aminus=gauge.aminus, aplus=gauge.aplus,
        coupling=1j * k_off,
        _spline_y=CubicSpline(ts, y, axis=0),
        _spline_x=CubicSpline(ts, x, axis=0),
        _af=af,
    )
    blocks.plus_op = FirstOrderOperator(
        n=dim - k, coeff=lambda t: 1j * blocks.plus_coeff(t, blocks.m),
        label=("D_hat_plus", float(m)), m=float(m))
    blocks.minus_op = FirstOrderOperator(
        n=k, coeff=lambda t: 1j * blocks.minus_coeff(t, blocks.m),
        label=("D_hat_minus", float(m)), m=float(m))
    return blocks


@dataclass
class DetPhaseFragment:
    """Phases of det_+- of the decoupled block operator at one m."""

    m: float
    imlogdet_plus: float
    imlogdet_minus: float
    steps: int
    dev_plus: float        # |det(Id - T^+(2pi)) - 1|
    dev_minus_inv: float   # |det(Id - (T^-)^{-1}(2pi)) - 1|
    blockwise: dict


def _propagate_blocks(blocks: HatBlocks, m: float, steps: int, snapshots=()):
    """T^+(t), (T^-)^{-1}(t) and log det T^-(2pi), never forming T^-."""
    h = TWO_PI / steps
    ts = np.linspace(0.0, TWO_PI, 2 * steps + 1)
    m_minus = blocks.minus_coeff(ts, m)
    m_plus = blocks.plus_coeff(ts, m)
    if not (np.isfinite(m_minus).all() and np.isfinite(m_plus).all()):
        raise OdeToleranceFailure("block coefficients are non-finite")
    t_plus, snaps_plus = _accumulate(_rk4_transfers(m_plus, h), snapshots)
    # S = (T^-)^{-1} solves dS/dt = -S M^-; transpose to a left system.
    sw = -np.swapaxes(m_minus, -1, -2)
    s_t, snaps_s = _accumulate(_rk4_transfers(sw, h), snapshots)
    s2pi = s_t.T
    snaps_s = {i: v.T for i, v in snaps_s.items()}
    logdet_tminus = complex(simpson(np.einsum("tii->t", m_minus), x=ts))
    return t_plus, snaps_plus, s2pi, snaps_s, logdet_tminus


def det_phase_hat(blocks: HatBlocks, m: float, steps: int | None = None) -> DetPhaseFragment:
    """Im log det_+- of the decoupled block operator, stable for large m.

    The growing below-level factor enters only through log det T^- (a
    quadrature, exact in log domain) and the decaying inverse (T^-)^{-1}:

        det(Id - T^-) = (-1)^{k} det T^- det(Id - (T^-)^{-1}),

    so no floating-point overflow occurs for any m.  The minus-cut prefactor
    (-1)^n e^{m integral Tr H dt} contributes exactly n pi to the phase.
    """
    n_steps = default_steps(m) if steps is None else int(steps)
    t_plus, _, s2pi, _, logdet_tminus = _propagate_blocks(blocks, m, n_steps)
    k, dim = blocks.k, blocks.n
    phase_p, logabs_p = _phase_and_dev(t_plus)
    phase_s, logabs_s = _phase_and_dev(s2pi)
    raw_plus = math.pi * k + logdet_tminus.imag + phase_p[0] + phase_s[0]
    frag = DetPhaseFragment(
        m=float(m),
        imlogdet_plus=float(wrap_angle(raw_plus)),
        imlogdet_minus=float(wrap_angle(math.pi * dim + raw_plus)),
        steps=n_steps,
        dev_plus=phase_p[1],
        dev_minus_inv=phase_s[1],
        blockwise={
            "Tplus2pi": t_plus,
            "TminusInv2pi": s2pi,
            "logdetTminus": logdet_tminus,
        },
    )
    return frag


def _phase_and_dev(t2pi: np.ndarray) -> tuple[tuple[float, float], float]:
    """((phase, |det - 1|), log|det|) of Id - T for a decaying block."""
    b = np.eye(t2pi.shape[-1], dtype=complex) - t2pi
    phase, logabs = _logdet_or_raise(b)
    det = np.exp(logabs) * np.exp(1j * phase)
    return (phase, float(abs(det - 1.0))), logabs


@dataclass
class DetPhaseReport:
    """One row of the asymptotic verification at a single m."""

    m: float
    gamma: BerryPhase
    imlogdet_plus: float
    imlogdet_minus: float
    predicted_plus: float
    predicted_minus: float
    gap_plus: float
    gap_minus: float


def _compute_gamma(fam, level, path, split0, method, gauge_steps, wilson_points):
    if method == "holonomy":
        return berry_phase_holonomy(path, split0)
    if method == "trace":
        return berry_phase_trace(path, split0)
    if method == "wilson":
        return wilson_loop_oracle(fam, level, points=wilson_points)
    if method == "exterior":
        return berry_phase_exterior(fam, level, steps=gauge_steps)
    raise ValueError(f"unknown gamma method {method!r}")


def theorem_verify(fam: PeriodicHamiltonian, mlist, level: LevelCurve = ZERO_LEVEL,
                   gauge_steps: int = 2048, det_steps: int | None = None,
                   gamma_method: str = "holonomy", wilson_points: int = 8192,
                   deriv_method: str = "finite_difference") -> list[DetPhaseReport]:
    """Compare Im log det_+- D_m against the holonomy prediction over mlist.

    The prediction is N_mp * pi + gamma mod 2pi (minus-count for det_+,
    plus-count for det_-); each report row records both phases, both
    predictions, and the circular gaps.
    """
    mlist = [float(m) for m in mlist]
    if not mlist or any(m <= 0 for m in mlist) or any(
            b <= a for a, b in zip(mlist, mlist[1:])):
        raise ValueError("mlist must be non-empty, positive, strictly ascending")
    path = kato_evolve(fam, level, steps=gauge_steps, deriv_method=deriv_method)
    split0 = path.split0
    path = build_periodic_gauge(path, split0)
    gamma = _compute_gamma(fam, level, path, split0, gamma_method,
                           gauge_steps, wilson_points)
    blocks = build_hat_blocks(fam, path, split0, m=mlist[-1])
    predicted_plus = float(wrap_angle(math.pi * split0.Nminus + gamma.gamma))
    predicted_minus = float(wrap_angle(math.pi * split0.Nplus + gamma.gamma))
    reports = []
    for m in mlist:
        frag = det_phase_hat(blocks, m, steps=det_steps)
        reports.append(DetPhaseReport(
            m=m,
            gamma=gamma,
            imlogdet_plus=frag.imlogdet_plus,
            imlogdet_minus=frag.imlogdet_minus,
            predicted_plus=predicted_plus,
            predicted_minus=predicted_minus,
            gap_plus=float(circular_distance(frag.imlogdet_plus, predicted_plus)),
            gap_minus=float(circular_distance(frag.imlogdet_minus, predicted_minus)),
        ))
    return reports


def gaps_nonincreasing(reports: list[DetPhaseReport], slack: float = 1.1,
                       floor: float = 1e-5) -> tuple[bool, bool]:
    """Whether the +/- gaps decay monotonically within multiplicative slack.

    floor absorbs accidental near-cancellations: a successor gap below the
    floor (or below slack * predecessor + floor) counts as non-increasing.
    """
    def ok(gaps):
        return all(b <= slack * a + floor for a, b in zip(gaps, gaps[1:]))

    return (ok([r.gap_plus for r in reports]), ok([r.gap_minus for r in reports]))


@dataclass
class SweepPoint:
    s: float
    imlogdet_plus: float
    imlogdet_minus: float


def deformation_sweep(fam: PeriodicHamiltonian, gauge: GaugePath,
                      split0: SpectralSplit, m: float, slist,
                      steps: int | None = None, m_cap: float = 20.0) -> list[SweepPoint]:
    """Im log det_+- of the coupled operator as the coupling is scaled by s.

    Runs the full n x n monodromy (representable only for moderate m, hence
    the cap); s = 0 reproduces the decoupled block operator and s = 1 the
    gauge conjugate of D_m itself.
    """
    if m > m_cap:
        raise OverflowRisk(
            f"m = {m:g} exceeds the full-monodromy cap {m_cap:g}; "
            "the deformation sweep needs representable T(2pi)"
        )
    blocks = build_hat_blocks(fam, gauge, split0, m)
    n_steps = default_steps(m) if steps is None else int(steps)
    out = []
    for s in slist:
        op = FirstOrderOperator(
            n=fam.n,
            coeff=lambda ts, _s=float(s): blocks.hat_coeff(ts, m, _s),
            label=("D_tilde", float(m), float(s)),
            m=float(m),
        )
        mon = monodromy(op, steps=n_steps)
        log_plus, log_minus = det_pm_bfk(mon, op)
        out.append(SweepPoint(s=float(s), imlogdet_plus=float(log_plus.imag),
                              imlogdet_minus=float(log_minus.imag)))
    return out


@dataclass
class RadiusReport:
    """Spectral-radius bound check for the decoupled blocks."""

    m: float
    c: float
    times: np.ndarray
    radii_plus: np.ndarray
    radii_minus_inv: np.ndarray
    bounds: np.ndarray
    ok: bool


def spectral_radius_check(blocks: HatBlocks, m: float, tgrid: int = 32,
                          steps: int | None = None,
                          slack: float = 1e-6) -> RadiusReport:
    """Verify spec T^+(t) decays and spec T^-(t) grows at rate c m / 2.

    c is the measured gap margin.  The growing block is checked through its
    inverse: every eigenvalue of T^-(t) has modulus >= e^{c m t / 2} iff the
    spectral radius of (T^-)^{-1}(t) is <= e^{-c m t / 2}.
    """
    n_steps = default_steps(m) if steps is None else int(steps)
    idx = np.unique(np.round(np.linspace(0, n_steps, tgrid)).astype(int))
    _, snaps_plus, _, snaps_s, _ = _propagate_blocks(blocks, m, n_steps, snapshots=idx)
    times = idx * (TWO_PI / n_steps)
    c = blocks.margin

    def radius(mat):
        if mat.size == 0:
            return 0.0
        return float(np.abs(np.linalg.eigvals(mat)).max())

    r_plus = np.array([radius(snaps_plus[i]) for i in idx])
    r_s = np.array([radius(snaps_s[i]) for i in idx])
    bounds = np.exp(-0.5 * c * m * times)
    for label, radii in (("above-level block", r_plus), ("inverse below-level block", r_s)):
        bad = radii > bounds * (1.0 + slack)
        if bad.any():
            j = int(np.argmax(bad))
            raise BoundViolation(
                f"{label}: spectral radius {radii[j]:.6e} exceeds bound "
                f"{bounds[j]:.6e} at t = {times[j]:.6f}, m = {m:g}"
            )
    return RadiusReport(m=float(m), c=c, times=times, radii_plus=r_plus,
                        radii_minus_inv=r_s, bounds=bounds, ok=True)


@dataclass
class ConjugateReport:
    """Consistency of complex conjugation with the opposite spectral cut."""

    m: float
    im_plus: float
    minus_adjoint: float
    distance: float
    ok: bool


def conjugate_identity_check(fam: PeriodicHamiltonian, m: float,
                             level: LevelCurve = ZERO_LEVEL,
                             steps: int | None = None,
                             tol: float = 1e-6) -> ConjugateReport:
    """Check Im log det_+ D_m = -Im log det_- D_m^* mod 2pi.

    The formal adjoint D_m^* = -i d/dt + i m H(t) is integrated with its own
    monodromy; conjugating a determinant swaps the spectral cut.
    """
    gap_margin(fam, level)
    op = schrodinger_operator(fam, m)
    log_plus, _ = det_pm_bfk(monodromy(op, steps=steps), op)
    op_adj = schrodinger_operator(fam, m, adjoint=True)
    _, log_minus_adj = det_pm_bfk(monodromy(op_adj, steps=steps), op_adj)
    lhs = float(log_plus.imag)
    rhs = float(-log_minus_adj.imag)
    dist = float(circular_distance(lhs, rhs))
    return ConjugateReport(m=float(m), im_plus=lhs, minus_adjoint=rhs,
                           distance=dist, ok=dist <= tol)
