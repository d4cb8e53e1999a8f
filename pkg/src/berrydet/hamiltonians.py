"""Closed-form 2pi-periodic Hermitian families and level curves.

A family evaluates H(t) and its analytic derivative dH/dt at scalar or
array arguments (array input returns a stacked (..., n, n) block).  All
families are trigonometric polynomials in t, so smoothness and periodicity
hold by construction.
"""

from __future__ import annotations

import numpy as np

from .errors import BadSpec, GapNotAchievable, GapViolation

TWO_PI = 2.0 * np.pi

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


class LevelCurve:
    """Real level curve t -> lambda(t); constant by default."""

    def __init__(self, value=0.0):
        if callable(value):
            self._fn = value
            self.constant = None
        else:
            self.constant = float(value)
            self._fn = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self._fn is None:
            out = np.full(t.shape, self.constant)
        else:
            out = np.asarray(self._fn(t), dtype=float)
        return float(out) if out.ndim == 0 else out

    def __repr__(self):
        if self.constant is not None:
            return f"LevelCurve({self.constant})"
        return "LevelCurve(<callable>)"


ZERO_LEVEL = LevelCurve(0.0)


def _check_coefficient(c, n, what):
    a = np.asarray(c, dtype=complex)
    if a.shape != (n, n):
        raise BadSpec(f"{what} must have shape ({n}, {n}), got {a.shape}")
    if not np.isfinite(a).all():
        raise BadSpec(f"{what} has non-finite entries")
    return a


class PeriodicHamiltonian:
    """Base class: smooth family H(t) = H(t + 2pi), Hermitian for real t."""

    n: int

    def eval(self, t) -> np.ndarray:
        raise NotImplementedError

    def eval_derivative(self, t) -> np.ndarray:
        raise NotImplementedError

    def as_fourier(self) -> "FourierFamily":
        raise NotImplementedError

    def reversed(self) -> "PeriodicHamiltonian":
        """The family traversed backwards, t -> H(-t)."""
        return self.as_fourier().reversed()

    def translated(self, tau: float) -> "PeriodicHamiltonian":
        """The family shifted in time, t -> H(t + tau)."""
        return self.as_fourier().translated(tau)

    def describe(self) -> str:
        return type(self).__name__


class SpinHalfFamily(PeriodicHamiltonian):
    """H(t) = b0 (sin(theta) cos(t) sx + sin(theta) sin(t) sy + cos(theta) sz).

    A magnetic field of strength b0 precessing at polar angle theta; the
    eigenvalues are +-b0 for every t.
    """

    n = 2

    def __init__(self, theta: float, b0: float = 1.0):
        if not np.isfinite(theta) or not np.isfinite(b0):
            raise BadSpec("theta and b0 must be finite")
        if b0 <= 0:
            raise BadSpec("b0 must be positive")
        self.theta = float(theta)
        self.b0 = float(b0)

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        st, ct = np.sin(self.theta), np.cos(self.theta)
        nx = (st * np.cos(t))[..., None, None]
        ny = (st * np.sin(t))[..., None, None]
        nz = np.broadcast_to(ct, t.shape)[..., None, None]
        return self.b0 * (nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z)

    def eval_derivative(self, t):
        t = np.asarray(t, dtype=float)
        st = np.sin(self.theta)
        nx = (-st * np.sin(t))[..., None, None]
        ny = (st * np.cos(t))[..., None, None]
        return self.b0 * (nx * PAULI_X + ny * PAULI_Y)

    def as_fourier(self):
        c0 = self.b0 * np.cos(self.theta) * PAULI_Z
        # e^{it} c1 + e^{-it} c1* reproduces the transverse rotating field
        c1 = self.b0 * np.sin(self.theta) * np.array([[0, 0], [1, 0]], dtype=complex)
        return FourierFamily(c0, [c1])

    def describe(self):
        return f"spin_half(theta={self.theta:g}, b0={self.b0:g})"


class DiagConstFamily(PeriodicHamiltonian):
    """Constant diagonal family H(t) = diag(energies)."""

    def __init__(self, energies):
        e = np.asarray(energies, dtype=float)
        if e.ndim != 1 or e.size == 0 or not np.isfinite(e).all():
            raise BadSpec("energies must be a non-empty finite 1-d sequence")
        self.energies = e
        self.n = e.size

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        h = np.diag(self.energies).astype(complex)
        return np.zeros(t.shape + (self.n, self.n), dtype=complex) + h

    def eval_derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape + (self.n, self.n), dtype=complex)

    def as_fourier(self):
        return FourierFamily(np.diag(self.energies).astype(complex), [])

    def describe(self):
        return f"diag_const({np.array2string(self.energies, separator=',')})"


class FourierFamily(PeriodicHamiltonian):
    """Trigonometric family H(t) = C0 + sum_k (C_k e^{ikt} + C_k* e^{-ikt})."""

    def __init__(self, c0, coefficients=()):
        c0 = np.asarray(c0, dtype=complex)
        if c0.ndim != 2 or c0.shape[0] != c0.shape[1]:
            raise BadSpec(f"C0 must be square, got shape {c0.shape}")
        n = c0.shape[0]
        if not np.isfinite(c0).all():
            raise BadSpec("C0 has non-finite entries")
        if np.linalg.norm(c0 - c0.conj().T) > 1e-12 * max(1.0, np.linalg.norm(c0)):
            raise BadSpec("C0 must be Hermitian")
        self.c0 = 0.5 * (c0 + c0.conj().T)
        self.coefficients = [
            _check_coefficient(c, n, f"C{k}") for k, c in enumerate(coefficients, start=1)
        ]
        self.n = n

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.n, self.n), dtype=complex) + self.c0
        for k, ck in enumerate(self.coefficients, start=1):
            ph = np.exp(1j * k * t)[..., None, None]
            out += ph * ck + np.conj(ph) * ck.conj().T
        return out

    def eval_derivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.n, self.n), dtype=complex)
        for k, ck in enumerate(self.coefficients, start=1):
            ph = (1j * k) * np.exp(1j * k * t)[..., None, None]
            out += ph * ck + np.conj(ph) * ck.conj().T
        return out

    def as_fourier(self):
        return self

    def reversed(self):
        # H(-t): each C_k becomes its adjoint
        return FourierFamily(self.c0, [c.conj().T for c in self.coefficients])

    def translated(self, tau):
        tau = float(tau)
        return FourierFamily(
            self.c0,
            [c * np.exp(1j * k * tau) for k, c in enumerate(self.coefficients, start=1)],
        )

    def describe(self):
        return f"fourier(n={self.n}, harmonics={len(self.coefficients)})"


def _min_margin(fam: PeriodicHamiltonian, level: LevelCurve, grid: int) -> tuple[float, float]:
    """(min distance from lambda(t) to spec H(t), argmin t) over a uniform grid."""
    ts = np.linspace(0.0, TWO_PI, grid, endpoint=False)
    evals = np.linalg.eigvalsh(fam.eval(ts))
    dist = np.abs(evals - np.asarray(level(ts))[:, None]).min(axis=1)
    i = int(np.argmin(dist))
    return float(dist[i]), float(ts[i])


def gap_margin(fam: PeriodicHamiltonian, level: LevelCurve = ZERO_LEVEL,
               grid: int = 256, tol: float = 1e-6) -> float:
    """Minimum distance from the level curve to the spectrum over a grid.

    Raises GapViolation (with the offending time) when the margin does not
    exceed tol.  The grid must have at least 16 points.
    """
    if grid < 16:
        raise ValueError(f"grid must have >= 16 points, got {grid}")
    margin, t_bad = _min_margin(fam, level, grid)
    if margin <= tol:
        raise GapViolation(
            f"level curve touches spectrum: margin {margin:.3e} at t = {t_bad:.6f} "
            f"for {fam.describe()}"
        )
    return margin


def random_gapped(n: int, harmonics: int = 2, seed: int = 0, target_gap: float = 0.5,
                  nminus: int | None = None, retries: int = 64) -> FourierFamily:
    """Seeded random trigonometric family with a guaranteed gap at level 0.

    Draws a split diagonal part (nminus energies below zero, the rest above)
    plus random harmonics with coefficient scale decaying like 2^{-k}, and
    rejects draws until gap_margin >= target_gap.
    """
    if n < 2:
        raise BadSpec("n must be at least 2")
    nminus = n // 2 if nminus is None else int(nminus)
    if not 1 <= nminus <= n - 1:
        raise BadSpec(f"nminus must lie in [1, {n - 1}], got {nminus}")
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        d = np.concatenate([
            -(1.0 + 0.5 * rng.random(nminus)),
            +(1.0 + 0.5 * rng.random(n - nminus)),
        ])
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c0 = np.diag(d).astype(complex) + 0.1 * (g + g.conj().T)
        cks = []
        for k in range(1, harmonics + 1):
            ck = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            cks.append(0.12 * 2.0 ** (-k) * ck / np.sqrt(n))
        fam = FourierFamily(c0, cks)
        margin, _ = _min_margin(fam, ZERO_LEVEL, 256)
        counts = (np.linalg.eigvalsh(fam.eval(np.linspace(0, TWO_PI, 64, endpoint=False)))
                  < 0.0).sum(axis=1)
        if margin >= target_gap and np.all(counts == nminus):
            return fam
    raise GapNotAchievable(
        f"no draw reached gap {target_gap} with nminus={nminus} in {retries} tries (seed {seed})"
    )


def matrix_from_pairs(data, what="matrix") -> np.ndarray:
    """Decode a nested-list matrix whose entries are [re, im] pairs."""
    a = np.asarray(data, dtype=float)
    if a.ndim != 3 or a.shape[-1] != 2 or a.shape[0] != a.shape[1]:
        raise BadSpec(f"{what} must be an n x n nest of [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def matrix_to_pairs(m) -> list:
    """Inverse of matrix_from_pairs."""
    a = np.asarray(m, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def build_family(spec: dict) -> PeriodicHamiltonian:
    """Construct a family from a tagged mapping (the config-file form).

    Recognized tags: spin_half, diag_const, fourier, random_gapped.
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise BadSpec("family spec must be a mapping with a 'type' tag")
    kind = spec["type"]
    known = {
        "spin_half": {"theta", "b0"},
        "diag_const": {"energies"},
        "fourier": {"c0", "coefficients"},
        "random_gapped": {"n", "harmonics", "seed", "target_gap", "nminus"},
    }
    if kind not in known:
        raise BadSpec(f"unknown family type {kind!r}")
    extra = set(spec) - known[kind] - {"type"}
    if extra:
        raise BadSpec(f"unknown keys for family {kind!r}: {sorted(extra)}")
    try:
        if kind == "spin_half":
            return SpinHalfFamily(spec["theta"], spec.get("b0", 1.0))
        if kind == "diag_const":
            return DiagConstFamily(spec["energies"])
        if kind == "fourier":
            c0 = matrix_from_pairs(spec["c0"], "c0")
            cks = [matrix_from_pairs(c, f"C{k}")
                   for k, c in enumerate(spec.get("coefficients", []), start=1)]
            return FourierFamily(c0, cks)
        return random_gapped(
            int(spec["n"]),
            harmonics=int(spec.get("harmonics", 2)),
            seed=int(spec.get("seed", 0)),
            target_gap=float(spec.get("target_gap", 0.5)),
            nminus=spec.get("nminus"),
        )
    except KeyError as exc:
        raise BadSpec(f"family {kind!r} is missing required key {exc.args[0]!r}") from exc
