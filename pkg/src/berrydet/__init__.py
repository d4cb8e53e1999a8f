"""Berry phases and regularized determinant phases of periodic Hermitian families.

The library computes, for a smooth 2pi-periodic Hermitian family H(t):

* the Berry phase of the below-level spectral subspace, by parallel
  transport (holonomy), by a trace integral in a periodic gauge, by a
  discrete Wilson loop, and by an exterior-power line-bundle lift;
* the phase of the zeta-regularized determinants (both spectral cuts) of
  D_m = -i d/dt - i m H(t), through the monodromy of the associated
  first-order system, in a block-factorized form that stays finite for
  arbitrarily large m;
* diagnostics: the coupling deformation sweep, spectral-radius bounds for
  the block monodromies, and the complex-conjugation identity.

The asymptotic statement under test: as m grows, Im log det_+- D_m
approaches (number of levels on the -+ side) * pi + Berry phase, mod 2pi.
"""

from .errors import (
    BadSpec,
    BerryDetError,
    BlockLeakage,
    BoundViolation,
    ConfigError,
    ConvergenceFailure,
    DegenerateProduct,
    GapNotAchievable,
    GapViolation,
    NonInvertibleOperator,
    NonRealPhase,
    NonUnitaryHolonomy,
    NotHermitian,
    NotUnitary,
    OdeToleranceFailure,
    OverflowRisk,
    SingularInput,
)
from .linalg import (
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
from .hamiltonians import (
    DiagConstFamily,
    FourierFamily,
    LevelCurve,
    PeriodicHamiltonian,
    SpinHalfFamily,
    ZERO_LEVEL,
    build_family,
    gap_margin,
    matrix_from_pairs,
    matrix_to_pairs,
    random_gapped,
)
from .spectral import (
    SpectralSplit,
    projector_below,
    projector_derivative,
)
from .transport import (
    BerryPhase,
    ExteriorFamily,
    GaugePath,
    berry_phase_exterior,
    berry_phase_holonomy,
    berry_phase_trace,
    build_periodic_gauge,
    exterior_level,
    kato_evolve,
    wilson_loop_oracle,
)
from .determinant import (
    ConjugateReport,
    DetPhaseFragment,
    DetPhaseReport,
    FirstOrderOperator,
    HatBlocks,
    Monodromy,
    RadiusReport,
    SweepPoint,
    build_hat_blocks,
    conjugate_identity_check,
    det_phase_hat,
    det_pm_bfk,
    deformation_sweep,
    gaps_nonincreasing,
    monodromy,
    schrodinger_operator,
    spectral_radius_check,
    theorem_verify,
)
from .cli import (
    DEMO_CONFIG,
    ReportRow,
    RunConfig,
    RunReport,
    config_hash,
    emit_csv,
    main,
    run_config,
)

__version__ = "0.1.0"

__all__ = [
    # errors
    "BadSpec", "BerryDetError", "BlockLeakage", "BoundViolation", "ConfigError",
    "ConvergenceFailure", "DegenerateProduct", "GapNotAchievable", "GapViolation",
    "NonInvertibleOperator", "NonRealPhase", "NonUnitaryHolonomy", "NotHermitian",
    "NotUnitary", "OdeToleranceFailure", "OverflowRisk", "SingularInput",
    # linear algebra
    "TWO_PI", "circular_distance", "det_phase", "expm", "herm_eig", "hermitize",
    "polar_unitary", "selfadjoint_log_unitary", "wrap_angle",
    # families
    "DiagConstFamily", "FourierFamily", "LevelCurve", "PeriodicHamiltonian",
    "SpinHalfFamily", "ZERO_LEVEL", "build_family", "gap_margin",
    "matrix_from_pairs", "matrix_to_pairs", "random_gapped",
    # spectral splitting
    "SpectralSplit", "projector_below", "projector_derivative",
    # transport and Berry phases
    "BerryPhase", "ExteriorFamily", "GaugePath", "berry_phase_exterior",
    "berry_phase_holonomy", "berry_phase_trace", "build_periodic_gauge",
    "exterior_level", "kato_evolve", "wilson_loop_oracle",
    # determinants
    "ConjugateReport", "DetPhaseFragment", "DetPhaseReport", "FirstOrderOperator",
    "HatBlocks", "Monodromy", "RadiusReport", "SweepPoint", "build_hat_blocks",
    "conjugate_identity_check", "det_phase_hat", "det_pm_bfk", "deformation_sweep",
    "gaps_nonincreasing", "monodromy", "schrodinger_operator",
    "spectral_radius_check", "theorem_verify",
    # cli
    "DEMO_CONFIG", "ReportRow", "RunConfig", "RunReport", "config_hash",
    "emit_csv", "main", "run_config",
]
