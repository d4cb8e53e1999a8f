"""Exception types shared across the library."""


class BerryDetError(Exception):
    """Base class for all library-specific failures."""


class NotHermitian(BerryDetError):
    """Matrix deviates from its adjoint beyond tolerance."""


class ConvergenceFailure(BerryDetError):
    """An iterative linear-algebra kernel failed to converge."""


class NotUnitary(BerryDetError):
    """Matrix is not unitary within tolerance."""


class SingularInput(BerryDetError):
    """Matrix is singular or too ill-conditioned for the requested factor."""


class BadSpec(BerryDetError):
    """Malformed family specification (shapes, hermiticity, finiteness)."""


class GapNotAchievable(BerryDetError):
    """Random family search could not reach the requested spectral gap."""


class GapViolation(BerryDetError):
    """The level curve touches or crosses the spectrum."""


class OdeToleranceFailure(BerryDetError):
    """Fixed-step integration lost accuracy or produced non-finite values."""


class NonUnitaryHolonomy(BerryDetError):
    """Restricted holonomy matrix is too far from unitary."""


class BlockLeakage(BerryDetError):
    """A matrix that should commute with the spectral projector does not."""


class NonRealPhase(BerryDetError):
    """A phase that must be real carries a significant imaginary part."""


class DegenerateProduct(BerryDetError):
    """Projector loop product is numerically rank-deficient."""


class OverflowRisk(BerryDetError):
    """Monodromy growth would overflow double precision; use the block route."""


class NonInvertibleOperator(BerryDetError):
    """det(Id - T(2pi)) vanishes: the operator has a periodic null vector."""


class BoundViolation(BerryDetError):
    """A proved spectral bound failed numerically."""


class ConfigError(BerryDetError):
    """Run configuration is malformed (parse or validation failure)."""
