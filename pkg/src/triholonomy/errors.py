"""Exception types shared across the package."""


class TriholonomyError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(TriholonomyError):
    """A value violates the invariants of its domain type."""


class CollinearConfiguration(DomainError):
    """The three bodies are collinear; such configurations are excluded."""


class CollisionalPair(DomainError):
    """The two clustered bodies coincide."""


class PotentialDomainError(DomainError):
    """A potential model was evaluated at (or beyond) one of its poles."""


class NoSuchRotation(TriholonomyError):
    """No kinematic rotation maps one Jacobi pair onto the other.

    Signals an internal inconsistency, not a user error: any two
    clusterings of a valid configuration are related by a rotation.
    """


class QuadratureFailure(TriholonomyError):
    """A path cannot be integrated at the requested resolution."""


class StepTooLarge(TriholonomyError):
    """Frame integration lost orthogonality; reduce the step size."""


class ConvergenceFailure(TriholonomyError):
    """The implicit-midpoint fixed point did not converge."""


class NonPlanarState(TriholonomyError):
    """A full-space state is not planar, so it has no reduced image."""


class DomainExit(TriholonomyError):
    """Integration left the admissible domain.

    The samples accumulated before the exit are attached as
    ``trajectory`` (``None`` when the very first step failed).
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class ConfigError(TriholonomyError):
    """An experiment configuration is malformed or inconsistent."""


class MismatchedGrids(TriholonomyError):
    """Two runs cannot be compared because their time grids differ."""
