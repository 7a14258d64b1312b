"""Exception and warning types shared across the package."""


class DewijsError(Exception):
    """Base class for all package-specific errors."""


class NonzeroMassError(DewijsError):
    """Raised when a contrast's weights do not sum to zero."""


class MixedSupportError(DewijsError):
    """Raised when atoms mix point/cell support or continuum/lattice space."""


class IncompatibleKernelError(DewijsError):
    """Raised when a kernel cannot evaluate the given support kind."""


class SingularSystemError(DewijsError):
    """Raised when a kriging system is rank deficient or ill posed."""


class QuadratureFailure(DewijsError):
    """Raised when a quadrature cannot certify the requested tolerance."""


class NotInteriorError(DewijsError):
    """Raised when a point required to lie inside a domain does not."""


class PoleAtOriginError(DewijsError):
    """Raised when an intrinsic spectral density is evaluated at its pole."""


class CoincidentPointWarning(UserWarning):
    """A zero-separation evaluation fell back to the zero-value convention."""


class NegativeVarianceWarning(UserWarning):
    """A prediction variance fell below the clamp threshold."""


class WalkCapWarning(UserWarning):
    """A walk-on-spheres path hit the iteration cap before capture."""
