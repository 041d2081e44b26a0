"""Exception hierarchy.

Precondition failures derive from :class:`ValidationError`; failures that
arise inside a computation (singular systems, divergent sums) derive from
:class:`NumericalError`.  The command line maps the two families onto
different exit codes.
"""


class FueterError(Exception):
    """Base class for all errors raised by fueterkit."""


class ValidationError(FueterError, ValueError):
    """Input rejected before any computation took place."""


class NumericalError(FueterError, ArithmeticError):
    """A computation could not be carried out reliably."""


# -- symbolic layer ---------------------------------------------------------

class BadDegree(ValidationError):
    pass


class NotAxiallySymmetric(ValidationError):
    pass


class NotPolyanalytic2(ValidationError):
    pass


# -- slice functions --------------------------------------------------------

class StemNotReal(NumericalError):
    """Stem imaginary part does not vanish on the real axis."""


class OutsideDomain(ValidationError):
    pass


class DivergentSeries(NumericalError):
    pass


# -- kernels and contours ---------------------------------------------------

class OnSpectrumSphere(NumericalError):
    """Kernel evaluated with ``s`` on the sphere ``[q]``."""


class NotInDisk(ValidationError):
    """Series requested with ``|q| >= |s|``."""


class PointOnBoundary(ValidationError):
    pass


class SphereHitsBoundary(ValidationError):
    pass


class NonPositiveRadius(ValidationError):
    pass


# -- operators ----------------------------------------------------------------

class NonCommuting(ValidationError):
    pass


class SingularPencil(NumericalError):
    pass


class SpectrumNotEnclosed(ValidationError):
    pass


class NormTooLarge(ValidationError):
    pass


class ComplexComponentSpectrum(UserWarning):
    """A component ``T_i`` has non-real eigenvalues.

    The F- and P2-calculi are still computed; the warning marks that the
    operator lies outside the real-spectrum setting those calculi assume.
    """
