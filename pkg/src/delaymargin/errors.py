"""Exception hierarchy for delaymargin.

Every analysis failure raises a subclass of DelayMarginError; the CLI maps
these to exit code 2 with the class name on stderr.
"""


class DelayMarginError(Exception):
    """Base class for all delaymargin errors."""


class ZeroPolynomial(DelayMarginError):
    """Operation undefined for the identically-zero polynomial."""


class DidNotConverge(DelayMarginError):
    """Iterative solver failed to reach its tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class NotProper(DelayMarginError):
    """Plant has more zeros than poles."""


class NotConjugateClosed(DelayMarginError):
    """Non-real zeros or poles do not appear in conjugate pairs."""


class ZeroGain(DelayMarginError):
    """Plant gain is zero."""


class PoleEvaluation(DelayMarginError):
    """Transfer function evaluated too close to a pole."""


class PoleZeroCancellation(DelayMarginError):
    """Numerator and denominator share a root; root counts would be wrong."""


class DegenerateClosedLoop(DelayMarginError):
    """Leading coefficient of the zero-delay characteristic polynomial vanishes."""


class BoundaryClearance(DelayMarginError):
    """A pole or zero lies too close to the stability boundary."""


class NoIntersection(DelayMarginError):
    """No admissible horizontal line intersects the phase curve on an interval."""


class NegativeCount(DelayMarginError):
    """A count update would drive the root count below zero (upstream bug)."""


class UnboundedLeavingInterval(DelayMarginError):
    """A leaving-direction interval has infinite phase range (upstream bug)."""


class RootOnBoundary(DelayMarginError):
    """A zero-delay characteristic root lies on the stability boundary."""


class BoundaryRoot(DelayMarginError):
    """Contour integration stalled near a root on the counting rectangle."""


class UnboundedRegion(DelayMarginError):
    """No finite rectangle encloses all characteristic roots right of the boundary."""


class CriticalFrequencyZero(DelayMarginError):
    """|G(j0)| = 1: delay periodicity is undefined at zero frequency."""


class PerturbationFailed(DelayMarginError):
    """Repeated boundary perturbation did not clear the assumptions."""


class BoundaryPerturbationWarning(UserWarning):
    """The boundary was shifted left to restore clearance or simple-root assumptions."""

    def __init__(self, message, sigma0_requested=None, sigma0_used=None):
        super().__init__(message)
        self.sigma0_requested = sigma0_requested
        self.sigma0_used = sigma0_used
