"""Exception types raised across the package.

Every exception derives from :class:`SturmHurwitzError`, so callers that only
care about "the pipeline refused" can catch one class.  The CLI maps the
groups below onto process exit codes.
"""


class SturmHurwitzError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(SturmHurwitzError, ValueError):
    """Input violates a mathematical precondition (exit code 3)."""


class MeanNotZero(PreconditionError):
    """A nonzero constant term blocks a periodic antiderivative."""


class ZeroFunction(PreconditionError):
    """The input is identically zero, so no leading harmonic exists."""


class TooFewSamples(PreconditionError):
    """A sampled signal needs at least two samples."""


class InvalidBound(PreconditionError):
    """A sup-norm bound or amplitude that must be positive is not."""


class WindowUnderResolved(PreconditionError):
    """Sample count too low to resolve every oscillation in a window."""


class DominanceUnreachable(SturmHurwitzError):
    """No admissible smoothing order up to the cap makes the leading term dominate (exit 4)."""


class Underflow(DominanceUnreachable):
    """Leading amplitude is not a positive normal float, so rescaled comparisons break."""


class CrossingDegenerate(SturmHurwitzError):
    """A zero met during descent is (numerically) tangential (exit 5)."""


class ToleranceFailure(SturmHurwitzError):
    """An internal floating-point safeguard tripped (exit 6)."""


class SignMismatch(ToleranceFailure):
    """The smoothed function has the wrong sign at an extremal grid point."""


class BadBracket(ToleranceFailure, ValueError):
    """Bracket endpoints do not carry opposite signs."""


class DescentSignFailure(ToleranceFailure):
    """Derivative signs failed to alternate at consecutive zeros during descent."""


class CertificateInvalid(ToleranceFailure):
    """Located zeros failed the residual or distinctness check."""
