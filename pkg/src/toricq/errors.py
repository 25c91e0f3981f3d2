"""Exception hierarchy shared by all engine modules.

Everything derives from EngineError so callers can catch one base class.
The CLI maps ParseError and ValidationError (and anything raised while a
config is loaded or validated) to exit code 2, and any EngineError raised
during a computation to exit code 3.
"""


class EngineError(Exception):
    """Base class for every error this package raises on purpose."""


class ParseError(EngineError):
    """A config document is malformed (bad JSON, bad rational, bad shape)."""


class ValidationError(EngineError):
    """A config parsed but its content is inconsistent or unusable."""


# presentation layer

class EmptySemistableLocus(ValidationError):
    """No subset of the weights can make the stability character semistable."""


class InfiniteStabilizer(ValidationError):
    """A minimal semistable support has a positive dimensional stabilizer."""


class RankDeficient(ValidationError):
    """The weight vectors do not span the full character lattice rationally."""


class GeneratorNotPositive(ValidationError):
    """A declared effective-degree generator pairs nonpositively with theta."""


# cohomology layer

class NonConfluentRingSpec(ValidationError):
    """Some monomial reachable from the basis has no reduction to the basis."""


class SingularPairingMatrix(EngineError):
    """The pairing matrix on the declared basis is degenerate."""


class TwistedProductUnsupported(EngineError):
    """Product of two classes both supported on nontrivial sectors."""


# series layer

class ZeroZCoefficient(EngineError):
    """Inversion of a linear factor whose z coefficient is zero."""


class NontruncatingArgument(EngineError):
    """Exponential of a series with a nonzero constant term cannot truncate."""


class UnknownDirection(EngineError):
    """A named differentiation direction was never declared."""


# I-function layer

class NotEffective(EngineError):
    """A degree outside the enumerated effective semigroup was requested."""


class MissingTwistedClass(EngineError):
    """A degree needs a user supplied sector class and the table has none."""


class SemipositivityViolated(EngineError):
    """The semipositive assembly met a negative section pairing."""


# mirror layer

class NotUnital(EngineError):
    """A series expected to start with the unit class does not."""


class PositivePowersRemain(EngineError):
    """After the flow, the frame still has terms barred from a small frame."""


class FrameResidualTooLow(EngineError):
    """The frame is not verified to high enough order for the request."""
