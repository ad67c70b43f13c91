"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument failed a basic validity check (shape, finiteness, sign)."""


class UncontrollableModelError(RuntimeError):
    """Gain synthesis was attempted on an (A, B) pair whose controllability
    matrix is rank deficient beyond tolerance."""


class RiccatiDivergenceError(RuntimeError):
    """The Riccati fixed-point iteration failed to converge."""


class SingularModelError(RuntimeError):
    """A fixed-point solve would invert a near-singular matrix."""


class DegenerateFeedforwardError(RuntimeError):
    """The output-tracking feedforward denominator is too close to zero."""


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


class FallDetected(RuntimeError):
    """The plant state left the plausible walking regime."""
