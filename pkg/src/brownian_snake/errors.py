"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """A caller passed an argument outside the documented domain."""


class MalformedInputError(ValueError):
    """A trajectory or file violates the structural invariants."""


class SamplingError(RuntimeError):
    """A rejection sampler gave up (acceptance collapse or attempt cap)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
