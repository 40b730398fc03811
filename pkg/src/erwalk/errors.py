"""Error types that callers are expected to branch on."""


class UnsupportedRegimeError(ValueError):
    """The requested quantity is undefined or unproven for this memory
    parameter (p = 1/2 has no rate statement; p > 3/4 is superdiffusive)."""


class ResourceLimitError(RuntimeError):
    """A configured ceiling (for example the dynamic-program horizon) was
    exceeded; the message names the knob that raises it."""
