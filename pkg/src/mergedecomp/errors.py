"""Exception types shared across the toolkit."""


class MergeDecompError(Exception):
    """Base class; ``module`` names the subsystem that raised."""

    module = "mergedecomp"

    def __init__(self, message: str, module: str | None = None):
        if module is not None:
            self.module = module
        super().__init__(f"[{self.module}] {message}")


class PreconditionError(MergeDecompError, ValueError):
    pass


class ResourceError(MergeDecompError, RuntimeError):
    """A configured size cap was exceeded."""

    def __init__(self, cap_name: str, cap: int, module: str | None = None):
        self.cap_name = cap_name
        self.cap = cap
        super().__init__(f"{cap_name} exceeded (cap={cap})", module)


class VerificationError(MergeDecompError, AssertionError):
    """A machine check that should always pass did not; indicates a bug."""


class FormatError(MergeDecompError, ValueError):
    def __init__(self, message: str, line: int | None = None, module: str | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, module)
