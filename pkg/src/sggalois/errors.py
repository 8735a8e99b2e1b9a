"""Exception types shared across the package."""


class SgError(Exception):
    """Base class for all package errors."""


class DimensionError(SgError, ValueError):
    pass


class MalformedPsgError(SgError, ValueError):
    """The input does not describe a pre-special group structurally."""


class PreconditionError(SgError, ValueError):
    """An operation was called outside its documented domain."""


class GuardrailError(SgError, RuntimeError):
    """The requested computation exceeds a size limit."""

    def __init__(self, what: str, size_exp: int, limit_exp: int):
        self.what = what
        self.size_exp = size_exp
        self.limit_exp = limit_exp
        super().__init__(
            f"{what}: size 2^{size_exp} exceeds limit 2^{limit_exp} "
            f"(raise with --max-order {size_exp})"
        )


class NotHomomorphismError(SgError, ValueError):
    pass
