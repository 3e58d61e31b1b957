"""Exception types shared across the package.

The CLI maps these onto exit codes: parse errors exit 2, cap overruns
exit 3, property violations exit 4.
"""


class ProdexpError(Exception):
    """Base class for all package errors."""


class FieldMismatch(ProdexpError, ValueError):
    pass


class DimensionMismatch(ProdexpError, ValueError):
    pass


class CapExceeded(ProdexpError):
    """An exhaustive enumeration would exceed its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what}: enumeration size {size} exceeds cap {cap}")


class NotInCode(ProdexpError, ValueError):
    """A word was expected to lie in a code but does not."""


class PropertyViolation(ProdexpError, AssertionError):
    """A checked inequality or identity failed; indicates a bug or a counterexample."""


class ParseError(ProdexpError, ValueError):
    pass
