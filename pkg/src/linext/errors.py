"""Exception hierarchy shared by every module.

The CLI maps these onto fixed exit codes, so callers catching
:class:`LinextError` get everything the library raises on purpose.
"""


class LinextError(Exception):
    """Base class for all library errors."""

    code = "error"


class DimensionError(LinextError, ValueError):
    """Operand shapes do not agree."""

    code = "dimension"


class InvalidSpecError(LinextError, ValueError):
    """A source spec or generator parameter violates its invariants."""

    code = "invalid"


class UnsupportedModelError(LinextError, ValueError):
    """The requested quantity is not defined for this source model."""

    code = "unsupported"


class CapacityError(LinextError):
    """An exact or enumerative computation would exceed its size guard."""

    code = "capacity"

    def __init__(self, what: str, value: int, limit: int):
        super().__init__(f"{what} = {value} exceeds the limit of {limit}")
        self.what = what
        self.value = value
        self.limit = limit


class FormatError(LinextError, ValueError):
    """A file on disk does not match its documented layout."""

    code = "format"
