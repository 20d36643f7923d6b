"""Exception types raised across the package.

Every error derives from :class:`BosonHarnessError`, itself a ``ValueError``,
so callers can catch either.
"""


class BosonHarnessError(ValueError):
    """Base class for all package errors."""


class InvalidDimensionError(BosonHarnessError):
    pass


class InvalidUnitaryError(BosonHarnessError):
    pass


class InvalidElementError(BosonHarnessError):
    pass


class ShapeError(BosonHarnessError):
    pass


class SizeLimitError(BosonHarnessError):
    pass


class InvalidInputError(BosonHarnessError):
    pass


class SectorError(BosonHarnessError):
    """Input and output configurations carry different photon numbers."""


class EnumerationTooLargeError(BosonHarnessError):
    def __init__(self, required: int, ceiling: int):
        self.required = required
        self.ceiling = ceiling
        super().__init__(
            f"enumeration needs {required} configurations, ceiling is {ceiling}"
        )


class DomainError(BosonHarnessError):
    pass


class UnreachableTargetError(BosonHarnessError):
    pass
