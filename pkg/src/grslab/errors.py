"""Exception types shared across the package."""


class GrslabError(Exception):
    """Base class for all package-specific errors."""


class NotPrimitiveError(GrslabError):
    """The modulus polynomial is not primitive (alpha's order < q-1)."""


class BadModulusError(GrslabError):
    """Polynomial coefficients are malformed or out of the base field."""


class LengthMismatchError(GrslabError):
    """A vector argument has the wrong length."""


class DimensionError(GrslabError):
    """Code dimensions violate 0 < k < n <= q-1 (or <= q with the zero point)."""


class FieldTooSmallError(GrslabError):
    """The field cannot supply enough distinct evaluation points."""


class InvalidTritPairError(GrslabError):
    """A trit pair outside the image of the bit-to-trit packing."""


class ConfigError(GrslabError):
    """An experiment or plot configuration failed validation."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
