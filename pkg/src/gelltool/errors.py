"""Exception types raised by gelltool."""


class GellError(Exception):
    """Base class for all library errors."""


class DimensionError(GellError, ValueError):
    pass


class SymmetryError(GellError, ValueError):
    """A matrix that must be skew-symmetric is not."""


class TowerError(GellError, ValueError):
    """A sublattice tower is not nested, or a stage is out of range."""

    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class SpecError(GellError, ValueError):
    """An input document failed validation; ``path`` names the field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class CertificateError(GellError, ValueError):
    pass
