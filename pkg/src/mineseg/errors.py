"""Exception types raised across the package."""


class MineSegError(Exception):
    """Base class for all package errors."""


class DecodeError(MineSegError):
    """An image or instance file could not be decoded."""

    def __init__(self, path, message, offset=None):
        self.path = str(path)
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{self.path}{where}: {message}")


class RleError(MineSegError, ValueError):
    pass


class EmptyMask(MineSegError, ValueError):
    pass


class ShapeMismatch(MineSegError, ValueError):
    pass


class InsufficientMatches(MineSegError):
    pass


class AlignmentFailed(MineSegError):
    pass
