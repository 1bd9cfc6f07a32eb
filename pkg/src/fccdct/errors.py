"""Exception types raised by fccdct."""


class FCCError(Exception):
    """Base class for all library errors."""


class MathError(FCCError):
    """A numerical precondition of the transform does not hold."""


class DegenerateNodes(MathError):
    """Two spectral nodes coincide, so the node grid does not split the signal space."""


class IllConditioned(MathError):
    """A factor of the transform is numerically singular."""

    def __init__(self, message, factor=None, condition=None):
        super().__init__(message)
        self.factor = factor
        self.condition = condition


class OddSize(MathError):
    """A radix-2 operation was requested for an odd size."""


class SizeMismatch(FCCError, ValueError):
    """Array lengths disagree with the declared per-axis size."""


class MalformedFile(FCCError, IOError):
    """A grid, spectrum or plan file could not be parsed."""

    def __init__(self, message, path=None, line=None, offset=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + message)
        self.path = path
        self.line = line
        self.offset = offset
