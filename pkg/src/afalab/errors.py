"""Exception hierarchy shared by all modules."""


class LabError(Exception):
    """Base class for every error raised by afalab."""


class InputRangeError(LabError, KeyError):
    """An input outside a trace's or table's declared domain."""

    def __str__(self):
        return Exception.__str__(self)


class CompletenessError(LabError):
    """An operation needing a true limit was handed an incomplete object."""


class KindError(LabError):
    """A trace of the wrong monotonicity kind."""


class BoundViolation(LabError):
    """A declared bound (mind changes, computable bound) was exceeded."""


class MonotonicityError(LabError):
    """A value that should strictly decrease did not."""


class OracleDomainError(LabError):
    """An oracle was asked about an input it does not answer."""


class NormViolation(LabError):
    def __init__(self, x, size, norm):
        super().__init__(f"query set for input {x!r} has {size} elements, declared norm is {norm}")
        self.x = x
        self.size = size
        self.norm = norm


class CompositionError(LabError):
    """Reductions whose domains do not line up."""


class NodeError(LabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class StructureError(LabError):
    """A graph does not have the spoke structure a decoder relies on."""


class ParseError(LabError):
    def __init__(self, path, lineno, message):
        where = f"{path}:{lineno}" if lineno else str(path)
        super().__init__(f"{where}: {message}")
        self.path = path
        self.lineno = lineno


class CenterError(StructureError):
    """Endpoint location was asked about a center node."""
