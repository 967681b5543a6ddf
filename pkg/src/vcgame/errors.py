"""Exception types shared across the package."""


class VertexCoverGameError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(VertexCoverGameError):
    """An edge-list document could not be parsed into a simple graph."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OracleCapError(VertexCoverGameError):
    """An exact oracle was asked to search beyond its configured cap."""


class ContractViolation(VertexCoverGameError):
    """An operation was called outside its documented preconditions."""


class NotBalanced(VertexCoverGameError):
    """The game has an empty core, so no core element can be produced."""


class NotPopulationMonotonic(VertexCoverGameError):
    """The graph fails the structural test; carries a forbidden-subgraph witness."""

    def __init__(self, pattern: str, vertices: tuple[str, ...]) -> None:
        self.pattern = pattern
        self.vertices = tuple(vertices)
        names = ", ".join(self.vertices)
        super().__init__(
            f"graph is not population monotonic: contains {pattern} on [{names}]"
        )


class MalformedScheme(VertexCoverGameError):
    """An allocation scheme is structurally unusable (missing or misindexed entries)."""


class NotIntegralScheme(MalformedScheme):
    """A scheme expected to be 0/1-valued has a fractional entry."""


class UnsupportedInstance(VertexCoverGameError):
    """The requested computation is undefined for this instance (e.g. odd cycles)."""


class EnumerationTruncated(VertexCoverGameError):
    """An enumeration stream hit its cap before being exhausted."""
