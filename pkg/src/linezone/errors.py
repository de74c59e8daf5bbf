"""Exception types shared across the package."""


class ZoneError(Exception):
    """Base class for all errors raised by this package."""


class InvalidLine(ZoneError):
    """A line record with a = b = 0 (no direction)."""


class CoincidentLines(ZoneError):
    """Two supposedly distinct lines are in fact the same line."""


class NoIntercept(ZoneError):
    """Horizontal lines do not meet the x-axis."""


class QueryInArrangement(ZoneError):
    """The query line itself occurs among the input lines; we reject this
    instead of guessing what its zone should mean."""


class EmptyCell(ZoneError):
    """The brute-force clipper produced an empty region, which signals an
    internal inconsistency (no zone cell is empty under the tie-broken
    ordering)."""


class ViewportRequired(ZoneError):
    """SVG output needs an explicit viewport when the zone has no finite
    vertices to auto-fit against."""


class TraceLimitExceeded(ZoneError):
    """Trace replays are capped to small instances; use a smaller n."""


class InstanceParseError(ZoneError):
    """Malformed instance text; carries the 1-based source line number."""

    def __init__(self, message: str, line_no: int = 0):
        super().__init__(message)
        self.line_no = line_no

    def __str__(self):
        base = super().__str__()
        return f"line {self.line_no}: {base}" if self.line_no else base
