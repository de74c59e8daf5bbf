"""Exact planar primitives: rational scalars, points, lines, affine maps,
and the canonicalization that places an arbitrary query line onto the
x-axis.

Everything here is exact.  Coordinates are arbitrary-precision rationals
(`gmpy2.mpq` when available, `fractions.Fraction` otherwise), so every
predicate downstream is decided without rounding.  All values are
immutable and safe to share between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple, Optional, Sequence

from .errors import CoincidentLines, InvalidLine, NoIntercept, QueryInArrangement

try:
    from gmpy2 import mpq as _rat_impl
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _rat_impl = Fraction

# Any exact rational scalar (mpq or Fraction); the two duck-type cleanly.
Rat = Any

R0 = _rat_impl(0)
R1 = _rat_impl(1)


def rat(value=0, den=None) -> Rat:
    """Build an exact rational from ints, 'p/q' strings, or rationals."""
    if den is not None:
        return _rat_impl(value, den)
    if isinstance(value, str):
        return _rat_impl(value.strip().lstrip("+"))
    return _rat_impl(value)


def rat_str(v) -> str:
    """Canonical 'num/den' form with the denominator always explicit."""
    return f"{v.numerator}/{v.denominator}"


def rat_compact(v) -> str:
    """'num' when integral, 'num/den' otherwise (instance-file form)."""
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _float_key(v) -> float:
    try:
        return float(v)
    except OverflowError:
        return math.inf if v > 0 else -math.inf


def _primitive_dir(dx, dy) -> tuple[int, int]:
    """Exact direction as a coprime integer pair, preserving orientation."""
    a = int(dx.numerator) * int(dy.denominator)
    b = int(dy.numerator) * int(dx.denominator)
    g = math.gcd(abs(a), abs(b))
    if g == 0:
        raise ValueError("zero direction vector")
    return (a // g, b // g)


class Point(NamedTuple):
    x: Rat
    y: Rat

    def __repr__(self):
        return f"({rat_compact(self.x)}, {rat_compact(self.y)})"


LEFT, RIGHT, COLLINEAR = 1, -1, 0


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of the turn p->q->r: LEFT (+1), RIGHT (-1) or COLLINEAR (0)."""
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if d > 0:
        return LEFT
    if d < 0:
        return RIGHT
    return COLLINEAR


class Line:
    """The locus a*x + b*y + c = 0, scaled so the first nonzero coefficient
    among (a, b) equals 1.

    The canonical scaling makes equality of geometric lines a plain
    coefficient comparison, which is how duplicates are detected.
    `source_id` is bookkeeping only and never takes part in equality.
    """

    __slots__ = ("a", "b", "c", "source_id")

    def __init__(self, a, b, c, source_id: int = -1):
        a, b, c = rat(a), rat(b), rat(c)
        if a == 0 and b == 0:
            raise InvalidLine("line coefficients (a, b) must not both be zero")
        s = a if a != 0 else b
        self.a = a / s
        self.b = b / s
        self.c = c / s
        self.source_id = source_id

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def __repr__(self):
        return f"Line({rat_compact(self.a)}, {rat_compact(self.b)}, {rat_compact(self.c)})"

    @property
    def is_horizontal(self) -> bool:
        return self.a == 0

    def eval_at(self, p: Point) -> Rat:
        return self.a * p.x + self.b * p.y + self.c

    def x_at(self, y) -> Rat:
        """x-coordinate of the line at height y (line must not be horizontal)."""
        if self.a == 0:
            raise NoIntercept("horizontal line has no unique x at a given y")
        return (-self.c - self.b * y) / self.a

    def x_intercept(self) -> Rat:
        if self.a == 0:
            raise NoIntercept("horizontal line never meets the x-axis")
        return -self.c / self.a

    def upward_dir(self) -> tuple[int, int]:
        """Primitive integer direction along the line with dy > 0
        (dx > 0 for horizontal lines)."""
        if self.a == 0:
            return (1, 0)
        if self.a > 0:
            return _primitive_dir(-self.b, self.a)
        return _primitive_dir(self.b, -self.a)

    def reflect_y(self) -> "Line":
        """Image under the reflection y -> -y."""
        return Line(self.a, -self.b, self.c, self.source_id)


def x_intercept(h: Line) -> Rat:
    """Intercept of a non-horizontal line with the x-axis."""
    return h.x_intercept()


def intersect(l1: Line, l2: Line) -> Optional[Point]:
    """Exact intersection point of two distinct lines; None when parallel.

    Raises CoincidentLines for identical lines: callers are expected to
    have deduplicated their input first.
    """
    det = l1.a * l2.b - l2.a * l1.b
    if det == 0:
        if l1.c == l2.c:
            raise CoincidentLines(f"{l1!r} and {l2!r} are the same line")
        return None
    x = (l1.b * l2.c - l2.b * l1.c) / det
    y = (l2.a * l1.c - l1.a * l2.c) / det
    return Point(x, y)


class AffineMap(NamedTuple):
    """(x, y) -> (m00*x + m01*y + m02, m10*x + m11*y + m12), exact."""

    m00: Rat
    m01: Rat
    m02: Rat
    m10: Rat
    m11: Rat
    m12: Rat

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(R1, R0, R0, R0, R1, R0)

    @property
    def is_identity(self) -> bool:
        return (self.m00 == 1 and self.m01 == 0 and self.m02 == 0
                and self.m10 == 0 and self.m11 == 1 and self.m12 == 0)

    def det(self) -> Rat:
        return self.m00 * self.m11 - self.m01 * self.m10

    def apply(self, p: Point) -> Point:
        return Point(self.m00 * p.x + self.m01 * p.y + self.m02,
                     self.m10 * p.x + self.m11 * p.y + self.m12)

    def apply_dir(self, d: tuple) -> tuple[int, int]:
        """Image of a direction vector under the linear part, as a
        primitive integer pair."""
        dx, dy = d
        return _primitive_dir(rat(self.m00 * dx + self.m01 * dy),
                              rat(self.m10 * dx + self.m11 * dy))

    def inverse(self) -> "AffineMap":
        d = self.det()
        if d == 0:
            raise ValueError("affine map is not invertible")
        i00 = self.m11 / d
        i01 = -self.m01 / d
        i10 = -self.m10 / d
        i11 = self.m00 / d
        return AffineMap(i00, i01, -(i00 * self.m02 + i01 * self.m12),
                         i10, i11, -(i10 * self.m02 + i11 * self.m12))

    def apply_line(self, l: Line) -> Line:
        """Image of a line: coefficient row times the inverse matrix."""
        inv = self.inverse()
        return _push_line(l, inv)


def _push_line(l: Line, inv: AffineMap) -> Line:
    a = l.a * inv.m00 + l.b * inv.m10
    b = l.a * inv.m01 + l.b * inv.m11
    c = l.a * inv.m02 + l.b * inv.m12 + l.c
    return Line(a, b, c, l.source_id)


@dataclass(frozen=True)
class CanonicalInstance:
    """An arrangement instance moved into the frame where the query line is
    exactly the x-axis.

    `lines` holds the deduplicated non-horizontal lines in that frame.
    Lines parallel to the query become horizontal; only the one nearest to
    the axis on each side can touch the zone, so just those heights are
    kept (`horizontals_above` is the lowest y > 0, `horizontals_below` the
    highest y < 0), with full counts retained for statistics.
    """

    lines: tuple[Line, ...]
    horizontals_above: Optional[Rat]
    horizontals_below: Optional[Rat]
    inverse_map: AffineMap
    forward_map: AffineMap
    horizontal_count_above: int = 0
    horizontal_count_below: int = 0
    duplicates: tuple[tuple[int, int], ...] = ()  # (dropped id, kept id)

    @property
    def n(self) -> int:
        return len(self.lines)

    @property
    def orientation_sign(self) -> int:
        """+1 when the canonicalizing map preserves orientation, else -1."""
        return 1 if self.forward_map.det() > 0 else -1


def canonicalize(query: Line, input_lines: Sequence[Line]) -> CanonicalInstance:
    """Move the query line onto the x-axis by a rational invertible affine
    map (a shear, plus a coordinate swap for vertical queries), dedupe the
    input, and split off horizontal (query-parallel) lines.

    Raises QueryInArrangement when an input line coincides with the query.
    """
    if query.b != 0:
        fwd = AffineMap(R1, R0, R0, query.a, query.b, query.c)
    else:
        fwd = AffineMap(R0, R1, R0, query.a, R0, query.c)
    inv = fwd.inverse()

    seen: dict = {}
    unique: list[Line] = []
    dups: list[tuple[int, int]] = []
    for idx, l in enumerate(input_lines):
        m = _push_line(Line(l.a, l.b, l.c, idx), inv)
        key = (m.a, m.b, m.c)
        if key in seen:
            dups.append((idx, seen[key]))
        else:
            seen[key] = idx
            unique.append(m)

    canon: list[Line] = []
    above: list[Rat] = []
    below: list[Rat] = []
    for m in unique:
        if m.a == 0:
            y = -m.c  # b is normalized to 1
            if y == 0:
                raise QueryInArrangement(
                    f"input line {m.source_id} coincides with the query line")
            (above if y > 0 else below).append(y)
        else:
            canon.append(m)

    return CanonicalInstance(
        lines=tuple(canon),
        horizontals_above=min(above) if above else None,
        horizontals_below=max(below) if below else None,
        inverse_map=inv,
        forward_map=fwd,
        horizontal_count_above=len(above),
        horizontal_count_below=len(below),
        duplicates=tuple(dups),
    )
