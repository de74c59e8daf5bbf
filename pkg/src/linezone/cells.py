"""Zone cells: assembly from chain pairs, horizontal clipping, stitching,
and the full zone pipeline.

A cell is one piece of the zone on one side of the query line.  In the
canonical frame it sits on the x-axis: a base interval (either endpoint
possibly at infinity, possibly degenerate to a point), a left boundary
climbing from the base's left end, a right boundary climbing from its
right end, and a top that is a single apex, a horizontal cap (when a
horizontal line clipped the instance), or open to infinity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

from .errors import ZoneError
from .geometry import (
    R0,
    AffineMap,
    CanonicalInstance,
    Line,
    Point,
    Rat,
    canonicalize,
    rat,
)
from .chains import (
    ABOVE,
    BACKWARD,
    BELOW,
    FORWARD,
    Chain,
    HalfLine,
    _merge_raw,
    _prefix_edges,
    _raw_edge_count,
    _raw_view,
    _scan,
    build_chains,
    merge_with_events,
    sort_and_orient,
)


class Ray(NamedTuple):
    """An unbounded boundary edge: origin plus a primitive direction."""

    origin: Point
    dir: tuple[int, int]


class BoundarySide(NamedTuple):
    """One side of a cell's boundary, bottom-up from its base point.
    `ray_dir` is set when the side ends in an unbounded edge."""

    vertices: tuple[Point, ...]
    ray_dir: Optional[tuple[int, int]] = None

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - 1 + (1 if self.ray_dir is not None else 0)

    @property
    def top(self) -> Point:
        return self.vertices[-1]


class Cap(NamedTuple):
    """Horizontal top edge introduced by clipping.  An end of None means
    the cap runs to infinity on that side; `anchor` is only set when both
    ends are infinite (the full-strip cell of an empty arrangement)."""

    left_end: Optional[Point]
    right_end: Optional[Point]
    dir: tuple[int, int]
    anchor: Optional[Point] = None


class Cell:
    """One zone piece C_i(+/-): convex, based on the query line.

    `left`/`right` are the boundary fragments (absent for the two
    unbounded end cells and the empty-arrangement cell), `apex` the shared
    top vertex of a bounded cell, `cap` the horizontal top edge of a
    clipped cell.  Cells loaded back from JSON carry only the flattened
    boundary walk; equality always compares the walk, so computed and
    round-tripped zones compare cleanly.
    """

    def __init__(self, index: int, side: str, base_from: Optional[Point],
                 base_to: Optional[Point], left: Optional[BoundarySide] = None,
                 right: Optional[BoundarySide] = None, apex: Optional[Point] = None,
                 cap: Optional[Cap] = None, walk: Optional[tuple] = None,
                 bounded: Optional[bool] = None):
        self.index = index
        self.side = side
        self.base_from = base_from
        self.base_to = base_to
        self.left = left
        self.right = right
        self.apex = apex
        self.cap = cap
        self._walk = walk
        self._bounded = bounded

    @property
    def structured(self) -> bool:
        """False for cells reconstructed from serialized walks."""
        return self._walk is None

    @property
    def bounded(self) -> bool:
        if self._bounded is not None:
            return self._bounded
        if self.apex is not None:
            return True
        if self.cap is not None:
            return self.cap.left_end is not None and self.cap.right_end is not None
        return False

    @cached_property
    def boundary_walk(self) -> tuple:
        """The non-base boundary as a flat element sequence, traversed from
        the base_to end over the top to the base_from end (counterclockwise
        for upper cells, mirrored for lower ones).  Elements are Points and
        Rays; a Ray subsumes its origin vertex."""
        if self._walk is not None:
            return self._walk
        return _build_walk(self)

    @property
    def boundary_edge_count(self) -> int:
        """Edges lying on input lines (base and cap edges not counted)."""
        n = 0
        if self.left is not None:
            n += self.left.edge_count
        if self.right is not None:
            n += self.right.edge_count
        return n

    def __eq__(self, other):
        if not isinstance(other, Cell):
            return NotImplemented
        return (self.index == other.index and self.side == other.side
                and self.base_from == other.base_from
                and self.base_to == other.base_to
                and self.bounded == other.bounded
                and self.boundary_walk == other.boundary_walk)

    __hash__ = None

    def __repr__(self):
        bf = "-inf" if self.base_from is None else repr(self.base_from)
        bt = "+inf" if self.base_to is None else repr(self.base_to)
        return (f"Cell(i={self.index}, {self.side}, base {bf}..{bt}, "
                f"walk={list(self.boundary_walk)!r})")


def _neg(d: tuple[int, int]) -> tuple[int, int]:
    return (-d[0], -d[1])


def _build_walk(c: Cell) -> tuple:
    els: list = []
    rv = c.right.vertices if c.right is not None else ()
    lv = c.left.vertices if c.left is not None else ()
    if c.apex is not None:
        els.extend(rv[1:])                # ends at the apex
        els.extend(reversed(lv[1:-1]))    # back down, apex emitted once
    elif c.cap is not None:
        if c.cap.anchor is not None:      # both ends infinite: full-strip cap
            els.append(Ray(c.cap.anchor, c.cap.dir))
            els.append(Ray(c.cap.anchor, _neg(c.cap.dir)))
        elif c.cap.right_end is None:     # cap runs right to +inf
            els.append(Ray(c.cap.left_end, c.cap.dir))
            els.extend(reversed(lv[1:-1]))
        elif c.cap.left_end is None:      # cap runs left to -inf
            els.extend(rv[1:-1])
            els.append(Ray(c.cap.right_end, _neg(c.cap.dir)))
        else:
            els.extend(rv[1:])            # ..., R*
            els.extend(reversed(lv[1:]))  # L*, ...
    else:
        if c.right is not None:
            els.extend(rv[1:-1])
            els.append(Ray(rv[-1], c.right.ray_dir))
        if c.left is not None:
            els.append(Ray(lv[-1], c.left.ray_dir))
            els.extend(reversed(lv[1:-1]))
    return tuple(els)


# ---------------------------------------------------------------------------
# Cell assembly (the boundary identification lemma) and clipping.
# ---------------------------------------------------------------------------


def _prefix(chain: Chain, q: Optional[Point]) -> BoundarySide:
    if q is None:
        assert chain.ray_line is not None, \
            "chains of an unbounded cell must themselves be unbounded"
        return BoundarySide(chain.vertices, chain.ray_dir())
    verts = [v for v in chain.vertices if v.y < q.y]
    verts.append(q)
    return BoundarySide(tuple(verts), None)


def assemble_cell(i: int, left: Optional[Chain], right: Optional[Chain],
                  q: Optional[Point], base: tuple[Optional[Point], Optional[Point]],
                  side: str = ABOVE) -> Cell:
    """Build cell i from its two chains and their lowest crossing q.

    For 1 <= i <= n-1 both chains are given; the boundary is each chain's
    prefix up to q when q exists, or the full chains otherwise.  The end
    cells pass a single chain (left for i = n, right for i = 0) and no q.
    """
    base_from, base_to = base
    lfrag = _prefix(left, q) if left is not None else None
    rfrag = _prefix(right, q) if right is not None else None
    if q is not None and (lfrag is None or rfrag is None):
        raise ZoneError("apex given without both boundary chains")
    return Cell(i, side, base_from, base_to, lfrag, rfrag, q, None)


def upper_zone(inst: CanonicalInstance, side: str = ABOVE) -> list[Cell]:
    """All n+1 cells of one side of the zone, in index order, unclipped,
    in the canonical frame.  The below side runs through the reflected
    instance and is reflected back."""
    cells, _stats = _side_cells(inst, side, clip=False)
    return cells


def clip_horizontal(cells: Sequence[Cell], y_star) -> list[Cell]:
    """Intersect each cell with the strip 0 <= y <= y_star (cells are in
    the canonical above frame).  Cells entirely below the cut are kept as
    they are; a cell touching it only at its apex keeps the apex and gains
    no cap edge."""
    y_star = rat(y_star)
    if y_star <= 0:
        raise ValueError("clip height must be positive in the working frame")
    return [_clip_cell(c, y_star) for c in cells]


def _cut_fragment(frag: BoundarySide, ys) -> tuple[BoundarySide, Point]:
    vs = frag.vertices
    for k, v in enumerate(vs):
        if v.y == ys:
            return BoundarySide(vs[:k + 1], None), v
        if v.y > ys:
            u = vs[k - 1]
            t = (ys - u.y) / (v.y - u.y)
            p = Point(u.x + (v.x - u.x) * t, ys)
            return BoundarySide(vs[:k] + (p,), None), p
    assert frag.ray_dir is not None
    o = vs[-1]
    dx, dy = frag.ray_dir
    t = (ys - o.y) / dy
    p = Point(o.x + dx * t, ys)
    return BoundarySide(vs + (p,), None), p


def _clip_cell(c: Cell, ys) -> Cell:
    if c.apex is not None and c.apex.y <= ys:
        return c
    if c.left is None and c.right is None:  # empty arrangement: full strip
        return Cell(c.index, c.side, None, None, None, None, None,
                    Cap(None, None, (1, 0), Point(R0, ys)))
    lfrag = lend = None
    if c.left is not None:
        lfrag, lend = _cut_fragment(c.left, ys)
    rfrag = rend = None
    if c.right is not None:
        rfrag, rend = _cut_fragment(c.right, ys)
    return Cell(c.index, c.side, c.base_from, c.base_to, lfrag, rfrag, None,
                Cap(lend, rend, (1, 0)))


# ---------------------------------------------------------------------------
# Whole-zone pipeline.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SideStats:
    """Combinatorial counters for one side of the zone (in its working
    frame): forest sizes, scan and merge work, and emitted edge counts."""

    forest_forward_edges: int
    forest_backward_edges: int
    scan_steps: int
    merge_events: int
    boundary_edges: int
    cap_edges: int
    clipped: bool

    def to_dict(self) -> dict:
        return {
            "forest_forward_edges": self.forest_forward_edges,
            "forest_backward_edges": self.forest_backward_edges,
            "scan_steps": self.scan_steps,
            "merge_events": self.merge_events,
            "boundary_edges": self.boundary_edges,
            "cap_edges": self.cap_edges,
            "clipped": self.clipped,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SideStats":
        return cls(d["forest_forward_edges"], d["forest_backward_edges"],
                   d["scan_steps"], d["merge_events"], d["boundary_edges"],
                   d["cap_edges"], d["clipped"])


@dataclass(frozen=True)
class ZoneStats:
    n: int
    duplicates_removed: int
    horizontals_above: int
    horizontals_below: int
    above: SideStats
    below: SideStats

    @property
    def forest_limit(self) -> int:
        return 2 * self.n - 1

    @property
    def side_limit(self) -> int:
        return 4 * self.n - 2

    @property
    def total_limit(self) -> int:
        return 8 * self.n - 4

    def bounds_ok(self) -> dict:
        """Pass/fail for the linear edge bounds (trivially true at n = 0)."""
        lim_f = max(self.forest_limit, 0)
        lim_s = max(self.side_limit, 0)
        lim_t = max(self.total_limit, 0)
        forests = (self.above.forest_forward_edges, self.above.forest_backward_edges,
                   self.below.forest_forward_edges, self.below.forest_backward_edges)
        return {
            "forest": all(e <= lim_f for e in forests),
            "side": (self.above.boundary_edges <= lim_s
                     and self.below.boundary_edges <= lim_s),
            "total": self.above.boundary_edges + self.below.boundary_edges <= lim_t,
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "duplicates_removed": self.duplicates_removed,
            "horizontals_above": self.horizontals_above,
            "horizontals_below": self.horizontals_below,
            "above": self.above.to_dict(),
            "below": self.below.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZoneStats":
        return cls(d["n"], d["duplicates_removed"], d["horizontals_above"],
                   d["horizontals_below"], SideStats.from_dict(d["above"]),
                   SideStats.from_dict(d["below"]))


class Face(NamedTuple):
    """A full zone face as a counterclockwise element cycle; `side` is set
    when the face is a single-sided wedge piece that cannot be stitched."""

    index: int
    side: Optional[str]
    cycle: tuple


@dataclass
class Zone:
    """The zone of `query`: cells above and below in index order, with the
    edge-count statistics and the map back to the original frame.
    `query` and `input_lines` are absent on zones loaded back from JSON."""

    n: int
    query: Optional[Line]
    to_original: AffineMap
    upper: tuple[Cell, ...]
    lower: tuple[Cell, ...]
    stats: ZoneStats
    faces: Optional[tuple[Face, ...]] = None
    input_lines: tuple[Line, ...] = ()


def _side_cells(inst: CanonicalInstance, side: str, clip: bool = True):
    """Cells of one side in the canonical frame (below side reflected
    back), plus that side's stats.  Work happens in the working frame
    where the side looks like 'above'."""
    order = sort_and_orient(inst, side)
    if side == ABOVE:
        y_star = inst.horizontals_above if clip else None
    else:
        hb = inst.horizontals_below
        y_star = -hb if (clip and hb is not None) else None
    n = len(order)
    if n == 0:
        cell = Cell(0, side, None, None)
        cells = [_clip_cell(cell, y_star)] if y_star is not None else [cell]
        stats = SideStats(0, 0, 0, 0, 0,
                          1 if y_star is not None else 0, y_star is not None)
    else:
        fwd = build_chains(order, FORWARD)
        bwd = build_chains(order, BACKWARD)
        events = 0
        cells = [assemble_cell(0, None, bwd.chains[0], None,
                               (None, order[0].anchor), side)]
        for i in range(1, n):
            q, ev = merge_with_events(fwd.chains[i - 1], bwd.chains[i])
            events += ev
            cells.append(assemble_cell(i, fwd.chains[i - 1], bwd.chains[i], q,
                                       (order[i - 1].anchor, order[i].anchor), side))
        cells.append(assemble_cell(n, fwd.chains[n - 1], None, None,
                                   (order[n - 1].anchor, None), side))
        if y_star is not None:
            cells = clip_horizontal(cells, y_star)
        stats = SideStats(
            forest_forward_edges=fwd.edge_count,
            forest_backward_edges=bwd.edge_count,
            scan_steps=fwd.scan_steps + bwd.scan_steps,
            merge_events=events,
            boundary_edges=sum(c.boundary_edge_count for c in cells),
            cap_edges=sum(1 for c in cells if c.cap is not None),
            clipped=y_star is not None,
        )
    if side == BELOW:
        cells = [_reflect_cell(c) for c in cells]
    return cells, stats


def _reflect_point(p: Point) -> Point:
    return Point(p.x, -p.y)


def _reflect_opt(p):
    return None if p is None else _reflect_point(p)


def _reflect_frag(f: Optional[BoundarySide]):
    if f is None:
        return None
    rd = None if f.ray_dir is None else (f.ray_dir[0], -f.ray_dir[1])
    return BoundarySide(tuple(_reflect_point(v) for v in f.vertices), rd)


def _reflect_cell(c: Cell) -> Cell:
    cap = c.cap
    if cap is not None:
        cap = Cap(_reflect_opt(cap.left_end), _reflect_opt(cap.right_end),
                  cap.dir, _reflect_opt(cap.anchor))
    return Cell(c.index, c.side, _reflect_opt(c.base_from), _reflect_opt(c.base_to),
                _reflect_frag(c.left), _reflect_frag(c.right),
                _reflect_opt(c.apex), cap)


def _map_point(p, m: AffineMap):
    return None if p is None else m.apply(p)


def _map_frag(f: Optional[BoundarySide], m: AffineMap):
    if f is None:
        return None
    rd = None if f.ray_dir is None else m.apply_dir(f.ray_dir)
    return BoundarySide(tuple(m.apply(v) for v in f.vertices), rd)


def _map_cell(c: Cell, m: AffineMap) -> Cell:
    cap = c.cap
    if cap is not None:
        cap = Cap(_map_point(cap.left_end, m), _map_point(cap.right_end, m),
                  m.apply_dir(cap.dir), _map_point(cap.anchor, m))
    return Cell(c.index, c.side, _map_point(c.base_from, m), _map_point(c.base_to, m),
                _map_frag(c.left, m), _map_frag(c.right, m),
                _map_point(c.apex, m), cap)


def _piece_cycle(c: Cell) -> tuple:
    els: list = []
    if c.base_to is not None:
        els.append(c.base_to)
    els.extend(c.boundary_walk)
    if c.base_from is not None and c.base_from != c.base_to:
        els.append(c.base_from)
    return tuple(els)


def _stitch(upper: Sequence[Cell], lower: Sequence[Cell], ccw: bool) -> tuple[Face, ...]:
    """Join each upper piece with its lower piece along the shared base.

    Wedge pieces (degenerate base) belong to different arrangement faces
    above and below, so they are emitted separately instead of stitched.
    """
    faces: list[Face] = []
    for cu, cl in zip(upper, lower):
        degenerate = cu.base_from is not None and cu.base_from == cu.base_to
        if degenerate:
            faces.append(Face(cu.index, ABOVE, _orient(_piece_cycle(cu), ccw)))
            faces.append(Face(cl.index, BELOW, _orient(_piece_cycle(cl), not ccw)))
            continue
        cyc: list = []
        if cu.base_to is not None:
            cyc.append(cu.base_to)
        cyc.extend(cu.boundary_walk)
        if cu.base_from is not None:
            cyc.append(cu.base_from)
        cyc.extend(reversed(cl.boundary_walk))
        faces.append(Face(cu.index, None, _orient(tuple(cyc), ccw)))
    return tuple(faces)


def _orient(cycle: tuple, ccw: bool) -> tuple:
    return cycle if ccw else tuple(reversed(cycle))


def zone(query: Line, input_lines: Sequence[Line], stitch: bool = False) -> Zone:
    """Compute the zone of `query` in the arrangement of `input_lines`.

    Canonicalizes, runs the chain pipeline on both sides (the lower side
    through the reflected instance), clips against the nearest horizontal
    line on each side when present, and maps everything back to the
    original frame.
    """
    inst = canonicalize(query, input_lines)
    upper, sa = _side_cells(inst, ABOVE)
    lower, sb = _side_cells(inst, BELOW)
    m = inst.inverse_map
    if not m.is_identity:
        upper = [_map_cell(c, m) for c in upper]
        lower = [_map_cell(c, m) for c in lower]
    faces = None
    if stitch:
        # The stitched cycles are promised counterclockwise in the
        # original frame; mirror them when the canonicalizing map flips
        # orientation.
        faces = _stitch(upper, lower, ccw=inst.orientation_sign > 0)
    stats = ZoneStats(
        n=inst.n,
        duplicates_removed=len(inst.duplicates),
        horizontals_above=inst.horizontal_count_above,
        horizontals_below=inst.horizontal_count_below,
        above=sa,
        below=sb,
    )
    return Zone(inst.n, Line(query.a, query.b, query.c), m,
                tuple(upper), tuple(lower), stats, faces,
                tuple(input_lines))


# ---------------------------------------------------------------------------
# Counts-only pipeline: identical scans and merges, no cell objects.
# Used by the benchmark and the large-n bound checks.
# ---------------------------------------------------------------------------


def _count_side(order: Sequence[HalfLine]) -> SideStats:
    n = len(order)
    if n == 0:
        return SideStats(0, 0, 0, 0, 0, 0, False)
    keys = [(hl.line.b, hl.line.c) for hl in order]
    fraw, fwork = _scan(keys)
    rkeys = keys[::-1]
    braw, bwork = _scan(rkeys)
    fedges = sum(_raw_edge_count(r) for r in fraw)
    bedges = sum(_raw_edge_count(r) for r in braw)
    events = 0
    boundary = _raw_edge_count(fraw[n - 1]) + _raw_edge_count(braw[n - 1])
    for i in range(1, n):
        a = fraw[i - 1]
        b = braw[n - 1 - i]  # chain anchored at p_{i+1}
        q, ev = _merge_raw(_raw_view(a, keys), _raw_view(b, rkeys))
        events += ev
        if q is None:
            boundary += _raw_edge_count(a) + _raw_edge_count(b)
        else:
            boundary += _prefix_edges(a, q.y) + _prefix_edges(b, q.y)
    return SideStats(fedges, bedges, fwork + bwork, events, boundary, 0, False)


def zone_stats(query: Line, input_lines: Sequence[Line]) -> ZoneStats:
    """Run the zone pipeline for its counters only (no geometry objects
    are materialized).  Restricted to instances without query-parallel
    lines; use zone() when clipping is involved."""
    inst = canonicalize(query, input_lines)
    if inst.horizontals_above is not None or inst.horizontals_below is not None:
        raise ValueError("zone_stats does not handle horizontal lines; use zone()")
    sa = _count_side(sort_and_orient(inst, ABOVE))
    sb = _count_side(sort_and_orient(inst, BELOW))
    return ZoneStats(inst.n, len(inst.duplicates), 0, 0, sa, sb)
