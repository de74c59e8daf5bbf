"""Brute-force ground truth for zone cells, plus the zone differ.

A cell is rebuilt directly from its membership characterization: a point
above the query line belongs to cell i exactly when it lies (weakly)
right of the first i half-lines and left of the rest.  The region is
computed by clipping a symbolic convex cycle against each half-plane in
turn.  Unbounded regions stay symbolic: the cycle mixes finite points
with points at infinity (directions), never a bounding box.

Nothing here consults the chain scan or the forests; the only shared
inputs are the geometry primitives and the sorted half-line order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

from .errors import EmptyCell
from .geometry import (
    R0,
    R1,
    CanonicalInstance,
    Line,
    Point,
    Rat,
    _primitive_dir,
    canonicalize,
    orientation,
    rat,
)
from .chains import ABOVE, BELOW, HalfLine, sort_and_orient
from .cells import (
    Cap,
    BoundarySide,
    Cell,
    SideStats,
    Zone,
    ZoneStats,
    _map_cell,
    _reflect_cell,
)


class _Pt(NamedTuple):
    x: Rat
    y: Rat


class _Dir(NamedTuple):
    """A point at infinity in a primitive integer direction."""

    dx: int
    dy: int


@dataclass(frozen=True)
class HalfPlaneSystem:
    """The constraint set of one upper cell: per-line sides on top of the
    implicit y >= 0, plus the optional clipping height."""

    constraints: tuple[tuple[Line, str], ...]  # side is "right" or "left"
    y_star: Optional[Rat] = None

    def rows(self):
        """(ea, eb, ec) rows meaning ea*x + eb*y + ec >= 0."""
        for line, side in self.constraints:
            if side == "right":
                yield (line.a, line.b, line.c)
            else:
                yield (-line.a, -line.b, -line.c)
        if self.y_star is not None:
            yield (R0, -R1, rat(self.y_star))


def _eval(el, row):
    ea, eb, ec = row
    if isinstance(el, _Pt):
        return ea * el.x + eb * el.y + ec
    return ea * el.dx + eb * el.dy


def _cross2(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _crossing(p, q, row, vp, vq):
    """Boundary point of `row` on the edge p -> q (either may be at
    infinity; both at infinity means the arc crossing, which happens at a
    direction along the clip line)."""
    ea, eb, ec = row
    p_inf = isinstance(p, _Dir)
    q_inf = isinstance(q, _Dir)
    if not p_inf and not q_inf:
        t = vp / (vp - vq)
        return _Pt(p.x + (q.x - p.x) * t, p.y + (q.y - p.y) * t)
    if p_inf and q_inf:
        for cand in ((eb, -ea), (-eb, ea)):
            d = _Dir(*_primitive_dir(rat(cand[0]), rat(cand[1])))
            if _cross2((p.dx, p.dy), d) > 0 and _cross2(d, (q.dx, q.dy)) > 0:
                return d
        raise AssertionError("no clip direction inside the infinity arc")
    if p_inf:
        anchor, d, va = q, p, vq
    else:
        anchor, d, va = p, q, vp
    s = -va / (ea * d.dx + eb * d.dy)
    return _Pt(anchor.x + d.dx * s, anchor.y + d.dy * s)


def _clip(cycle, row):
    """One Sutherland-Hodgman pass against a closed half-plane."""
    k_n = len(cycle)
    vals = [_eval(el, row) for el in cycle]
    out = []
    for k in range(k_n):
        v = vals[k]
        w = vals[(k + 1) % k_n]
        if v >= 0:
            out.append(cycle[k])
        if (v > 0 > w) or (v < 0 < w):
            out.append(_crossing(cycle[k], cycle[(k + 1) % k_n], row, v, w))
    res = []
    for el in out:
        if res and el == res[-1]:
            continue
        res.append(el)
    while len(res) > 1 and res[0] == res[-1]:
        res.pop()
    return res


def _simplify(cycle):
    """Drop redundant elements once clipping is done: interior directions
    of an infinity arc, and finite points sitting inside a straight edge
    (the seeded origin can end up there)."""
    changed = True
    while changed and len(cycle) > 2:
        changed = False
        k_n = len(cycle)
        for k in range(k_n):
            a, b, c = cycle[k - 1], cycle[k], cycle[(k + 1) % k_n]
            if isinstance(b, _Dir):
                if isinstance(a, _Dir) and isinstance(c, _Dir):
                    cycle = cycle[:k] + cycle[k + 1:]
                    changed = True
                    break
                continue
            if isinstance(a, _Pt) and isinstance(c, _Pt):
                drop = orientation(Point(*a), Point(*b), Point(*c)) == 0
            elif isinstance(a, _Pt):
                v = (b.x - a.x, b.y - a.y)
                drop = (_cross2(v, (c.dx, c.dy)) == 0
                        and v[0] * c.dx + v[1] * c.dy > 0)
            elif isinstance(c, _Pt):
                v = (b.x - c.x, b.y - c.y)
                drop = (_cross2(v, (a.dx, a.dy)) == 0
                        and v[0] * a.dx + v[1] * a.dy > 0)
            else:
                drop = False
            if drop:
                cycle = cycle[:k] + cycle[k + 1:]
                changed = True
                break
    return cycle


def _trivial_cell(side: str, y_star) -> Cell:
    """The single cell of an empty arrangement: a half-plane, or a strip
    when a horizontal line clips it."""
    if y_star is None:
        return Cell(0, side, None, None)
    return Cell(0, side, None, None, None, None, None,
                Cap(None, None, (1, 0), Point(R0, rat(y_star))))


def oracle_cell(i: int, order: Sequence[HalfLine], y_star=None,
                side: str = ABOVE) -> Cell:
    """Cell i of the upper zone, straight from the membership rule:
    weakly right of half-lines 1..i, weakly left of the rest, 0 <= y
    (<= y_star when clipping).  O(n^2) incremental clipping."""
    n = len(order)
    if not 0 <= i <= n:
        raise ValueError(f"cell index {i} out of range 0..{n}")
    if order:
        side = order[0].side
    if n == 0:
        return _trivial_cell(side, y_star)
    system = HalfPlaneSystem(
        tuple((hl.line, "right") for hl in order[:i])
        + tuple((hl.line, "left") for hl in order[i:]),
        None if y_star is None else rat(y_star),
    )
    cycle = [_Pt(R0, R0), _Dir(1, 0), _Dir(0, 1), _Dir(-1, 0)]
    for row in system.rows():
        cycle = _clip(cycle, row)
        if not cycle:
            raise EmptyCell(f"cell {i} clipped away entirely")
    cycle = _simplify(cycle)
    if len(cycle) < 2:
        raise EmptyCell(f"cell {i} degenerated to {cycle!r}")
    return _cycle_to_cell(cycle, i, side, system.y_star)


def _cycle_to_cell(cycle, i: int, side: str, y_star) -> Cell:
    """Read a convex CCW cycle back into the shared cell representation."""
    k_n = len(cycle)

    def on_axis(el):
        if isinstance(el, _Pt):
            return el.y == 0
        return el.dy == 0

    axis = [k for k in range(k_n) if on_axis(cycle[k])]
    if not axis:
        raise EmptyCell(f"cell {i} does not touch the query line")
    starts = [k for k in axis if (k - 1) % k_n not in axis]
    if len(starts) != 1:
        raise EmptyCell(f"cell {i} has a fragmented base: {cycle!r}")
    s = starts[0]
    rot = cycle[s:] + cycle[:s]
    run = len(axis)
    base, walk = rot[:run], rot[run:]

    base_from = None if isinstance(base[0], _Dir) else Point(base[0].x, base[0].y)
    base_to = None if isinstance(base[-1], _Dir) else Point(base[-1].x, base[-1].y)
    assert run <= 2, f"unexpected base run in {cycle!r}"

    dirs = [k for k, el in enumerate(walk) if isinstance(el, _Dir)]
    left = right = apex = cap = None
    if dirs:
        d0, d1 = dirs[0], dirs[-1]
        assert d1 - d0 == len(dirs) - 1 and len(dirs) <= 2, \
            f"unexpected infinity arc in {walk!r}"
        right_pts = walk[:d0]
        left_pts = walk[d1 + 1:]
        if base_to is not None:
            right = BoundarySide(
                (base_to,) + tuple(Point(p.x, p.y) for p in right_pts),
                (walk[d0].dx, walk[d0].dy))
        else:
            assert not right_pts
        if base_from is not None:
            left = BoundarySide(
                (base_from,) + tuple(Point(p.x, p.y) for p in reversed(left_pts)),
                (walk[d1].dx, walk[d1].dy))
        else:
            assert not left_pts
    else:
        pts = [Point(p.x, p.y) for p in walk]
        top_y = max(p.y for p in pts)
        tops = [k for k, p in enumerate(pts) if p.y == top_y]
        ti, tj = tops[0], tops[-1]
        assert tj - ti == len(tops) - 1 and len(tops) <= 2
        capped = y_star is not None and top_y == y_star
        if capped and len(tops) == 2:
            cap = Cap(pts[tj], pts[ti], (1, 0))
        elif capped and base_from is None:
            cap = Cap(None, pts[ti], (1, 0))
        elif capped and base_to is None:
            cap = Cap(pts[ti], None, (1, 0))
        elif len(tops) == 1:
            apex = pts[ti]
        else:
            raise AssertionError(f"two top vertices without a cap in {walk!r}")
        if base_to is not None:
            right = BoundarySide((base_to,) + tuple(pts[:ti + 1]), None)
        else:
            assert ti == 0
        if base_from is not None:
            left = BoundarySide((base_from,) + tuple(reversed(pts[tj:])), None)
        else:
            assert tj == len(pts) - 1
    return Cell(i, side, base_from, base_to, left, right, apex, cap)


def oracle_zone(query: Line, input_lines: Sequence[Line]) -> Zone:
    """Assemble oracle cells over all indices and both sides, mirroring
    zone()'s canonicalization, reflection and mapping."""
    inst = canonicalize(query, input_lines)
    n = inst.n
    per_side = {}
    stats = {}
    for side in (ABOVE, BELOW):
        order = sort_and_orient(inst, side)
        if side == ABOVE:
            y_star = inst.horizontals_above
        else:
            hb = inst.horizontals_below
            y_star = None if hb is None else -hb
        if n == 0:
            cells = [_trivial_cell(side, y_star)]
        else:
            cells = [oracle_cell(i, order, y_star) for i in range(n + 1)]
        stats[side] = SideStats(
            0, 0, 0, 0,
            sum(c.boundary_edge_count for c in cells),
            sum(1 for c in cells if c.cap is not None),
            y_star is not None)
        if side == BELOW:
            cells = [_reflect_cell(c) for c in cells]
        per_side[side] = cells
    m = inst.inverse_map
    if not m.is_identity:
        for side in per_side:
            per_side[side] = [_map_cell(c, m) for c in per_side[side]]
    zs = ZoneStats(n, len(inst.duplicates), inst.horizontal_count_above,
                   inst.horizontal_count_below, stats[ABOVE], stats[BELOW])
    return Zone(n, Line(query.a, query.b, query.c), m,
                tuple(per_side[ABOVE]), tuple(per_side[BELOW]), zs,
                input_lines=tuple(input_lines))


# ---------------------------------------------------------------------------
# Zone comparison.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffReport:
    """Empty iff the two zones agree cell by cell as closed regions."""

    mismatches: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.mismatches

    def __str__(self):
        return "zones agree" if self.empty else "\n".join(self.mismatches)


def _describe(a: Cell, b: Cell) -> str:
    if a.base_from != b.base_from or a.base_to != b.base_to:
        return (f"base differs: {a.base_from}..{a.base_to} vs "
                f"{b.base_from}..{b.base_to}")
    wa, wb = a.boundary_walk, b.boundary_walk
    if len(wa) != len(wb):
        return f"boundary walks differ in length: {list(wa)} vs {list(wb)}"
    for k, (ea, eb) in enumerate(zip(wa, wb)):
        if ea != eb:
            return f"boundary element {k} differs: {ea} vs {eb}"
    if a.bounded != b.bounded:
        return f"boundedness differs: {a.bounded} vs {b.bounded}"
    return f"cells differ: {a!r} vs {b!r}"


def diff(a: Zone, b: Zone) -> DiffReport:
    """Report the first divergence between two zones over the same
    instance (exact, structural); empty report means equality."""
    if a.n != b.n:
        return DiffReport((f"structural mismatch: n={a.n} vs n={b.n}",))
    for side, ca, cb in ((ABOVE, a.upper, b.upper), (BELOW, a.lower, b.lower)):
        if len(ca) != len(cb):
            return DiffReport(
                (f"structural mismatch: {len(ca)} vs {len(cb)} cells {side}",))
        for x, y in zip(ca, cb):
            if x != y:
                return DiffReport(
                    (f"cell {x.index} side {side}: {_describe(x, y)}",))
    return DiffReport()
