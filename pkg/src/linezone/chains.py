"""Half-line ordering and the scan that decomposes each forest into
convex chains.

The scan inserts upper half-lines in intercept order, maintaining one
live y-monotone convex chain.  Each insertion walks the live chain from
its lower endpoint to the first crossing with the new half-line, freezes
the walked prefix as a finished chain, and splices the new half-line in.
Run over the reversed order, the identical procedure yields the backward
forest, so there is a single code path for both.

Intersections exactly on the x-axis are ignored during the walk: they
occur only when consecutive intercepts coincide (the tie-broken
degenerate case), where the shared base point is not a crossing.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Optional

from .geometry import (
    R0,
    CanonicalInstance,
    Line,
    Point,
    _float_key,
)

ABOVE, BELOW = "above", "below"
FORWARD, BACKWARD = "forward", "backward"
RIGHTWARD, LEFTWARD = "rightward", "leftward"


@dataclass(frozen=True)
class HalfLine:
    """The upper half of a non-horizontal line, anchored at its x-intercept."""

    line: Line
    anchor: Point
    side: str = ABOVE

    def __post_init__(self):
        assert not self.line.is_horizontal
        assert self.anchor.y == 0 and self.line.eval_at(self.anchor) == 0


def sort_and_orient(inst: CanonicalInstance, side: str = ABOVE) -> list[HalfLine]:
    """Half-lines on the given side, ordered by x-intercept; ties are
    broken so the half-line lying further left just above the axis comes
    first (equivalently: by slope, as in the degenerate-case rule).

    The below side is handled by reflecting the instance through y -> -y
    and running the same ascending rule, so one ordering serves both.
    """
    lines = inst.lines if side == ABOVE else tuple(l.reflect_y() for l in inst.lines)
    return [HalfLine(l, Point(-l.c, R0), side) for l in _sorted_lines(lines)]


def _sorted_lines(lines):
    # Lines are normalized with a == 1, so the intercept is -c and the
    # x-position at height eps is -c - b*eps: sort by (-c, -b) ascending.
    # Floats do the bulk of the work; runs with equal float intercepts are
    # re-sorted exactly, which keeps the order correct under collisions.
    dec = sorted((_float_key(-l.c), _float_key(-l.b), k) for k, l in enumerate(lines))
    out = []
    i = 0
    while i < len(dec):
        j = i + 1
        while j < len(dec) and dec[j][0] == dec[i][0]:
            j += 1
        run = [lines[t[2]] for t in dec[i:j]]
        if len(run) > 1:
            run.sort(key=lambda l: (-l.c, -l.b))
        out.extend(run)
        i = j
    return out


# ---------------------------------------------------------------------------
# The scan itself, in raw form.
#
# A raw chain is (vx, vy, edge_idx, ray_idx | None): vertex coordinates
# bottom-up, one input index per finite edge, plus the index of the line
# supporting the unbounded top edge when the chain is open.  The live
# chain is kept top-first so freezing a prefix is a pop from the end,
# which keeps total splicing work linear.
# ---------------------------------------------------------------------------


def _scan(keys, hook: Optional[Callable] = None):
    """Insert lines (given as (b, c) with a == 1) in order; return the raw
    chains in insertion order plus the number of edges traversed."""
    n = len(keys)
    chains: list = [None] * n
    if n == 0:
        return chains, 0
    b0, c0 = keys[0]
    vxd, vyd, eld = [-c0], [R0], []  # top-first; bottom vertex is last
    ray = 0
    work = 0
    for i in range(1, n):
        bi, ci = keys[i]
        L = len(vyd)
        m = L - 1
        qx = qy = None
        cut = -1
        for e in range(m + 1):
            work += 1
            if e < m:
                li = eld[L - 2 - e]
                lo = vyd[L - 1 - e]
                hi = vyd[L - 2 - e]
            else:
                li = ray
                lo = vyd[0]
                hi = None
            be, ce = keys[li]
            dd = be - bi
            if dd == 0:
                continue
            y = (ci - ce) / dd
            if y <= 0 or y < lo or (hi is not None and y > hi):
                continue
            qx = -ce - be * y
            qy = y
            cut = e
            break
        px = -ci
        if qy is None:
            fr = (vxd[::-1], vyd[::-1], eld[::-1], ray)
            vxd, vyd, eld, ray = [px], [R0], [], i
        elif cut == m:  # crossed the unbounded top edge
            fr = (vxd[::-1] + [qx], vyd[::-1] + [qy], eld[::-1] + [ray], None)
            vxd, vyd, eld = [qx, px], [qy, R0], [i]
        else:
            u = L - 2 - cut  # index of the cut edge's upper vertex
            if qy == vyd[u]:  # landed exactly on a chain vertex
                fr = (vxd[u:][::-1], vyd[u:][::-1], eld[u:][::-1], None)
                del vxd[u + 1:], vyd[u + 1:], eld[u:]
                eld.append(i)
            else:  # split the cut edge at q
                fr = (vxd[u + 1:][::-1] + [qx], vyd[u + 1:][::-1] + [qy],
                      eld[u:][::-1], None)
                del vxd[u + 1:], vyd[u + 1:], eld[u + 1:]
                vxd.append(qx)
                vyd.append(qy)
                eld.append(i)
            vxd.append(px)
            vyd.append(R0)
        chains[i - 1] = fr
        if hook:
            hook(i, fr, None if qy is None else Point(qx, qy))
    chains[n - 1] = (vxd[::-1], vyd[::-1], eld[::-1], ray)
    if hook:
        hook(n, chains[n - 1], None)
    return chains, work


def _raw_edge_count(rec) -> int:
    return len(rec[2]) + (1 if rec[3] is not None else 0)


def _raw_view(rec, keys):
    """(vy, finite edge keys, ray key | None) for the merge sweep."""
    _vx, vy, el, rayi = rec
    return (vy, [keys[k] for k in el], None if rayi is None else keys[rayi])


def _merge_raw(a, b, hook: Optional[Callable] = None):
    """Lowest crossing of a rightward and a leftward chain, by sweeping a
    horizontal line upward over both edge lists at once.

    `a` and `b` are (vy, edge keys, ray key) views.  Returns (point or
    None, number of vertex events processed).  Crossings at y = 0 (a
    shared degenerate base point) are not reported.  Simultaneous vertex
    events advance the left chain first; convexity makes the result
    order-independent.
    """
    avy, aek, ark = a
    bvy, bek, brk = b
    ma, mb = len(aek), len(bek)
    na = ma + (1 if ark is not None else 0)
    nb = mb + (1 if brk is not None else 0)
    ia = ib = 0
    events = 0
    if na == 0 or nb == 0:
        return None, 0
    while True:
        ka = aek[ia] if ia < ma else ark
        kb = bek[ib] if ib < mb else brk
        dd = ka[0] - kb[0]
        if dd != 0:
            y = (kb[1] - ka[1]) / dd
            if (y > 0 and y >= avy[ia] and y >= bvy[ib]
                    and (ia >= ma or y <= avy[ia + 1])
                    and (ib >= mb or y <= bvy[ib + 1])):
                return Point(-ka[1] - ka[0] * y, y), events
        a_top = avy[ia + 1] if ia < ma else None
        b_top = bvy[ib + 1] if ib < mb else None
        if a_top is None and b_top is None:
            return None, events
        if b_top is None or (a_top is not None and a_top <= b_top):
            ia += 1
            if ia >= na:
                return None, events
            if hook:
                hook("left", a_top)
        else:
            ib += 1
            if ib >= nb:
                return None, events
            if hook:
                hook("right", b_top)
        events += 1


def _prefix_edges(rec, qy) -> int:
    """Edges of a raw chain's prefix up to a crossing at height qy."""
    return bisect_left(rec[1], qy)


# ---------------------------------------------------------------------------
# Public chain / forest objects.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    """A y-monotone convex chain: vertices bottom-up from its base point,
    one supporting line per finite edge, and an optional unbounded top
    edge on `ray_line`."""

    owner: int  # 1-based position of its base point in the sorted order
    direction: str  # rightward (forward forest) or leftward (backward)
    vertices: tuple[Point, ...]
    edge_lines: tuple[Line, ...]
    ray_line: Optional[Line] = None

    @property
    def lower(self) -> Point:
        return self.vertices[0]

    @property
    def unbounded(self) -> bool:
        return self.ray_line is not None

    @property
    def edge_count(self) -> int:
        return len(self.edge_lines) + (1 if self.ray_line is not None else 0)

    def ray_dir(self) -> Optional[tuple[int, int]]:
        return None if self.ray_line is None else self.ray_line.upward_dir()


@dataclass(frozen=True)
class Forest:
    """All n chains of one forest; chains[i-1] is anchored at p_i."""

    chains: tuple[Chain, ...]
    kind: str
    scan_steps: int = 0

    @property
    def edge_count(self) -> int:
        return sum(c.edge_count for c in self.chains)


def build_chains(order: list[HalfLine], kind: str = FORWARD) -> Forest:
    """Run the scan over the sorted half-lines (reversed for the backward
    forest) and return the finished chains indexed by owner."""
    lines = [hl.line for hl in order]
    seq = lines if kind == FORWARD else lines[::-1]
    raw, work = _scan([(l.b, l.c) for l in seq])
    n = len(seq)
    chains: list = [None] * n
    direction = RIGHTWARD if kind == FORWARD else LEFTWARD
    for j, rec in enumerate(raw):
        owner = j + 1 if kind == FORWARD else n - j
        chains[owner - 1] = _materialize(rec, owner, direction, seq)
    return Forest(tuple(chains), kind, work)


def _materialize(rec, owner, direction, seq) -> Chain:
    vx, vy, el, rayi = rec
    return Chain(
        owner=owner,
        direction=direction,
        vertices=tuple(Point(x, y) for x, y in zip(vx, vy)),
        edge_lines=tuple(seq[k] for k in el),
        ray_line=None if rayi is None else seq[rayi],
    )


def _chain_view(ch: Chain):
    return ([v.y for v in ch.vertices],
            [(l.b, l.c) for l in ch.edge_lines],
            None if ch.ray_line is None else (ch.ray_line.b, ch.ray_line.c))


def chain_intersection(a: Chain, b: Chain) -> Optional[Point]:
    """Lowest intersection of a rightward chain with a leftward chain, or
    None when they never meet above the axis."""
    q, _events = _merge_raw(_chain_view(a), _chain_view(b))
    return q


def merge_with_events(a: Chain, b: Chain, hook=None):
    q, events = _merge_raw(_chain_view(a), _chain_view(b), hook)
    return q, events
