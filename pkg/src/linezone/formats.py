"""Instance files, canonical JSON, summaries, and SVG rendering.

Rationals serialize as exact 'num/den' strings, never decimals, so every
round trip is lossless.  JSON re-emitted after a parse is byte-identical.
SVG clips unbounded cells at the viewport for display only; the JSON
stays symbolic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InstanceParseError, ViewportRequired, ZoneError
from .geometry import (
    AffineMap,
    Line,
    Point,
    rat,
    rat_compact,
    rat_str,
)
from .cells import ABOVE, BELOW, Cap, Cell, Face, Ray, Zone, ZoneStats


@dataclass(frozen=True)
class InstanceFile:
    """A parsed instance: the query line plus zero or more input lines."""

    query: Line
    lines: tuple[Line, ...]

    @property
    def n(self) -> int:
        return len(self.lines)


def _parse_rat(token: str, line_no: int):
    try:
        return rat(token)
    except (ValueError, ZeroDivisionError):
        raise InstanceParseError(f"malformed rational {token!r}", line_no) from None


def parse_instance(text: str) -> InstanceFile:
    """Parse the line-oriented instance format: one `query a b c` record,
    any number of `line a b c` records, '#' comments.  Coefficients are
    integers or p/q rationals."""
    query = None
    lines: list[Line] = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        parts = body.split()
        kind = parts[0]
        if kind not in ("query", "line"):
            raise InstanceParseError(f"unknown record {kind!r}", line_no)
        if len(parts) != 4:
            raise InstanceParseError(
                f"{kind} record needs exactly 3 coefficients", line_no)
        a, b, c = (_parse_rat(t, line_no) for t in parts[1:])
        if a == 0 and b == 0:
            raise InstanceParseError("degenerate line with a = b = 0", line_no)
        if kind == "query":
            if query is not None:
                raise InstanceParseError("duplicate query record", line_no)
            query = Line(a, b, c)
        else:
            lines.append(Line(a, b, c, len(lines)))
    if query is None:
        raise InstanceParseError("missing query record", 0)
    return InstanceFile(query, tuple(lines))


def format_instance(inst: InstanceFile) -> str:
    """Canonical text for an instance; parse(format_instance(x)) == x."""
    out = [f"query {rat_compact(inst.query.a)} {rat_compact(inst.query.b)} "
           f"{rat_compact(inst.query.c)}"]
    for l in inst.lines:
        out.append(f"line {rat_compact(l.a)} {rat_compact(l.b)} {rat_compact(l.c)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# JSON.
# ---------------------------------------------------------------------------


def _point_json(p: Point) -> dict:
    return {"x": rat_str(p.x), "y": rat_str(p.y)}


def _dir_json(d: tuple[int, int]) -> dict:
    return {"dx": rat_str(rat(d[0])), "dy": rat_str(rat(d[1]))}


def _element_json(el):
    if isinstance(el, Ray):
        return {"origin": _point_json(el.origin), "dir": _dir_json(el.dir)}
    return _point_json(el)


def _base_end_json(p: Optional[Point], sign: str):
    return sign if p is None else _point_json(p)


def _cell_json(c: Cell) -> dict:
    return {
        "index": c.index,
        "side": c.side,
        "base": {
            "from": _base_end_json(c.base_from, "-inf"),
            "to": _base_end_json(c.base_to, "+inf"),
        },
        "boundary": [_element_json(el) for el in c.boundary_walk],
        "bounded": c.bounded,
    }


def zone_to_json_dict(z: Zone) -> dict:
    d = {
        "n": z.n,
        "upper": [_cell_json(c) for c in z.upper],
        "lower": [_cell_json(c) for c in z.lower],
        "stats": z.stats.to_dict(),
    }
    if z.faces is not None:
        d["faces"] = [
            {"index": f.index, "side": f.side,
             "cycle": [_element_json(el) for el in f.cycle]}
            for f in z.faces
        ]
    return d


def zone_to_json(z: Zone) -> bytes:
    return (json.dumps(zone_to_json_dict(z), indent=2) + "\n").encode()


def _point_from(d: dict) -> Point:
    return Point(rat(d["x"]), rat(d["y"]))


def _element_from(d: dict):
    if "origin" in d:
        dx, dy = rat(d["dir"]["dx"]), rat(d["dir"]["dy"])
        assert dx.denominator == 1 and dy.denominator == 1
        return Ray(_point_from(d["origin"]), (int(dx), int(dy)))
    return _point_from(d)


def _base_end_from(v):
    return None if isinstance(v, str) else _point_from(v)


def zone_from_json(data) -> Zone:
    """Rebuild a zone from its JSON form.  Cells come back walk-only (no
    structured fragments), which is enough for equality, re-emission and
    summaries."""
    if isinstance(data, (bytes, str)):
        data = json.loads(data)
    cells = {"upper": [], "lower": []}
    for key in ("upper", "lower"):
        for cd in data[key]:
            cells[key].append(Cell(
                cd["index"], cd["side"],
                _base_end_from(cd["base"]["from"]),
                _base_end_from(cd["base"]["to"]),
                walk=tuple(_element_from(e) for e in cd["boundary"]),
                bounded=cd["bounded"],
            ))
    faces = None
    if "faces" in data:
        faces = tuple(
            Face(fd["index"], fd["side"],
                 tuple(_element_from(e) for e in fd["cycle"]))
            for fd in data["faces"]
        )
    return Zone(data["n"], None, AffineMap.identity(),
                tuple(cells["upper"]), tuple(cells["lower"]),
                ZoneStats.from_dict(data["stats"]), faces)


# ---------------------------------------------------------------------------
# Summary.
# ---------------------------------------------------------------------------


def summary_text(z: Zone) -> str:
    s = z.stats
    ok = s.bounds_ok()
    lim_f = max(s.forest_limit, 0)
    lim_s = max(s.side_limit, 0)
    lim_t = max(s.total_limit, 0)
    total = s.above.boundary_edges + s.below.boundary_edges
    lines = [
        f"n={s.n} upper_cells={len(z.upper)} lower_cells={len(z.lower)}",
        f"forest_edges above: F={s.above.forest_forward_edges}"
        f" F'={s.above.forest_backward_edges}"
        f" limit(2n-1)={lim_f} {'ok' if ok['forest'] else 'FAIL'}",
        f"forest_edges below: F={s.below.forest_forward_edges}"
        f" F'={s.below.forest_backward_edges}"
        f" limit(2n-1)={lim_f} {'ok' if ok['forest'] else 'FAIL'}",
        f"zone_edges above={s.above.boundary_edges} below={s.below.boundary_edges}"
        f" total={total} limit_side(4n-2)={lim_s} limit_total(8n-4)={lim_t}"
        f" {'ok' if ok['side'] and ok['total'] else 'FAIL'}",
        f"caps above={s.above.cap_edges} below={s.below.cap_edges}",
        f"scan_steps above={s.above.scan_steps} below={s.below.scan_steps}"
        f" merge_events above={s.above.merge_events} below={s.below.merge_events}",
        f"duplicates_removed={s.duplicates_removed}"
        f" horizontals above={s.horizontals_above} below={s.horizontals_below}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# SVG.
# ---------------------------------------------------------------------------


def _finite_anchors(z: Zone):
    pts = []
    for c in list(z.upper) + list(z.lower):
        for p in (c.base_from, c.base_to):
            if p is not None:
                pts.append(p)
        for el in c.boundary_walk:
            pts.append(el.origin if isinstance(el, Ray) else el)
    return pts


def _auto_viewport(z: Zone):
    pts = _finite_anchors(z)
    if not pts:
        raise ViewportRequired(
            "the zone has no finite vertices; pass an explicit viewport")
    xs = [float(p.x) for p in pts]
    ys = [float(p.y) for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = 0.25 * max(x1 - x0, y1 - y0, 1.0)
    return (x0 - pad, y0 - pad, x1 + pad, y1 + pad)


def _unit(d) -> tuple[float, float]:
    dx, dy = float(d[0]), float(d[1])
    h = math.hypot(dx, dy)
    return (dx / h, dy / h)


def _cell_polygon(c: Cell, z: Zone, ext: float):
    """Float vertex loop approximating the cell for display.  Rays and
    infinite base/cap ends extend `ext` far past the viewport, so the
    closing chords land well outside the visible area."""
    F = lambda p: (float(p.x), float(p.y))
    T = lambda p, d: (p[0] + d[0] * ext, p[1] + d[1] * ext)
    dfrom = _unit(z.to_original.apply_dir((-1, 0)))
    dto = _unit(z.to_original.apply_dir((1, 0)))
    if c.base_from is None and c.base_to is None:
        p0 = F(z.to_original.apply(Point(rat(0), rat(0))))
        nside = (0, 1) if c.side == ABOVE else (0, -1)
        nv = _unit(z.to_original.apply_dir(nside))
        lo0, lo1 = T(p0, dfrom), T(p0, dto)
        if c.cap is not None:
            a = F(c.cap.anchor)
            cd = _unit(c.cap.dir)
            return [lo0, lo1, T(a, cd), T(a, (-cd[0], -cd[1]))]
        return [lo0, lo1, T(T(p0, dto), nv), T(T(p0, dfrom), nv)]
    loop = [F(c.base_from) if c.base_from is not None else T(F(c.base_to), dfrom),
            F(c.base_to) if c.base_to is not None else T(F(c.base_from), dto)]
    if c.right is not None:
        rv = c.right.vertices
        loop.extend(F(v) for v in rv[1:])
        if c.right.ray_dir is not None:
            loop.append(T(F(rv[-1]), _unit(c.right.ray_dir)))
    if c.cap is not None:
        cd = _unit(c.cap.dir)
        if c.cap.right_end is None:
            loop.append(T(F(c.cap.left_end), cd))
        if c.cap.left_end is None:
            loop.append(T(F(c.cap.right_end), (-cd[0], -cd[1])))
    if c.left is not None:
        lv = c.left.vertices
        if c.left.ray_dir is not None:
            loop.append(T(F(lv[-1]), _unit(c.left.ray_dir)))
        loop.extend(F(v) for v in reversed(lv[1:]))
    return loop


def _line_in_box(l: Line, box) -> Optional[tuple]:
    """Endpoints of a line clipped to the viewport, in floats."""
    x0, y0, x1, y1 = box
    a, b, c = float(l.a), float(l.b), float(l.c)
    pts = []
    if b != 0:
        for x in (x0, x1):
            y = (-c - a * x) / b
            if y0 - 1e-9 <= y <= y1 + 1e-9:
                pts.append((x, y))
    if a != 0:
        for y in (y0, y1):
            x = (-c - b * y) / a
            if x0 - 1e-9 <= x <= x1 + 1e-9:
                pts.append((x, y))
    uniq = []
    for p in pts:
        if all(abs(p[0] - q[0]) > 1e-9 or abs(p[1] - q[1]) > 1e-9 for q in uniq):
            uniq.append(p)
    if len(uniq) < 2:
        return None
    uniq.sort()
    return uniq[0], uniq[-1]


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def render_svg(z: Zone, viewport=None, width: int = 800) -> bytes:
    """Deterministic SVG picture: shaded zone cells, the input lines, and
    the query line, all clipped to the viewport."""
    if z.upper and not z.upper[0].structured:
        raise ZoneError("SVG rendering needs a freshly computed zone")
    if viewport is None:
        box = _auto_viewport(z)
    else:
        box = tuple(float(v) for v in viewport)
        if not (box[0] < box[2] and box[1] < box[3]):
            raise ViewportRequired("viewport must satisfy x0 < x1 and y0 < y1")
    x0, y0, x1, y1 = box
    w, h = x1 - x0, y1 - y0
    ext = 1e6 * max(w, h, 1.0) + 10.0 * max(abs(x0), abs(x1), abs(y0), abs(y1))
    height = int(round(width * h / w))
    sw = w / 400.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(w)} {_fmt(h)}">',
        f'<g transform="scale(1,-1)">',
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(w)}" height="{_fmt(h)}" '
        f'fill="#ffffff"/>',
    ]
    fills = {ABOVE: "#74a9cf", BELOW: "#a1d99b"}
    for cell in list(z.upper) + list(z.lower):
        loop = _cell_polygon(cell, z, ext)
        if loop is None or len(loop) < 3:
            continue
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in loop)
        parts.append(f'<polygon points="{pts}" fill="{fills[cell.side]}" '
                     f'fill-opacity="0.45" stroke="none"/>')
    drawn = set()
    for l in z.input_lines:
        key = (l.a, l.b, l.c)
        if key in drawn:
            continue
        drawn.add(key)
        ends = _line_in_box(l, box)
        if ends is not None:
            (lx0, ly0), (lx1, ly1) = ends
            parts.append(f'<line x1="{_fmt(lx0)}" y1="{_fmt(ly0)}" '
                         f'x2="{_fmt(lx1)}" y2="{_fmt(ly1)}" '
                         f'stroke="#555555" stroke-width="{_fmt(sw)}"/>')
    if z.query is not None:
        ends = _line_in_box(z.query, box)
        if ends is not None:
            (qx0, qy0), (qx1, qy1) = ends
            parts.append(f'<line x1="{_fmt(qx0)}" y1="{_fmt(qy0)}" '
                         f'x2="{_fmt(qx1)}" y2="{_fmt(qy1)}" '
                         f'stroke="#cb181d" stroke-width="{_fmt(1.6 * sw)}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


# ---------------------------------------------------------------------------
# Unified emission.
# ---------------------------------------------------------------------------


def emit(z: Zone, format: str = "json", viewport=None) -> bytes:
    """Serialize a zone as canonical JSON, a human summary, or SVG."""
    if format == "json":
        return zone_to_json(z)
    if format == "summary":
        return summary_text(z).encode()
    if format == "svg":
        return render_svg(z, viewport)
    raise ValueError(f"unknown format {format!r}")
