"""Pedagogical replay of the scan and merge procedures as text frames.

One frame per scan iteration (the chain frozen and where it was cut) and
one per merge event, for one side of the zone.  Frames are deterministic
and rendered in the canonical frame, where the query line is the x-axis.
"""
from __future__ import annotations

from .errors import TraceLimitExceeded
from .geometry import Point, canonicalize, rat_compact
from .chains import ABOVE, _merge_raw, _raw_view, _scan, sort_and_orient
from .formats import InstanceFile

DEFAULT_CAP = 32


def _fmt_pt(x, y) -> str:
    return f"({rat_compact(x)}, {rat_compact(y)})"


def _chain_str(rec) -> str:
    vx, vy, _el, ray = rec
    s = " -> ".join(_fmt_pt(x, y) for x, y in zip(vx, vy))
    return s + (" -> ray" if ray is not None else "")


def _scan_frames(keys, label: str) -> list[str]:
    frames = []
    n = len(keys)

    def hook(i, rec, q):
        if i < n:
            where = (f"cut at q={_fmt_pt(q.x, q.y)}" if q is not None
                     else "no crossing, chain replaced")
            frames.append(f"scan[{label}] step {i}: insert half-line {i + 1}; "
                          f"{where}; freeze {label[0]}_{i}: {_chain_str(rec)}")
        else:
            frames.append(f"scan[{label}] step {i} (final): "
                          f"freeze {label[0]}_{i}: {_chain_str(rec)}")

    _scan(keys, hook=hook)
    return frames


def trace(instance: InstanceFile, side: str = ABOVE,
          cap: int = DEFAULT_CAP) -> list[str]:
    """Frames for one side: the forward scan, the backward scan, then the
    per-cell merge sweeps."""
    inst = canonicalize(instance.query, instance.lines)
    if inst.n > cap:
        raise TraceLimitExceeded(
            f"trace is capped at n <= {cap}; this instance has n = {inst.n}")
    order = sort_and_orient(inst, side)
    n = len(order)
    if n == 0:
        return [f"[{side}] empty arrangement: one unbounded cell, nothing to scan"]
    keys = [(hl.line.b, hl.line.c) for hl in order]
    rkeys = keys[::-1]
    frames = _scan_frames(keys, "forward")

    bframes = []

    def bhook(i, rec, q):
        owner = n - i + 1
        if i < n:
            where = (f"cut at q={_fmt_pt(q.x, q.y)}" if q is not None
                     else "no crossing, chain replaced")
            bframes.append(f"scan[backward] step {i}: insert half-line {owner - 1}; "
                           f"{where}; freeze b_{owner}: {_chain_str(rec)}")
        else:
            bframes.append(f"scan[backward] step {i} (final): "
                           f"freeze b_{owner}: {_chain_str(rec)}")

    braw, _ = _scan(rkeys, hook=bhook)
    frames.extend(bframes)

    fraw, _ = _scan(keys)
    for i in range(1, n):
        a = fraw[i - 1]
        b = braw[n - 1 - i]

        def mhook(which, y, _i=i):
            frames.append(f"merge[cell {_i}] event: sweep passes y="
                          f"{rat_compact(y)} on the {which} chain")

        q, _ev = _merge_raw(_raw_view(a, keys), _raw_view(b, rkeys), hook=mhook)
        if q is None:
            frames.append(f"merge[cell {i}] done: chains never meet, cell unbounded")
        else:
            frames.append(f"merge[cell {i}] done: q={_fmt_pt(q.x, q.y)}")
    return frames
