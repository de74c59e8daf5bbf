"""Deterministic random instances, with optional forced degeneracies.

Modes:
  none        uniform integer-coefficient lines, never parallel to the query
  concurrent  at least two lines share their intersection point with the query
  horizontal  lines parallel to the query injected on both sides
  mixed       concurrent plus horizontal plus an occasional duplicate

Forced-concurrency lines keep integer direction coefficients but derive
an exact rational constant term from the shared point, so the instance
files exercise rational parsing as well.
"""
from __future__ import annotations

import random

from .geometry import Line, Point, rat
from .formats import InstanceFile

MODES = ("none", "concurrent", "horizontal", "mixed")


def _random_line(rng: random.Random, bound: int, avoid_parallel: Line = None) -> Line:
    while True:
        a = rng.randint(-bound, bound)
        b = rng.randint(-bound, bound)
        if a == 0 and b == 0:
            continue
        if avoid_parallel is not None and a * avoid_parallel.b == b * avoid_parallel.a:
            continue
        c = rng.randint(-bound, bound)
        return Line(a, b, c)


def _point_on(query: Line, rng: random.Random, bound: int) -> Point:
    """A rational point on the query line with small coordinates."""
    t = rat(rng.randint(-bound, bound), rng.randint(1, bound))
    if query.b != 0:
        # parametrize by x
        return Point(t, (-query.c - query.a * t) / query.b)
    return Point(-query.c / query.a, t)


def _through(p: Point, rng: random.Random, bound: int, avoid_parallel: Line) -> Line:
    while True:
        a = rng.randint(-bound, bound)
        b = rng.randint(-bound, bound)
        if a == 0 and b == 0:
            continue
        if a * avoid_parallel.b == b * avoid_parallel.a:
            continue
        return Line(a, b, -(a * p.x + b * p.y))


def generate(seed: int, n: int, coeff_bound: int = 9,
             degeneracy: str = "none") -> InstanceFile:
    """Deterministic instance with `n` input lines and a random query."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    if degeneracy not in MODES:
        raise ValueError(f"degeneracy must be one of {MODES}")
    rng = random.Random(seed)
    query = _random_line(rng, coeff_bound)
    lines: list[Line] = []

    forced: list[Line] = []
    if degeneracy in ("concurrent", "mixed") and n >= 2:
        k = rng.randint(2, min(4, n))
        p = _point_on(query, rng, coeff_bound)
        chosen = set()
        while len(forced) < k:
            l = _through(p, rng, coeff_bound, query)
            if (l.a, l.b, l.c) not in chosen:
                chosen.add((l.a, l.b, l.c))
                forced.append(l)
    if degeneracy in ("horizontal", "mixed") and n - len(forced) >= 2:
        d1 = rng.randint(1, coeff_bound)
        d2 = rng.randint(1, coeff_bound)
        # In the canonical frame a parallel line at constant term c' sits
        # at height qc - c', so one lands on each side of the query.
        forced.append(Line(query.a, query.b, query.c - d1))
        forced.append(Line(query.a, query.b, query.c + d2))

    while len(lines) + len(forced) < n:
        lines.append(_random_line(rng, coeff_bound, avoid_parallel=query))
    lines.extend(forced)
    if degeneracy == "mixed" and len(lines) >= 2 and rng.random() < 0.5:
        # duplicates are legal input; clone one line over another slot
        i, j = rng.randrange(len(lines)), rng.randrange(len(lines))
        lines[i] = lines[j]
    rng.shuffle(lines)
    lines = [Line(l.a, l.b, l.c, k) for k, l in enumerate(lines)]
    return InstanceFile(query, tuple(lines))
