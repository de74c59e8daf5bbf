"""Scaling benchmark: sorting versus the post-sort linear phase.

The linear-time claim is conditional on the sorted intercept list, so the
two phases are timed separately.  Alongside wall-clock times the report
carries the combinatorial witness (edges traversed by the scans plus
merge events per side), which certifies linearity independently of the
interpreter.
"""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cells import _count_side
from .chains import ABOVE, BELOW, sort_and_orient
from .geometry import canonicalize
from .generator import generate


@dataclass(frozen=True)
class TrialRecord:
    n_canonical: int
    sort_seconds: float
    post_seconds: float
    scan_steps: int        # both forests, both sides
    merge_events: int      # both sides
    zone_edges: int        # both sides


@dataclass(frozen=True)
class SizeRecord:
    n: int
    trials: tuple[TrialRecord, ...]

    @property
    def median_sort(self) -> float:
        return statistics.median(t.sort_seconds for t in self.trials)

    @property
    def median_post(self) -> float:
        return statistics.median(t.post_seconds for t in self.trials)

    @property
    def max_scan_per_n(self) -> float:
        return max(t.scan_steps / (2 * max(t.n_canonical, 1)) for t in self.trials)

    @property
    def max_work_per_n(self) -> float:
        return max((t.scan_steps + t.merge_events) / (2 * max(t.n_canonical, 1))
                   for t in self.trials)


@dataclass(frozen=True)
class BenchReport:
    records: tuple[SizeRecord, ...]
    slope: Optional[float]

    def to_text(self) -> str:
        out = [f"{'n':>9} {'sort_med_s':>11} {'post_med_s':>11} "
               f"{'scan/n':>7} {'work/n':>7}"]
        for r in self.records:
            out.append(f"{r.n:>9} {r.median_sort:>11.6f} {r.median_post:>11.6f} "
                       f"{r.max_scan_per_n:>7.3f} {r.max_work_per_n:>7.3f}")
        if self.slope is not None:
            out.append(f"post-sort log-log slope: {self.slope:.4f}")
        else:
            out.append("post-sort log-log slope: undefined (single size)")
        return "\n".join(out) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "records": [
                {
                    "n": r.n,
                    "median_sort_seconds": r.median_sort,
                    "median_post_seconds": r.median_post,
                    "max_scan_per_n": r.max_scan_per_n,
                    "max_work_per_n": r.max_work_per_n,
                    "trials": [
                        {
                            "n_canonical": t.n_canonical,
                            "sort_seconds": t.sort_seconds,
                            "post_seconds": t.post_seconds,
                            "scan_steps": t.scan_steps,
                            "merge_events": t.merge_events,
                            "zone_edges": t.zone_edges,
                        }
                        for t in r.trials
                    ],
                }
                for r in self.records
            ],
            "slope": self.slope,
        }


def _one_trial(seed: int, n: int, coeff_bound: int) -> TrialRecord:
    inst_file = generate(seed, n, coeff_bound, "none")
    t0 = time.perf_counter()
    inst = canonicalize(inst_file.query, inst_file.lines)
    order_a = sort_and_orient(inst, ABOVE)
    order_b = sort_and_orient(inst, BELOW)
    t1 = time.perf_counter()
    sa = _count_side(order_a)
    sb = _count_side(order_b)
    t2 = time.perf_counter()
    return TrialRecord(
        n_canonical=inst.n,
        sort_seconds=t1 - t0,
        post_seconds=t2 - t1,
        scan_steps=sa.scan_steps + sb.scan_steps,
        merge_events=sa.merge_events + sb.merge_events,
        zone_edges=sa.boundary_edges + sb.boundary_edges,
    )


def bench(sizes: Sequence[int], trials: int = 5, seed: int = 0,
          coeff_bound: int = 10000) -> BenchReport:
    """Run the pipeline over random instances at each size and fit the
    log-log slope of the post-sort phase."""
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    _one_trial(seed, min(sizes[0], 256), coeff_bound)  # warm-up
    records = []
    for n in sizes:
        ts = tuple(_one_trial(seed * 1000003 + n * 31 + t, n, coeff_bound)
                   for t in range(trials))
        records.append(SizeRecord(n, ts))
    slope = None
    if len(records) > 1:
        xs = np.log([r.n for r in records])
        ys = np.log([max(r.median_post, 1e-9) for r in records])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return BenchReport(tuple(records), slope)
