"""Survival depths: the first n at which x has an impermissible action.

Every positive integer fails eventually. Writing x = 2^v * odd, depth
v + 1 gives x 3^(v+1) / 2^(v+1) = odd * 3^(v+1) / 2, whose fractional part
is exactly 1/2, while every earlier depth lands on an integer.
"""
from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import HorizonExceeded
from .orbit import DEFAULT_DEPTH_CAP, WORD_DEPTH, FracPart, frac_numerators

DEFAULT_CHUNK = 1 << 18


@dataclass(frozen=True)
class SurvivalRecord:
    x: int
    depth: int
    violation: FracPart

    def to_dict(self) -> dict:
        return {"x": self.x, "depth": self.depth, "violation": str(self.violation)}


def survival_depth(x: int, max_depth: int | None = None, *, cap: int = DEFAULT_DEPTH_CAP) -> SurvivalRecord:
    """Scan depths 1, 2, ... incrementally until the first impermissible action."""
    if x < 1:
        raise ValueError(f"x must be a positive integer, got {x}")
    if max_depth is None:
        max_depth = min(cap, x.bit_length() + 1)
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    max_depth = min(max_depth, cap)
    top = (1 << max_depth) - 1
    state = x & top
    for n in range(1, max_depth + 1):
        state = (state * 3) & top
        num = state & ((1 << n) - 1)
        if 2 * num >= 1 << n:
            return SurvivalRecord(x, n, FracPart(num, n))
    raise HorizonExceeded(x, max_depth)


def two_adic_valuation(x: int) -> int:
    if x < 1:
        raise ValueError(f"x must be a positive integer, got {x}")
    return (x & -x).bit_length() - 1


def predicted_depth(x: int) -> int:
    return two_adic_valuation(x) + 1


@dataclass
class CensusReport:
    N: int
    histogram: dict[int, int]
    survivors_at: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "survivors_at": {str(k): v for k, v in sorted(self.survivors_at.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["depth", "count"])
        for depth, count in sorted(self.histogram.items()):
            w.writerow([depth, count])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "CensusReport":
        return cls(
            int(d["N"]),
            {int(k): int(v) for k, v in d["histogram"].items()},
            {int(k): int(v) for k, v in d["survivors_at"].items()},
        )


def _chunk_histogram(start: int, stop: int, max_depth: int) -> Counter:
    """Depth histogram for x in [start, stop), vectorised over the word path."""
    xs = np.arange(start, stop, dtype=np.uint64)
    depth = np.zeros(xs.shape, dtype=np.int64)
    alive = np.ones(xs.shape, dtype=bool)
    for n in range(1, min(max_depth, WORD_DEPTH) + 1):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        bad = frac_numerators(xs[idx], n) >= np.uint64(1 << (n - 1))
        hit = idx[bad]
        depth[hit] = n
        alive[hit] = False
    hist = Counter(depth[~alive].tolist())
    for i in np.flatnonzero(alive).tolist():
        # only multiples of 2^62 get here
        hist[survival_depth(start + i, max_depth).depth] += 1
    return hist


def census(N: int, max_depth: int | None = None, *, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> CensusReport:
    """Histogram of survival depths over x = 1..N.

    The range is split into contiguous chunks whose partial histograms are
    summed, so the result does not depend on ``chunk`` or ``workers``.
    """
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if workers < 1 or chunk < 1:
        raise ValueError("workers and chunk must be >= 1")
    if max_depth is None:
        max_depth = 2 + N.bit_length() - 1
    bounds = [(s, min(N + 1, s + chunk)) for s in range(1, N + 1, chunk)]
    hist: Counter = Counter()
    if workers == 1 or len(bounds) == 1:
        for s, e in bounds:
            hist.update(_chunk_histogram(s, e, max_depth))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_chunk_histogram, s, e, max_depth) for s, e in bounds]
            for f in futures:
                hist.update(f.result())
    histogram = dict(sorted(hist.items()))
    survivors = {}
    remaining = N
    for n in range(1, max(histogram) + 1):
        remaining -= histogram.get(n, 0)
        survivors[n] = remaining
    return CensusReport(N, histogram, survivors)
