"""Exact refinement of the real x in [g0, g0+1) with {x (3/2)^n} < 1/2 for n <= N.

S_0 = [g0, g0 + 1/2). Step n keeps the part of S_{n-1} that multiplication
by (3/2)^n sends into some band [j, j + 1/2). Intervals are half-open
throughout, so points where the fractional part is exactly 1/2 drop out.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .errors import ResourceError

DEFAULT_REFINE_CAP = 24
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class IntervalSet:
    g0: int
    depth: int
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        prev_hi = None
        for lo, hi in self.intervals:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi})")
            if prev_hi is not None and lo <= prev_hi:
                raise ValueError("intervals must be sorted, disjoint and non-adjacent")
            if lo < self.g0 or hi > self.g0 + 1:
                raise ValueError(f"[{lo}, {hi}) leaves [{self.g0}, {self.g0 + 1})")
            prev_hi = hi

    def __contains__(self, x) -> bool:
        return any(lo <= x < hi for lo, hi in self.intervals)

    def __len__(self):
        return len(self.intervals)

    def issubset(self, other: "IntervalSet") -> bool:
        # every interval must sit inside a single interval of other
        j = 0
        theirs = other.intervals
        for lo, hi in self.intervals:
            while j < len(theirs) and theirs[j][1] <= lo:
                j += 1
            if j == len(theirs) or not (theirs[j][0] <= lo and hi <= theirs[j][1]):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "g0": self.g0,
            "depth": self.depth,
            "intervals": [[_ratstr(lo), _ratstr(hi)] for lo, hi in self.intervals],
            "measure": _ratstr(measure(self)),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _ratstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def measure(s: IntervalSet) -> Fraction:
    return sum((hi - lo for lo, hi in s.intervals), Fraction(0))


def _merge(pieces):
    out = []
    for lo, hi in pieces:
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _check(g0: int, N: int, cap: int) -> None:
    if g0 < 0:
        raise ValueError(f"g0 must be non-negative, got {g0}")
    if N < 0:
        raise ValueError(f"N must be non-negative, got {N}")
    if N > cap:
        raise ResourceError(f"refinement depth {N} exceeds the cap {cap}")


def refine_step(intervals, n: int):
    """Intersect a sorted interval list with the depth-n permissible bands."""
    r = Fraction(3**n, 2**n)
    out = []
    for lo, hi in intervals:
        a, b = lo * r, hi * r
        # only bands meeting [a, b) are enumerated
        for j in range(floor(a), -floor(-b)):
            blo, bhi = max(a, Fraction(j)), min(b, j + HALF)
            if blo < bhi:
                out.append((blo / r, bhi / r))
    return _merge(out)


def refine(g0: int, N: int, *, cap: int = DEFAULT_REFINE_CAP) -> IntervalSet:
    _check(g0, N, cap)
    cur = [(Fraction(g0), g0 + HALF)]
    for n in range(1, N + 1):
        cur = refine_step(cur, n)
    return IntervalSet(g0, N, tuple(cur))


def refine_history(g0: int, N: int, *, cap: int = DEFAULT_REFINE_CAP) -> list[IntervalSet]:
    """S_0, S_1, ..., S_N."""
    _check(g0, N, cap)
    cur = [(Fraction(g0), g0 + HALF)]
    out = [IntervalSet(g0, 0, tuple(cur))]
    for n in range(1, N + 1):
        cur = refine_step(cur, n)
        out.append(IntervalSet(g0, n, tuple(cur)))
    return out


def refine_scaled(g0: int, N: int, *, cap: int = DEFAULT_REFINE_CAP) -> IntervalSet:
    """Same set, computed on integers over the common denominator 2*3^N.

    With x = E / (2*3^N), the depth-n band j is E in [2j*u, (2j+1)*u) where
    u = 2^n * 3^(N-n).
    """
    _check(g0, N, cap)
    D = 2 * 3**N
    cur = [(g0 * D, g0 * D + 3**N)]
    for n in range(1, N + 1):
        u = 2**n * 3 ** (N - n)
        nxt = []
        for lo, hi in cur:
            for j in range(lo // (2 * u), (hi - 1) // (2 * u) + 1):
                blo, bhi = max(lo, 2 * j * u), min(hi, (2 * j + 1) * u)
                if blo < bhi:
                    nxt.append((blo, bhi))
        cur = _merge(nxt)
    return IntervalSet(g0, N, tuple((Fraction(lo, D), Fraction(hi, D)) for lo, hi in cur))
