"""Constructive eta with {eta * beta^n} kept small, for rational beta > 2.

The run is the greedy ceiling sequence s_0 = m, s_{n+1} = ceil(beta * s_n).
Each increment d_n = s_{n+1} - beta * s_n lies in [0, 1), and in {0, 1/2}
when 2*beta is odd. The limit eta = lim s_n / beta^n then satisfies

    eta * beta^n - s_n = sum_{k >= n} d_k beta^(n-k-1) in [0, c]

with c = 1/(beta-1) in general and c = 1/(2(beta-1)) in the half mode.
After N steps eta is pinned to [s_N, s_N + c] / beta^N.

If beta * m is an integer in general mode, the plain recurrence can stall
on s_n = m beta^n and give eta = m, which is outside the open interval
(m, m+1). Then s_1 is bumped to beta*m + 1; the bound at n = 0 still holds
because 1/beta plus a tail below 1/(beta(beta-1)) is at most 1/(beta-1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import CertificationError

GENERAL = "general"
HALF = "half"
MODES = (GENERAL, HALF)


@dataclass(frozen=True)
class BetaParam:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p and q must be positive")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}/{self.q} is not in lowest terms")
        if self.p <= 2 * self.q:
            raise ValueError(f"beta = {self.p}/{self.q} must exceed 2")

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def double_is_odd(self) -> bool:
        return self.q == 2 and self.p % 2 == 1

    def bound(self, mode: str) -> Fraction:
        if mode == GENERAL:
            return 1 / (self.value - 1)
        if mode == HALF:
            return 1 / (2 * (self.value - 1))
        raise ValueError(f"unknown mode {mode!r}")


@dataclass
class TijdemanRun:
    beta: BetaParam
    m: int
    mode: str
    s: list[int] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.s) - 1

    @property
    def c(self) -> Fraction:
        return self.beta.bound(self.mode)

    @property
    def seeded(self) -> bool:
        """True when s_1 was bumped to keep eta off the integer m."""
        return self.mode == GENERAL and (self.beta.p * self.m) % self.beta.q == 0

    def enclosure(self, N: int | None = None) -> tuple[Fraction, Fraction]:
        N = self.N if N is None else N
        scale = Fraction(self.beta.q, self.beta.p) ** N
        lo = self.s[N] * scale
        return lo, lo + self.c * scale

    def increments(self) -> list[Fraction]:
        b = self.beta.value
        return [self.s[n + 1] - b * self.s[n] for n in range(self.N)]

    def to_dict(self) -> dict:
        lo, hi = self.enclosure()
        return {
            "p": self.beta.p,
            "q": self.beta.q,
            "m": self.m,
            "mode": self.mode,
            "s": [str(v) for v in self.s],
            "c": _ratstr(self.c),
            "enclosure": [_ratstr(lo), _ratstr(hi)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TijdemanRun":
        run = cls(BetaParam(int(d["p"]), int(d["q"])), int(d["m"]), d["mode"], [int(v) for v in d["s"]])
        if "c" in d and Fraction(d["c"]) != run.c:
            raise ValueError(f"stored bound {d['c']} disagrees with mode {run.mode!r}")
        return run


def _ratstr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def construct(beta: BetaParam, m: int, N: int, mode: str = GENERAL) -> TijdemanRun:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == HALF and not beta.double_is_odd:
        raise ValueError(f"half mode needs 2*beta odd, got beta = {beta.p}/{beta.q}")
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if N < 0:
        raise ValueError(f"N must be >= 0, got {N}")
    p, q = beta.p, beta.q
    s = [m]
    for n in range(N):
        nxt = _ceil_div(p * s[-1], q)
        if n == 0 and mode == GENERAL and (p * m) % q == 0:
            nxt += 1
        s.append(nxt)
    return TijdemanRun(beta, m, mode, s)


@dataclass
class Certificate:
    N: int
    c: Fraction
    enclosure: tuple[Fraction, Fraction]
    # certified interval for eta*beta^n - s_n, n = 0..N
    frac_bounds: list[tuple[Fraction, Fraction]] = field(repr=False)

    @property
    def max_upper(self) -> Fraction:
        return max(hi for _, hi in self.frac_bounds)


def verify_run(run: TijdemanRun) -> Certificate:
    """Re-certify a run from its integers alone.

    Raises CertificationError naming the first s index whose step breaks
    the increment law, or the depth whose fractional bound escapes [0, c].
    """
    p, q, m = run.beta.p, run.beta.q, run.m
    s = run.s
    c = run.c
    if not s or s[0] != m:
        raise CertificationError(0, f"s_0 must equal m = {m}")
    if c >= 1:
        raise CertificationError(0, f"bound c = {c} is not below 1")
    half_mode = run.mode == HALF
    for n in range(run.N):
        # q * increment, kept integral
        d = s[n + 1] * q - p * s[n]
        if n == 0 and run.seeded:
            ok = d == q
        elif half_mode:
            ok = d == 0 or 2 * d == q
        else:
            ok = 0 <= d < q
        if not ok:
            raise CertificationError(n + 1, f"increment s_{n + 1} - beta*s_{n} = {Fraction(d, q)}")
    # tail after N is bounded by the geometric series sup(d)/(beta-1) <= c
    N = run.N
    bounds = []
    for n in range(N + 1):
        scale = Fraction(q ** (N - n), p ** (N - n))
        lo = s[N] * scale - s[n]
        hi = lo + c * scale
        if lo < 0 or hi > c:
            raise CertificationError(n, f"eta*beta^{n} - s_{n} in [{lo}, {hi}] escapes [0, {c}]")
        bounds.append((lo, hi))
    enc = run.enclosure()
    if not (m <= enc[0] and enc[1] < m + 1):
        raise CertificationError(N, f"enclosure {enc} leaves [{m}, {m + 1})")
    if run.mode == GENERAL and N >= 1 and not enc[0] > m:
        raise CertificationError(N, f"enclosure {enc} touches m = {m}")
    return Certificate(N, c, enc, bounds)
