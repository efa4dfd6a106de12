"""Exact fractional parts of x*(3/2)^n for positive integers x.

For integer x the fractional part has denominator 2^n:

    {x (3/2)^n} = (x * 3^n mod 2^n) / 2^n

so every quantity here is an integer computation. Nothing is ever
rounded through a float.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ResourceError

DEFAULT_DEPTH_CAP = 4096

# Largest depth handled by the 64-bit word path. Products wrap mod 2^64,
# which is harmless because 2^n divides 2^64.
WORD_DEPTH = 62
_WORD_MASK = (1 << 64) - 1

ONE_THIRD = Fraction(1, 3)


class ActionKind(enum.Enum):
    PERMISSIBLE = "permissible"
    IMPERMISSIBLE = "impermissible"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FracPart:
    """The value numerator / 2**depth."""

    numerator: int
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if not 0 <= self.numerator < (1 << self.depth):
            raise ValueError(f"numerator {self.numerator} outside [0, 2^{self.depth})")

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.depth)

    @property
    def kind(self) -> ActionKind:
        # strict: exactly 1/2 is impermissible
        if 2 * self.numerator < (1 << self.depth):
            return ActionKind.PERMISSIBLE
        return ActionKind.IMPERMISSIBLE

    @property
    def permissible(self) -> bool:
        return self.kind is ActionKind.PERMISSIBLE

    def __str__(self):
        return str(self.value)


def _check_query(x: int, n: int, cap: int) -> None:
    if x < 1:
        raise ValueError(f"x must be a positive integer, got {x}")
    if n < 1:
        raise ValueError(f"depth n must be >= 1, got {n}")
    if n > cap:
        raise ResourceError(f"depth {n} exceeds the orbit depth cap {cap}")


def pow3_mod_pow2(n: int, k: int) -> int:
    """Return 3**n mod 2**k without forming 3**n."""
    if n < 0 or k < 1:
        raise ValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    if k <= 64:
        mask = (1 << k) - 1
        acc, base = 1, 3
        while n:
            if n & 1:
                acc = (acc * base) & _WORD_MASK
            base = (base * base) & _WORD_MASK
            n >>= 1
        return acc & mask
    return pow(3, n, 1 << k)


def frac_numerator_word(x: int, n: int) -> int:
    """Word-sized route: operands reduced mod 2^64, product wrapped mod 2^64."""
    if n > WORD_DEPTH:
        raise ValueError(f"word path only covers n <= {WORD_DEPTH}")
    prod = ((x & _WORD_MASK) * pow3_mod_pow2(n, 64)) & _WORD_MASK
    return prod & ((1 << n) - 1)


def frac_numerator_bigint(x: int, n: int) -> int:
    """Arbitrary-precision route."""
    mask = (1 << n) - 1
    return ((x & mask) * pow(3, n, 1 << n)) & mask


def frac_part(x: int, n: int, *, cap: int = DEFAULT_DEPTH_CAP) -> FracPart:
    _check_query(x, n, cap)
    if n <= WORD_DEPTH:
        num = frac_numerator_word(x, n)
    else:
        num = frac_numerator_bigint(x, n)
    return FracPart(num, n)


def action(x: int, n: int, *, cap: int = DEFAULT_DEPTH_CAP) -> ActionKind:
    return frac_part(x, n, cap=cap).kind


def frac_numerators(xs, n: int) -> np.ndarray:
    """Vectorised numerators of {x (3/2)^n} for an array of x, n <= 62.

    Returns a uint64 array. Inputs are reduced mod 2^64 first.
    """
    if not 1 <= n <= WORD_DEPTH:
        raise ValueError(f"vectorised path needs 1 <= n <= {WORD_DEPTH}, got {n}")
    xs = np.asarray(xs).astype(np.uint64, copy=False)
    p3 = np.uint64(pow3_mod_pow2(n, 64))
    mask = np.uint64((1 << n) - 1)
    with np.errstate(over="ignore"):
        return (xs * p3) & mask


def orbit_prefix(x: int, horizon: int, *, cap: int = DEFAULT_DEPTH_CAP) -> list[FracPart]:
    """Fractional parts for n = 1..horizon.

    The state x*3^n is kept mod 2^horizon, so each step is one multiply by 3
    and one mask; the depth-n numerator is the low n bits of the state.
    """
    _check_query(x, horizon, cap)
    top = (1 << horizon) - 1
    state = x & top
    out = []
    for n in range(1, horizon + 1):
        state = (state * 3) & top
        out.append(FracPart(state & ((1 << n) - 1), n))
    return out


@dataclass(frozen=True)
class OrbitDiameter:
    x: int
    horizon: int
    inf: Fraction
    sup: Fraction
    first_n_reaching_one_third: int | None

    @property
    def diameter(self) -> Fraction:
        return self.sup - self.inf

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "horizon": self.horizon,
            "inf": str(self.inf),
            "sup": str(self.sup),
            "diameter": str(self.diameter),
            "first_n_reaching_one_third": self.first_n_reaching_one_third,
        }


def orbit_diameter(x: int, horizon: int, *, cap: int = DEFAULT_DEPTH_CAP) -> OrbitDiameter:
    # Compare on the common denominator 2^horizon to stay in integers.
    prefix = orbit_prefix(x, horizon, cap=cap)
    scale = 1 << horizon
    lo = hi = None
    first = None
    for fp in prefix:
        v = fp.numerator << (horizon - fp.depth)
        lo = v if lo is None else min(lo, v)
        hi = v if hi is None else max(hi, v)
        if first is None and 3 * (hi - lo) >= scale:
            first = fp.depth
    return OrbitDiameter(x, horizon, Fraction(lo, scale), Fraction(hi, scale), first)


def first_reach_one_third(x: int, horizon: int) -> int | None:
    """Least n <= horizon at which the running diameter of the orbit is >= 1/3.

    Early-exit variant of ``orbit_diameter`` for sweeps over many x.
    """
    top = (1 << horizon) - 1
    state = x & top
    scale = 1 << horizon
    lo = hi = None
    for n in range(1, horizon + 1):
        state = (state * 3) & top
        v = (state & ((1 << n) - 1)) << (horizon - n)
        if lo is None:
            lo = hi = v
        elif v < lo:
            lo = v
        elif v > hi:
            hi = v
        if 3 * (hi - lo) >= scale:
            return n
    return None
