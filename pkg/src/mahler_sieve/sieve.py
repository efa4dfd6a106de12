"""Permissible residue classes mod 2^n as packed bit vectors.

Bit r in [0, 2^n) stands for the class of positive integers congruent to r
mod 2^n. Positive representatives live in (0, 2^n], so bit 0 is the class
of 2^n itself. Bits are packed LSB-first: bit r is bit (r & 7) of byte r >> 3,
which is also the on-disk MZXN layout.
"""
from __future__ import annotations

import os
import random
import struct
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ResourceError
from .orbit import WORD_DEPTH, action, frac_numerators

DEFAULT_SIEVE_CAP = 24
_CHUNK = 1 << 20

MAGIC = b"MZXN"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sBI")


def _nbytes(exponent: int) -> int:
    return ((1 << exponent) + 7) // 8


def _check_exponent(n: int, cap: int) -> None:
    if n < 1:
        raise ValueError(f"exponent must be >= 1, got {n}")
    if n > cap or n > WORD_DEPTH:
        raise ResourceError(
            f"exponent {n} exceeds the materialization cap {cap}; "
            "use the streaming survival census for larger depths"
        )


@dataclass(frozen=True, eq=False)
class ResidueSet:
    exponent: int
    packed: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.exponent < 1:
            raise ValueError("exponent must be >= 1")
        if self.packed.dtype != np.uint8 or self.packed.shape != (_nbytes(self.exponent),):
            raise ValueError("packed payload has the wrong shape for this exponent")
        if self.exponent < 3 and self.packed[0] >> (1 << self.exponent):
            raise ValueError("bits set beyond the modulus")
        self.packed.setflags(write=False)

    @property
    def modulus(self) -> int:
        return 1 << self.exponent

    @classmethod
    def from_bits(cls, exponent: int, bits) -> "ResidueSet":
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (1 << exponent,):
            raise ValueError(f"expected {1 << exponent} bits, got {bits.shape}")
        return cls(exponent, np.packbits(bits, bitorder="little"))

    @classmethod
    def from_residues(cls, exponent: int, residues) -> "ResidueSet":
        bits = np.zeros(1 << exponent, dtype=bool)
        for r in residues:
            bits[r % (1 << exponent)] = True
        return cls.from_bits(exponent, bits)

    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, bitorder="little", count=self.modulus).astype(bool)

    def residues(self) -> list[int]:
        """Set bit indices in [0, 2^n)."""
        return np.flatnonzero(self.bits()).tolist()

    def representatives(self) -> list[int]:
        """Positive representatives in (0, 2^n], ascending."""
        reps = [r if r else self.modulus for r in self.residues()]
        return sorted(reps)

    def count(self) -> int:
        return int(np.unpackbits(self.packed).sum())

    def __contains__(self, x: int) -> bool:
        return membership(x, self)

    def __and__(self, other: "ResidueSet") -> "ResidueSet":
        if other.exponent != self.exponent:
            raise ValueError("intersect sets at a common exponent (use lift)")
        return ResidueSet(self.exponent, self.packed & other.packed)

    def __or__(self, other: "ResidueSet") -> "ResidueSet":
        if other.exponent != self.exponent:
            raise ValueError("unite sets at a common exponent (use lift)")
        return ResidueSet(self.exponent, self.packed | other.packed)

    def __eq__(self, other):
        if not isinstance(other, ResidueSet):
            return NotImplemented
        return self.exponent == other.exponent and np.array_equal(self.packed, other.packed)

    def __hash__(self):
        return hash((self.exponent, self.packed.tobytes()))

    def describe(self) -> str:
        reps = self.representatives()
        return f"{', '.join(map(str, reps))} (mod {self.modulus})" if reps else f"empty (mod {self.modulus})"


def compute_Xn(n: int, *, cap: int = DEFAULT_SIEVE_CAP) -> ResidueSet:
    """Classes mod 2^n whose members are permissible at depth n."""
    _check_exponent(n, cap)
    size = 1 << n
    half = np.uint64(1 << (n - 1))
    chunks = []
    # _CHUNK is a multiple of 8, so chunk payloads concatenate byte-aligned
    for start in range(0, size, _CHUNK):
        r = np.arange(start, min(size, start + _CHUNK), dtype=np.uint64)
        chunks.append(np.packbits(frac_numerators(r, n) < half, bitorder="little"))
    result = ResidueSet(n, np.concatenate(chunks))
    # the class of 2^n is always permissible: 2^n (3/2)^n = 3^n
    assert result.packed[0] & 1, "class of 2^n missing from X_n"
    return result


def compute_Yn(n: int, *, cap: int = DEFAULT_SIEVE_CAP) -> ResidueSet:
    """X_n without the class of 2^n."""
    xn = compute_Xn(n, cap=cap)
    packed = xn.packed.copy()
    packed[0] &= 0xFE
    return ResidueSet(n, packed)


def power_class(n: int) -> ResidueSet:
    """The single class of 2^n, i.e. the multiples of 2^n."""
    packed = np.zeros(_nbytes(n), dtype=np.uint8)
    packed[0] = 1
    return ResidueSet(n, packed)


def lift(rs: ResidueSet, target_exponent: int) -> ResidueSet:
    """Re-express the same union of classes modulo 2^target_exponent."""
    if target_exponent < rs.exponent:
        raise ValueError(
            f"cannot lift exponent {rs.exponent} down to {target_exponent}"
        )
    reps = 1 << (target_exponent - rs.exponent)
    if rs.exponent >= 3:
        return ResidueSet(target_exponent, np.tile(rs.packed, reps))
    return ResidueSet.from_bits(target_exponent, np.tile(rs.bits(), reps))


def membership(x: int, rs: ResidueSet) -> bool:
    if x < 1:
        raise ValueError(f"x must be positive, got {x}")
    r = x & (rs.modulus - 1)
    return bool((rs.packed[r >> 3] >> (r & 7)) & 1)


def intersect_prefix(n: int, *, cap: int = DEFAULT_SIEVE_CAP) -> ResidueSet:
    """Residues mod 2^n of the integers permissible at every depth 1..n."""
    _check_exponent(n, cap)
    acc = compute_Xn(1, cap=cap)
    for i in range(2, n + 1):
        acc = lift(acc, i) & compute_Xn(i, cap=cap)
    return acc


def density(n: int, *, cap: int = DEFAULT_SIEVE_CAP) -> Fraction:
    xn = compute_Xn(n, cap=cap)
    return Fraction(xn.count(), xn.modulus)


@dataclass
class InvarianceReport:
    n: int
    representatives_checked: int
    pairs_checked: int
    counterexamples: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def class_invariance_check(n, sample_count, k_max, *, seed=0, representatives=None):
    """Check that x0 + k*2^n acts like x0 at depth n for k = 0..k_max.

    Representatives are drawn from (0, 2^n] unless given explicitly.
    """
    modulus = 1 << n
    if representatives is None:
        rng = random.Random(seed)
        if sample_count >= modulus:
            representatives = range(1, modulus + 1)
        else:
            representatives = rng.sample(range(1, modulus + 1), sample_count)
    reps = list(representatives)
    bad = []
    pairs = 0
    for x0 in reps:
        base = action(x0, n)
        for k in range(k_max + 1):
            pairs += 1
            if action(x0 + k * modulus, n) is not base:
                bad.append((x0, k))
    return InvarianceReport(n, len(reps), pairs, bad)


def write_cache(path, rs: ResidueSet) -> Path:
    """Write an MZXN file atomically (temp file in the same directory, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, rs.exponent))
            fh.write(rs.packed.tobytes())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_cache(path) -> ResidueSet:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated MZXN header")
    magic, version, exponent = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported MZXN version {version}")
    if exponent < 1 or exponent > WORD_DEPTH:
        raise ValueError(f"{path}: implausible exponent {exponent}")
    payload = data[_HEADER.size:]
    if len(payload) != _nbytes(exponent):
        raise ValueError(
            f"{path}: payload is {len(payload)} bytes, expected {_nbytes(exponent)}"
        )
    return ResidueSet(exponent, np.frombuffer(payload, dtype=np.uint8).copy())


def cache_file(cache_dir, n: int) -> Path:
    return Path(cache_dir) / f"X{n}.mzxn"
