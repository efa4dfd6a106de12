from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler_sieve import ResourceError
from mahler_sieve.orbit import action, frac_part
from mahler_sieve.sieve import (
    ResidueSet,
    class_invariance_check,
    compute_Xn,
    compute_Yn,
    density,
    intersect_prefix,
    lift,
    membership,
    power_class,
    read_cache,
    write_cache,
)


def brute_xn(n):
    """Residues r in [0, 2^n) with 3^n r mod 2^n < 2^(n-1), by plain integers."""
    return {r for r in range(2**n) if (r * 3**n) % 2**n < 2 ** (n - 1)}


@pytest.mark.parametrize(
    "n, reps",
    [(1, [2]), (2, [1, 4]), (3, [1, 3, 6, 8])],
)
def test_compute_Xn_examples(n, reps):
    assert compute_Xn(n).representatives() == reps


@pytest.mark.parametrize("n, reps", [(1, []), (2, [1]), (3, [1, 3, 6])])
def test_compute_Yn_examples(n, reps):
    assert compute_Yn(n).representatives() == reps


@pytest.mark.parametrize("n", range(1, 13))
def test_Xn_matches_brute_force(n):
    assert set(compute_Xn(n).residues()) == brute_xn(n)


@pytest.mark.parametrize("n", [1, 2, 3, 8, 21])
def test_decomposition(n):
    xn, yn, top = compute_Xn(n), compute_Yn(n), power_class(n)
    assert (yn | top) == xn
    assert (yn & top).count() == 0


def test_characterization_against_action():
    xs = np.arange(1, 2**16 + 1, dtype=np.int64)
    for n in range(1, 17):
        xn = compute_Xn(n)
        # x * 3^n < 2^42 here, so int64 arithmetic is exact
        expected = (xs * 3**n) % 2**n < 2 ** (n - 1)
        assert np.array_equal(xn.bits()[xs % 2**n], expected)
        for x in range(1, 2**16 + 1, 251):
            assert membership(x, xn) == (action(x, n).name == "PERMISSIBLE")


@pytest.mark.parametrize("n", [1, 3, 20])
def test_intersect_prefix(n):
    assert intersect_prefix(n) == power_class(n)


def test_intersect_prefix_brute_force_small():
    for n in range(1, 11):
        survivors = {
            r for r in range(2**n)
            if all(((r or 2**n) * 3**i) % 2**i < 2 ** (i - 1) for i in range(1, n + 1))
        }
        assert survivors == {0}
        assert set(intersect_prefix(n).residues()) == survivors


def test_nesting():
    for n in range(1, 15):
        assert lift(intersect_prefix(n), n + 1) & intersect_prefix(n + 1) == intersect_prefix(n + 1)


def test_half_step_obstruction():
    for k in range(1, 61):
        assert frac_part(2**k, k + 1).value == Fraction(1, 2)
        if k + 1 <= 20:
            assert not membership(2**k, compute_Xn(k + 1))


def test_lift_examples():
    assert lift(compute_Xn(1), 2).residues() == [0, 2]
    assert lift(power_class(2), 3).residues() == [0, 4]
    x5 = compute_Xn(5)
    assert lift(x5, 5) == x5
    with pytest.raises(ValueError):
        lift(x5, 4)


@given(st.integers(1, 10), st.integers(0, 5), st.data())
@settings(max_examples=60)
def test_lift_preserves_denoted_set(e, extra, data):
    residues = data.draw(st.sets(st.integers(0, 2**e - 1)))
    rs = ResidueSet.from_residues(e, residues)
    big = lift(rs, e + extra)
    for x in range(1, 2 ** (e + extra) * 2 + 1):
        assert membership(x, big) == membership(x, rs)


def test_membership_examples():
    assert membership(6, compute_Xn(1))
    assert not membership(5, compute_Xn(3))
    assert membership(2**20, intersect_prefix(20))
    with pytest.raises(ValueError):
        membership(0, compute_Xn(1))


def test_class_invariance_examples():
    assert class_invariance_check(1, 10, 50).ok
    rep = class_invariance_check(3, 0, 5, representatives=[6])
    assert rep.ok and action(6, 3) is action(46, 3)
    assert action(46, 3).name == "PERMISSIBLE"
    assert action(5 + 7 * 8, 3).name == action(5, 3).name == "IMPERMISSIBLE"
    rep = class_invariance_check(12, 200, 20, seed=1)
    assert rep.ok and rep.pairs_checked == 200 * 21


@pytest.mark.parametrize("n", [1, 2, 3])
def test_density(n):
    assert density(n) == Fraction(1, 2)


def test_lemma_bit0_up_to_cap():
    for n in range(1, 25):
        assert compute_Xn(n).packed[0] & 1


def test_cap():
    with pytest.raises(ResourceError, match="streaming"):
        compute_Xn(25)
    with pytest.raises(ResourceError):
        intersect_prefix(6, cap=5)
    assert compute_Xn(25, cap=25).packed[0] & 1


def test_empty_set_operations():
    y1 = compute_Yn(1)
    assert y1.count() == 0 and y1.representatives() == []
    assert (y1 & compute_Xn(1)).count() == 0
    assert (y1 | compute_Xn(1)) == compute_Xn(1)
    assert lift(y1, 4).count() == 0


@pytest.mark.parametrize("n", [1, 2, 3, 10, 20])
def test_cache_roundtrip(tmp_path, n):
    rs = compute_Xn(n)
    path = write_cache(tmp_path / f"X{n}.mzxn", rs)
    raw = path.read_bytes()
    assert raw[:4] == b"MZXN" and raw[4] == 1
    assert int.from_bytes(raw[5:9], "little") == n
    assert len(raw) == 9 + (2**n + 7) // 8
    assert read_cache(path) == rs
    assert not list(tmp_path.glob("*.tmp"))


def test_cache_layout_n3(tmp_path):
    path = write_cache(tmp_path / "x3", compute_Xn(3))
    assert path.read_bytes()[9:] == bytes([0b01001011])


@pytest.mark.parametrize(
    "blob",
    [b"", b"MZXQ\x01\x03\x00\x00\x00K", b"MZXN\x02\x03\x00\x00\x00K", b"MZXN\x01\x03\x00\x00\x00", b"MZXN\x01\x03\x00\x00\x00KK"],
)
def test_cache_rejects_bad_files(tmp_path, blob):
    p = tmp_path / "bad"
    p.write_bytes(blob)
    with pytest.raises(ValueError):
        read_cache(p)
