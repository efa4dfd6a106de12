import json
from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mahler_sieve import CertificationError
from mahler_sieve.tijdeman import GENERAL, HALF, BetaParam, TijdemanRun, construct, verify_run


def replay(p, q, m, N, bump_first=False):
    """Independent exact-rational replay of the ceiling recurrence."""
    beta = Fraction(p, q)
    s = [m]
    for n in range(N):
        nxt = ceil(beta * s[-1])
        if n == 0 and bump_first:
            nxt += 1
        s.append(nxt)
    return s


FIVE_HALVES = BetaParam(5, 2)
THREE = BetaParam(3, 1)


def test_five_halves_example():
    run = construct(FIVE_HALVES, 1, 6, HALF)
    assert run.s == [1, 3, 8, 20, 50, 125, 313] == replay(5, 2, 1, 6)
    assert set(run.increments()) <= {0, Fraction(1, 2)}
    assert run.c == Fraction(1, 3)
    lo, hi = run.enclosure()
    assert lo == Fraction(20032, 15625) == 313 * Fraction(2, 5) ** 6
    assert hi == lo + Fraction(1, 3) * Fraction(64, 15625)
    cert = verify_run(run)
    assert cert.max_upper <= Fraction(1, 3)


def test_three_interior_seed():
    run = construct(THREE, 1, 3)
    assert run.seeded
    assert run.s == [1, 4, 12, 36] == replay(3, 1, 1, 3, bump_first=True)
    assert run.c == Fraction(1, 2)
    lo, hi = verify_run(run).enclosure
    assert 1 < lo and hi < 2
    # eta = 4/3, so {eta} = 1/3 = 1/beta
    assert lo == Fraction(4, 3)


def test_tampered_run_fails_at_index():
    for delta in (1, -1):
        run = construct(FIVE_HALVES, 1, 6, HALF)
        run.s[3] += delta
        with pytest.raises(CertificationError) as exc:
            verify_run(run)
        assert exc.value.index == 3


def test_wrong_start_fails():
    run = construct(FIVE_HALVES, 2, 5, HALF)
    run.s[0] = 3
    with pytest.raises(CertificationError) as exc:
        verify_run(run)
    assert exc.value.index == 0


def test_argument_errors():
    with pytest.raises(ValueError):
        BetaParam(2, 1)
    with pytest.raises(ValueError):
        BetaParam(3, 2)
    with pytest.raises(ValueError):
        BetaParam(10, 4)
    with pytest.raises(ValueError):
        construct(THREE, 1, 5, HALF)
    with pytest.raises(ValueError):
        construct(BetaParam(7, 3), 1, 5, HALF)
    with pytest.raises(ValueError):
        construct(THREE, 0, 5)
    with pytest.raises(ValueError):
        construct(THREE, 1, 5, "nope")


betas = st.tuples(st.integers(1, 12), st.integers(1, 12)).filter(
    lambda t: t[0] > 2 * t[1] and Fraction(*t).denominator == t[1]
)


@given(betas, st.integers(1, 50), st.integers(0, 40))
def test_increment_law_and_certificate(pq, m, N):
    p, q = pq
    run = construct(BetaParam(p, q), m, N)
    for n in range(N):
        d = run.s[n + 1] * q - p * run.s[n]
        if n == 0 and run.seeded:
            assert d == q
        else:
            assert 0 <= d < q
    cert = verify_run(run)
    lo, hi = cert.enclosure
    assert m <= lo and hi < m + 1
    if N >= 1:
        assert lo > m
    for a, b in cert.frac_bounds:
        assert 0 <= a <= b <= run.c < 1


@given(st.integers(2, 15), st.integers(1, 60), st.integers(0, 40))
def test_half_mode_increments(k, m, N):
    p = 2 * k + 1
    run = construct(BetaParam(p, 2), m, N, HALF)
    for n in range(N):
        assert run.s[n + 1] * 2 - p * run.s[n] in (0, 1)
    assert verify_run(run).max_upper <= Fraction(1, 2 * (Fraction(p, 2) - 1))


@given(betas, st.integers(1, 30), st.integers(0, 30))
def test_enclosure_nesting(pq, m, N):
    run = construct(BetaParam(*pq), m, N + 1)
    lo1, hi1 = run.enclosure(N + 1)
    lo0, hi0 = run.enclosure(N)
    assert lo0 <= lo1 and hi1 <= hi0


def test_json_roundtrip():
    run = construct(FIVE_HALVES, 3, 20, HALF)
    d = json.loads(run.to_json())
    assert set(d) == {"p", "q", "m", "mode", "s", "c", "enclosure"}
    assert d["c"] == "1/3"
    again = TijdemanRun.from_dict(d)
    assert again.s == run.s and again.mode == run.mode
    d["c"] = "1/2"
    with pytest.raises(ValueError):
        TijdemanRun.from_dict(d)
