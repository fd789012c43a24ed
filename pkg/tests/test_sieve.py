"""Arithmetic screen tests with independently computed oracles."""

import math

import pytest

from flagsieve.exactmath import divisors, gcd
from flagsieve.grouporders import GroupSpec, SubgroupCase, case_orders
from flagsieve.sieve import (
    REASON_CODES,
    DesignParams,
    Rejection,
    admissible_tuples,
    admissible_tuples_explained,
    best_subdegree_verdict,
    check_basic,
    divisibility_filter,
    failure_codes,
    order_inequality_check,
    reduce_pair,
    subdegree_filter,
    two_point_divisor,
)


def test_reduce_pair():
    assert reduce_pair(78, 42) == (6, 13, 7)
    assert reduce_pair(21, 9) == (3, 7, 3)
    assert reduce_pair(42, 42) == (42, 1, 1)
    assert reduce_pair(7, 3) == (1, 7, 3)
    with pytest.raises(ValueError):
        reduce_pair(0, 3)


def test_design_params_derived():
    d = DesignParams(8, 28, 14, 4, 6)
    assert (d.g, d.rstar, d.lamstar) == (2, 7, 3)
    d = DesignParams(36, 36, 21, 21, 12)
    assert (d.g, d.rstar, d.lamstar) == (3, 7, 4)
    with pytest.raises(ValueError):
        DesignParams(8, 28, 0, 4, 6)


def test_check_basic_all_pass():
    for tup in [(36, 36, 21, 21, 12), (36, 48, 28, 21, 16), (8, 42, 21, 4, 9)]:
        d = DesignParams(*tup)
        assert all(ok for _, ok in check_basic(d)), tup
        assert failure_codes(d) == ()


def test_check_basic_hypothesis_failure():
    # valid 2-(8,4,3) biplane parameters, but (r, lambda) = (7, 3) is coprime
    d = DesignParams(8, 14, 7, 4, 3)
    report = dict(check_basic(d))
    assert report["replication-identity"]
    assert report["flag-count-identity"]
    assert report["fisher"]
    assert not report["hypothesis"]
    assert failure_codes(d) == ("lambda-bound",)


def test_check_basic_identity_and_completeness():
    d = DesignParams(8, 10, 5, 4, 3)
    assert not dict(check_basic(d))["replication-identity"]
    assert "identity-violation" in failure_codes(d)
    # all 4-subsets of an 8-set: complete, hence rejected
    d = DesignParams(8, 70, 35, 4, 15)
    report = dict(check_basic(d))
    assert report["replication-identity"] and report["flag-count-identity"]
    assert not report["nontrivial-incomplete"]
    assert "completeness" in failure_codes(d)


def test_admissible_tuples_eight_points():
    got = admissible_tuples(8, 42)
    assert {d.as_tuple() for d in got} == {
        (8, 28, 14, 4, 6),
        (8, 42, 21, 4, 9),
    }


def test_admissible_tuples_eight_point_rejections():
    _, rejected = admissible_tuples_explained(8, 42)
    # k = 5 needs a factor 5 in g, but g must divide 42/7 = 6
    assert Rejection(7, 4, 5, None, "divisor-conflict") in rejected
    # k = 6: g = 2 leaves b = 112/6 fractional
    assert Rejection(7, 5, 6, 2, "b-nonintegral") in rejected
    # k = 6: g = 3 gives b = 28 = C(8,6), the complete design
    assert Rejection(7, 5, 6, 3, "completeness") in rejected
    # k = 3: every g >= 2 exceeds lambda* = 2 eventually
    assert Rejection(7, 2, 3, 3, "lambda-bound") in rejected
    assert all(r.code in REASON_CODES for r in rejected)


def test_admissible_tuples_144_points():
    got, rejected = admissible_tuples_explained(144, 78)
    assert [d.as_tuple() for d in got] == [(144, 144, 78, 78, 42)]
    # lambda* = 7 with g = 2 gives b = 48 < 144, killed by Fisher
    assert Rejection(13, 7, 78, 2, "fisher") in rejected
    assert Rejection(13, 7, 78, 3, "fisher") in rejected


def test_admissible_tuples_trivial_gcd():
    # gcd(7, 6) = 1 leaves no r* with (r*)^2 > 8
    assert admissible_tuples(8, 6) == ()


def test_admissible_tuples_g_cap_and_rstar_divisor():
    got = admissible_tuples(8, 42, g_max=2)
    assert [d.as_tuple() for d in got] == [(8, 28, 14, 4, 6)]
    assert admissible_tuples(8, 42, rstar_divisor=21) == admissible_tuples(8, 42)
    assert admissible_tuples(8, 42, rstar_divisor=6) == ()


def _brute_force_tuples(v: int, r_divisor: int) -> set:
    """Reference enumeration straight from the definitions."""
    out = set()
    for r in divisors(r_divisor):
        for k in range(3, v - 1):
            if (r * (k - 1)) % (v - 1) != 0:
                continue
            lam = r * (k - 1) // (v - 1)
            if lam < 1 or (v * r) % k != 0:
                continue
            b = v * r // k
            if b < v:
                continue
            g = gcd(r, lam)
            if g < 2 or lam < g * g:
                continue
            if b >= math.comb(v, k):
                continue
            out.add((v, b, r, k, lam))
    return out


def test_admissible_tuples_matches_brute_force():
    for v in range(5, 51):
        for r_divisor in (60, 84, 132, 2 * (v - 1), 5 * (v - 1)):
            got = {d.as_tuple() for d in admissible_tuples(v, r_divisor)}
            assert got == _brute_force_tuples(v, r_divisor), (v, r_divisor)


def test_admissible_tuples_outputs_satisfy_check_basic():
    for v, r_divisor in [(8, 42), (144, 78), (36, 336), (45, 176), (40, 390)]:
        for d in admissible_tuples(v, r_divisor):
            assert all(ok for _, ok in check_basic(d))
            assert d.r % d.g == 0 and r_divisor % d.r == 0
            assert (v - 1) % d.rstar == 0


UNITARY_36 = case_orders(GroupSpec("unitary", 3, 3), SubgroupCase("S", (1,)))


def test_divisibility_filter_unitary_36_candidates_pass():
    # both 36-point candidate tuples clear every divisor clause
    assert UNITARY_36.v == 36 and UNITARY_36.order_h0 == 168
    for tup in [(36, 36, 21, 21, 12), (36, 48, 28, 21, 16)]:
        entries = divisibility_filter(DesignParams(*tup), UNITARY_36, 3)
        assert [name for name, _, _ in entries] == [
            "r-divides-out-h0",
            "rstar-coprime-p",
            "rstar-divides-pprime-part",
            "cube-bound",
        ]
        assert all(ok for _, ok, _ in entries), tup


def test_divisibility_filter_failures():
    bad_r = DesignParams(36, 45, 20, 16, 9)
    entries = dict((n, ok) for n, ok, _ in divisibility_filter(bad_r, UNITARY_36, 3))
    assert not entries["r-divides-out-h0"]
    # r* = 3 shares the characteristic with v = 36
    shared = DesignParams(36, 36, 12, 12, 8)
    entries = dict((n, ok) for n, ok, _ in divisibility_filter(shared, UNITARY_36, 3))
    assert entries["r-divides-out-h0"]
    assert not entries["rstar-coprime-p"]


def test_divisibility_filter_skips_coprime_clauses_when_p_misses_v():
    d = DesignParams(35, 85, 17, 7, 3)
    names = [n for n, _, _ in divisibility_filter(d, UNITARY_36, 3)]
    assert names == ["r-divides-out-h0", "cube-bound"]


def test_divisibility_filter_cube_bound():
    # wreath product case on 15554560 points: lambda = 4 already violates
    # 4 * |X| < |Out|^2 * |H0|^3
    orders = case_orders(
        GroupSpec("linear", 6, 2), SubgroupCase("C2_GLwr", (2, 3))
    )
    d = DesignParams(15554560, 17730398208, 4558, 4, 1)
    entries = dict((n, ok) for n, ok, _ in divisibility_filter(d, orders, 2))
    assert entries["cube-bound"] is False


def test_subdegree_filter():
    assert subdegree_filter(28, 12) == (3, False)
    assert subdegree_filter(8, 7) == (7, True)
    assert subdegree_filter(36, 21) == (7, True)
    # pair-action subdegrees of the 8-point alternating group
    assert best_subdegree_verdict(28, [12, 15]) == (3, False)
    # wreath stabilizer on 157696 hermitian points
    assert best_subdegree_verdict(157696, [540]) == (15, False)
    with pytest.raises(ValueError):
        best_subdegree_verdict(28, [])


def test_subdegree_filter_divisor_monotone():
    # if s' | s then gcd(v-1, s') | gcd(v-1, s): refining never hurts
    for v in (28, 36, 120, 176):
        for s in (12, 54, 540, 1680):
            big, _ = subdegree_filter(v, s)
            for sp in divisors(s):
                small, _ = subdegree_filter(v, sp)
                assert big % small == 0


def test_order_inequality_check():
    wreath = case_orders(
        GroupSpec("linear", 6, 2), SubgroupCase("C2_GLwr", (2, 3))
    )
    # 20158709760 >= 1296 * 81^2 = 8503056: eliminated
    assert order_inequality_check(wreath, 2) is False
    torus = case_orders(GroupSpec("linear", 3, 2), SubgroupCase("C3", (1, 3)))
    assert torus.order_h0 == 21
    # 168 < 21^3 (all orders odd after stripping 2): survives
    assert order_inequality_check(torus, 2) is True


def test_two_point_divisor():
    # subfield pair over GF(2) inside GF(4): N = SL_1(2) = 1
    assert two_point_divisor(12, 168, 1) == 2016
    assert two_point_divisor(2, 5616, 48) == 234
    with pytest.raises(ArithmeticError):
        two_point_divisor(2, 21, 5)
