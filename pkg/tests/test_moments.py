import pytest
from fractions import Fraction
from math import gcd, prod

from hypothesis import given
from hypothesis import strategies as st

from gcdmoments.abgroup import build_group
from gcdmoments.moments import (
    MomentQuery,
    brute_moment_complex,
    brute_moment_exact,
    census_moment,
    euler_product_moment,
    gcd_average_via_totient,
    gcd_product,
    local_factor,
    verify_query,
)
from gcdmoments.numtheory import EnumerationCapError

from support import average_gcd_power

# binary64 roundings of 50-digit reference sums over one period
COMPLEX_PIN_12 = 1.5756010722184977 + 0.48858474677433067j
COMPLEX_PIN_6_4 = 1.8546017201832874 + 0.885005532535144j
COMPLEX_W = 0.5 + 0.25j

small_moduli = (
    st.lists(st.integers(min_value=1, max_value=24), min_size=1, max_size=3)
    .filter(lambda mods: prod(mods) <= 2000)
    .map(tuple)
)


def test_gcd_product_values():
    assert gcd_product(1, (6, 4)) == 1
    assert gcd_product(12, (6, 4)) == 24
    assert gcd_product(8, (6, 4)) == 8
    assert gcd_product(7, (5,)) == 1


@given(small_moduli, st.integers(min_value=0, max_value=3))
def test_brute_matches_naive_average(mods, w):
    assert brute_moment_exact(mods, w) == average_gcd_power(mods, w)


def test_known_moment_values():
    cases = {
        ((12,), 1): Fraction(10, 3),
        ((6, 4), 1): Fraction(35, 6),
        ((12,), 2): Fraction(121, 6),
        ((6, 4), 2): Fraction(451, 6),
        ((8,), 1): Fraction(5, 2),
        ((8,), 3): Fraction(149, 2),
        ((9, 27), 2): Fraction(8075, 3),
        ((5,), 1): Fraction(9, 5),
        ((4, 6, 10), 3): Fraction(574867, 2),
    }
    for (mods, w), expected in cases.items():
        assert brute_moment_exact(mods, w) == expected, (mods, w)
        assert euler_product_moment(mods, w) == expected, (mods, w)
        assert census_moment(mods, w) == expected, (mods, w)


def test_vectorized_tally_matches_plain_sum():
    # period 9240 is above the vectorization threshold
    expected = Fraction(sum(gcd(l, 9240) ** 2 for l in range(1, 9241)), 9240)
    assert brute_moment_exact((9240,), 2) == expected


def test_wide_moduli_product_stays_exact():
    # product 2**64 forces the unvectorized path even though the period is small
    mods = (2**16,) * 4
    assert brute_moment_exact(mods, 1) == euler_product_moment(mods, 1)


def test_zeroth_moment_is_one():
    for mods in [(1,), (12,), (6, 4), (9, 27)]:
        assert brute_moment_exact(mods, 0) == 1
        assert euler_product_moment(mods, 0) == 1
        assert census_moment(mods, 0) == 1


def test_local_factors_of_6_4():
    group = build_group((6, 4))
    assert local_factor(group.profiles[2], 1) == Fraction(7, 2)
    assert local_factor(group.profiles[3], 1) == Fraction(5, 3)


@given(
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3),
    st.integers(min_value=1, max_value=3),
)
def test_local_factor_is_the_prime_power_moment(p, valuations, w):
    # the factor at p must equal the full moment of a group supported only at p
    mods = tuple(p**v for v in valuations)
    group = build_group(mods)
    expected = brute_moment_exact(mods, w)
    if p in group.profiles:
        assert local_factor(group.profiles[p], w) == expected
    else:
        assert expected == 1


@given(
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=3),
)
def test_local_factor_complex_matches_brute(p, valuations):
    mods = tuple(p**v for v in valuations)
    group = build_group(mods)
    if p not in group.profiles:
        return
    factor = local_factor(group.profiles[p], COMPLEX_W)
    assert abs(factor - brute_moment_complex(mods, COMPLEX_W)) <= 1e-12


@given(small_moduli, st.integers(min_value=1, max_value=3))
def test_three_routes_agree(mods, w):
    value = brute_moment_exact(mods, w)
    assert isinstance(value, Fraction)
    assert euler_product_moment(mods, w) == value
    assert census_moment(mods, w) == value


def test_complex_pins():
    brute12 = brute_moment_complex((12,), COMPLEX_W)
    brute64 = brute_moment_complex((6, 4), COMPLEX_W)
    assert abs(brute12 - COMPLEX_PIN_12) <= 1e-12
    assert abs(brute64 - COMPLEX_PIN_6_4) <= 1e-12
    assert abs(brute12 - euler_product_moment((12,), COMPLEX_W)) <= 1e-9
    assert abs(brute64 - euler_product_moment((6, 4), COMPLEX_W)) <= 1e-9


@given(small_moduli, st.integers(min_value=1, max_value=3))
def test_complex_route_degenerates_to_exact(mods, w):
    exact = float(brute_moment_exact(mods, w))
    viewed = brute_moment_complex(mods, complex(w))
    assert abs(viewed - exact) <= 1e-9 * max(1.0, exact)


def test_totient_route_matches_brute():
    assert gcd_average_via_totient(12) == Fraction(10, 3)
    for n in range(1, 301):
        assert gcd_average_via_totient(n) == brute_moment_exact((n,), 1)


def test_verify_query_exact():
    report = verify_query(MomentQuery((12,), 1))
    assert report.agree and report.brute == Fraction(10, 3)
    assert report.census == Fraction(10, 3)
    assert report.totient_route == Fraction(10, 3)
    assert report.max_abs_diff is None

    wide = verify_query(MomentQuery((6, 4), 2))
    assert wide.agree and wide.totient_route is None


def test_verify_query_complex():
    report = verify_query(MomentQuery((6, 4), COMPLEX_W))
    assert report.agree
    assert report.census is None
    assert report.max_abs_diff is not None and report.max_abs_diff <= 1e-9


def test_domain_errors():
    with pytest.raises(ValueError):
        MomentQuery((0, 4), 1)
    with pytest.raises(ValueError):
        MomentQuery((), 1)
    with pytest.raises(ValueError):
        brute_moment_exact((12,), -1)
    with pytest.raises(TypeError):
        brute_moment_exact((12,), "1")
    with pytest.raises(EnumerationCapError):
        brute_moment_exact((9999889, 9999901), 1)
