"""Moments of the gcd-product statistic, by three independent routes.

For moduli (n_1, ..., n_k) put X(l) = prod_j gcd(l, n_j), with l uniform on
[1, lcm(n_1, ..., n_k)]. E[X^w] is computed (a) by direct summation over one
period, (b) as an Euler product with one closed-form local factor per prime
dividing the period, and (c) through the element-order census of
Z/n_1 x ... x Z/n_k raised to the w-th power. Integer w stays in exact
rationals end to end; complex w runs in binary64 with a fixed summation
order and compensated accumulation.
"""

from __future__ import annotations

import cmath
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import repeat
from math import gcd, prod
from typing import Sequence

import numpy as np

from .abgroup import (
    DEFAULT_ENUMERATION_CAP,
    PPrimaryProfile,
    build_group,
    order_reciprocal_sum,
)
from .numtheory import EnumerationCapError, divisors, euler_phi, lcm_all

__all__ = [
    "MomentQuery",
    "MomentReport",
    "brute_moment_complex",
    "brute_moment_exact",
    "census_moment",
    "euler_product_moment",
    "gcd_average_via_totient",
    "gcd_product",
    "local_factor",
    "verify_query",
]

# The numpy tally path is used for periods at least this long, and only when
# prod(moduli) < 2**62 so every unpowered product provably fits in int64.
_NUMPY_MIN_PERIOD = 1 << 13
_NUMPY_CHUNK = 1 << 20
_INT64_SAFE_PRODUCT = 1 << 62


def gcd_product(l: int, moduli: Sequence[int]) -> int:
    """X(l) = prod_j gcd(l, n_j)."""
    out = 1
    for n in moduli:
        out *= gcd(l, n)
    return out


def _validated_moduli(moduli: Sequence[int]) -> tuple[int, ...]:
    mods = tuple(int(n) for n in moduli)
    if not mods or any(n < 1 for n in mods):
        raise ValueError("moduli must be a nonempty list of positive integers")
    return mods


def _validate_exponent(w: object) -> None:
    if isinstance(w, int):
        if w < 0:
            raise ValueError("integer exponents must be >= 0")
    elif not isinstance(w, (float, complex)):
        raise TypeError("w must be an integer >= 0 or a complex number")


def _gcd_product_tally(mods: tuple[int, ...], period: int) -> dict[int, int]:
    # Visits every l in [1, period]; only the bookkeeping is vectorized.
    if period >= _NUMPY_MIN_PERIOD and prod(mods) < _INT64_SAFE_PRODUCT:
        tally: dict[int, int] = {}
        for start in range(1, period + 1, _NUMPY_CHUNK):
            block = np.arange(start, min(start + _NUMPY_CHUNK, period + 1), dtype=np.int64)
            acc = np.gcd(block, mods[0])
            for n in mods[1:]:
                acc *= np.gcd(block, n)
            values, counts = np.unique(acc, return_counts=True)
            for v, c in zip(values.tolist(), counts.tolist()):
                tally[v] = tally.get(v, 0) + c
        return tally
    if len(mods) == 1:
        return Counter(map(gcd, range(1, period + 1), repeat(mods[0])))
    return Counter(gcd_product(l, mods) for l in range(1, period + 1))


def brute_moment_exact(
    moduli: Sequence[int], w: int, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> Fraction:
    """E[X^w] by summing X(l)**w over one full period, exactly.

    Equal X values are tallied first and powered once per distinct value;
    the grouped total is the same exact integer regardless of partitioning.
    Periods above `cap` raise EnumerationCapError.
    """
    mods = _validated_moduli(moduli)
    if not isinstance(w, int):
        raise TypeError("brute_moment_exact needs an integer w")
    if w < 0:
        raise ValueError("brute_moment_exact needs an integer w >= 0")
    period = lcm_all(mods)
    if period > cap:
        raise EnumerationCapError(f"period {period} exceeds the enumeration cap {cap}")
    tally = _gcd_product_tally(mods, period)
    total = sum(count * value**w for value, count in sorted(tally.items()))
    return Fraction(total, period)


def brute_moment_complex(
    moduli: Sequence[int], w: complex, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> complex:
    """E[X^w] for complex w: a strict ascending-l sweep with Kahan compensation.

    X(l)**w means exp(w * log X(l)) with the principal real log; X(l) >= 1 so
    the log is finite and real. Powers are memoized per distinct X value,
    which changes no summation order.
    """
    mods = _validated_moduli(moduli)
    wc = complex(w)
    period = lcm_all(mods)
    if period > cap:
        raise EnumerationCapError(f"period {period} exceeds the enumeration cap {cap}")
    powers: dict[int, complex] = {}
    total = 0j
    lost = 0j
    for l in range(1, period + 1):
        value = gcd_product(l, mods)
        term = powers.get(value)
        if term is None:
            term = cmath.exp(wc * math.log(value))
            powers[value] = term
        y = term - lost
        t = total + y
        lost = (t - total) - y
        total = t
    return total / period


def _exact_prime_power(p: int, exponent: int) -> Fraction:
    return Fraction(p) ** exponent


def local_factor(profile: PPrimaryProfile, w: int | complex) -> Fraction | complex:
    """Euler-product factor at p for E[X^w].

    With sorted valuations 0 = v_0 <= v_1 <= ... <= v_k the factor is

        p**((v_0+...+v_{k-1}) w + v_k (w-1))
          + (1 - 1/p) * sum_{j<k} p**((v_0+...+v_j) w)
                        * sum_{mu=v_j}^{v_{j+1}-1} p**(((k-j) w - 1) mu)

    and empty inner ranges contribute nothing. On the slice [v_j, v_{j+1})
    the statistic's p-part is p**(v_1+...+v_j + (k-j) mu) for l of valuation
    mu, and each valuation fiber has density (1 - 1/p) / p**mu, which is
    where both summands come from. Integer w gives an exact Fraction; float
    or complex w gives a complex number.
    """
    vals = profile.valuations
    p = profile.p
    k = len(vals) - 1
    if isinstance(w, int):
        head = _exact_prime_power(p, sum(vals[:-1]) * w + vals[-1] * (w - 1))
        tail = Fraction(0)
        for j in range(k):
            prefix = sum(vals[: j + 1]) * w
            for mu in range(vals[j], vals[j + 1]):
                tail += _exact_prime_power(p, prefix + ((k - j) * w - 1) * mu)
        return head + Fraction(p - 1, p) * tail
    if isinstance(w, (float, complex)):
        wc = complex(w)
        log_p = math.log(p)
        head = cmath.exp(log_p * (sum(vals[:-1]) * wc + vals[-1] * (wc - 1)))
        tail = 0j
        for j in range(k):
            prefix = sum(vals[: j + 1]) * wc
            for mu in range(vals[j], vals[j + 1]):
                tail += cmath.exp(log_p * (prefix + ((k - j) * wc - 1) * mu))
        return head + (1 - 1 / p) * tail
    raise TypeError("w must be an integer or a complex number")


def euler_product_moment(moduli: Sequence[int], w: int | complex) -> Fraction | complex:
    """E[X^w] as the product of local factors over primes dividing the period.

    A period of 1 gives the empty product. Integer w is exact; float or
    complex w multiplies local factors in ascending prime order for a
    reproducible binary64 result.
    """
    mods = _validated_moduli(moduli)
    _validate_exponent(w)
    group = build_group(mods)
    exact = isinstance(w, int)
    out: Fraction | complex = Fraction(1) if exact else complex(1)
    for p in sorted(group.profiles):
        out = out * local_factor(group.profiles[p], w)
    return out


def census_moment(moduli: Sequence[int], w: int) -> Fraction:
    """E[X^w] via the element-order census of the group's w-th power.

    w = 0 returns 1 by convention (X**0 is identically 1, and a zeroth
    power of the group has no census to take).
    """
    mods = _validated_moduli(moduli)
    if not isinstance(w, int) or w < 0:
        raise ValueError("census_moment needs an integer w >= 0")
    if w == 0:
        return Fraction(1)
    return order_reciprocal_sum(build_group(mods), w)


def gcd_average_via_totient(n: int) -> Fraction:
    """(1/n) * sum_{k=1}^{n} gcd(n, k), assembled as sum_{d | n} phi(d)/d."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("gcd_average_via_totient expects a positive integer")
    return sum((Fraction(euler_phi(d), d) for d in divisors(n)), Fraction(0))


@dataclass(frozen=True)
class MomentQuery:
    """A moment request: the moduli defining X, and the exponent w."""

    moduli: tuple[int, ...]
    w: int | complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "moduli", _validated_moduli(self.moduli))
        _validate_exponent(self.w)


@dataclass(frozen=True)
class MomentReport:
    """Route-by-route values for one query plus the agreement verdict.

    Exact queries leave max_abs_diff as None and demand structural equality;
    complex queries leave census and totient_route as None and compare the
    two float routes within a tolerance.
    """

    query: MomentQuery
    brute: Fraction | complex
    euler_product: Fraction | complex
    census: Fraction | None
    totient_route: Fraction | None
    agree: bool
    max_abs_diff: float | None


def verify_query(
    query: MomentQuery,
    *,
    tolerance: float = 1e-9,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> MomentReport:
    """Run every route applicable to the query and compare the results.

    Integer w: brute, Euler product, and census must be structurally equal
    exact rationals; with a single modulus and w = 1 the totient route joins
    the comparison. Complex w: the direct sweep and the Euler product must
    agree within `tolerance` in absolute value. Disagreement is a reported
    verdict, never an exception.
    """
    mods = query.moduli
    w = query.w
    if isinstance(w, int):
        brute = brute_moment_exact(mods, w, cap=cap)
        euler = euler_product_moment(mods, w)
        census = census_moment(mods, w)
        totient = gcd_average_via_totient(mods[0]) if len(mods) == 1 and w == 1 else None
        values = [euler, census] + ([totient] if totient is not None else [])
        agree = all(v == brute for v in values)
        return MomentReport(query, brute, euler, census, totient, agree, None)
    brute_c = brute_moment_complex(mods, w, cap=cap)
    euler_c = euler_product_moment(mods, complex(w))
    diff = abs(brute_c - euler_c)
    return MomentReport(query, brute_c, euler_c, None, None, diff <= tolerance, diff)
