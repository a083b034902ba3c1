"""Slow, simple-minded oracles the tests compare the library against.

Everything here is written the dumbest defensible way, on purpose. The
library computes element orders via lcm of per-coordinate orders and census
counts via closed-form exponents; the oracles below instead scan candidate
multipliers one by one and walk the full direct product, so a shared bug
would have to be coincidental.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd, prod


def element_order(vector: tuple[int, ...], moduli: tuple[int, ...]) -> int:
    """Smallest d >= 1 with d * a_j divisible by n_j for every coordinate."""
    d = 1
    while any((d * a) % n for a, n in zip(vector, moduli)):
        d += 1
    return d


def order_census(moduli: tuple[int, ...]) -> Counter[int]:
    """Multiset of element orders over the whole direct product."""
    census: Counter[int] = Counter()
    for vector in itertools.product(*(range(n) for n in moduli)):
        census[element_order(vector, moduli)] += 1
    return census


def order_reciprocal_via_census(moduli: tuple[int, ...]) -> Fraction:
    census = order_census(moduli)
    return sum((Fraction(count, order) for order, count in census.items()), Fraction(0))


def average_gcd_power(moduli: tuple[int, ...], w: int) -> Fraction:
    """Plain one-at-a-time average of prod_j gcd(l, n_j)**w over one period."""
    period = 1
    for n in moduli:
        period = period * n // gcd(period, n)
    total = Fraction(0)
    for l in range(1, period + 1):
        total += Fraction(prod(gcd(l, n) for n in moduli) ** w)
    return total / period


def naive_hurwitz(s: complex, q: float, terms: int) -> complex:
    """Direct partial sum plus a midpoint integral tail, good to ~1/terms**2."""
    partial = sum((m + q) ** (-s) for m in range(terms))
    return partial + (terms + q - 0.5) ** (1 - s) / (s - 1)
