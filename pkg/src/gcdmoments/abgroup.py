"""Finite abelian groups presented as products of cyclic factors Z/n_j.

The per-prime shape of a group is kept as a sorted valuation profile, from
which element-order censuses come in closed form. A full element
enumeration, deliberately kept independent of the closed forms, serves as
the oracle route.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian_product
from math import lcm, prod
from types import MappingProxyType
from typing import Mapping, Sequence

from .numtheory import EnumerationCapError, factorize, gcd, lcm_all, ord_p

__all__ = [
    "AbelianGroup",
    "DEFAULT_ENUMERATION_CAP",
    "PPrimaryProfile",
    "build_group",
    "count_annihilated",
    "count_order_exact",
    "order_reciprocal_sum",
    "order_reciprocal_sum_bruteforce",
]

DEFAULT_ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class PPrimaryProfile:
    """Valuation data of the p-primary part of a moduli list.

    `valuations` holds ord_p of every modulus in sorted order, preceded by a
    0 sentinel, so its length is always len(moduli) + 1 and stays stable
    even when some moduli are coprime to p. `cyclic_counts` maps each i in
    [1, max_valuation] to the number of moduli with ord_p exactly i; missing
    keys are normalized to 0 on construction.
    """

    p: int
    valuations: tuple[int, ...]
    max_valuation: int
    cyclic_counts: Mapping[int, int]

    def __post_init__(self) -> None:
        vals = tuple(self.valuations)
        object.__setattr__(self, "valuations", vals)
        if len(vals) < 2 or vals[0] != 0 or list(vals) != sorted(vals):
            raise ValueError("valuations must be sorted and start with the 0 sentinel")
        if self.max_valuation != vals[-1] or self.max_valuation < 1:
            raise ValueError("max_valuation must equal the top valuation and be >= 1")
        counts = {i: 0 for i in range(1, self.max_valuation + 1)}
        for i, c in self.cyclic_counts.items():
            if i not in counts or c < 0:
                raise ValueError("cyclic_counts keys must lie in [1, max_valuation]")
            counts[i] = c
        expanded = sorted(i for i, c in counts.items() for _ in range(c))
        if expanded != [v for v in vals[1:] if v > 0]:
            raise ValueError("cyclic_counts must expand to the positive valuations")
        object.__setattr__(self, "cyclic_counts", MappingProxyType(counts))


@dataclass(frozen=True)
class AbelianGroup:
    """Z/n_1 x ... x Z/n_k with its order, exponent, and per-prime profiles."""

    moduli: tuple[int, ...]
    order: int
    exponent: int
    profiles: Mapping[int, PPrimaryProfile]

    def __post_init__(self) -> None:
        if self.order != prod(self.moduli) or self.exponent != lcm_all(self.moduli):
            raise ValueError("order/exponent do not match the moduli")
        object.__setattr__(self, "profiles", MappingProxyType(dict(self.profiles)))


def build_group(moduli: Sequence[int]) -> AbelianGroup:
    """Assemble a group from its moduli list.

    Moduli equal to 1 are legal: they contribute trivial factors but keep
    the valuation profiles at full length. The trivial group is (1,).
    An empty list is an error rather than a silent trivial group.
    """
    mods = tuple(int(n) for n in moduli)
    if not mods:
        raise ValueError("build_group needs at least one modulus; use (1,) for the trivial group")
    if any(n < 1 for n in mods):
        raise ValueError("moduli must be positive integers")
    exponent = lcm_all(mods)
    profiles: dict[int, PPrimaryProfile] = {}
    for p in factorize(exponent).factors:
        vals = sorted(ord_p(n, p) for n in mods)
        counts = Counter(v for v in vals if v > 0)
        profiles[p] = PPrimaryProfile(p, (0, *vals), vals[-1], dict(counts))
    return AbelianGroup(mods, prod(mods), exponent, profiles)


def count_annihilated(profile: PPrimaryProfile, l: int, multiplier: int = 1) -> int:
    """Elements killed by p**l in the multiplier-fold power of the p-part.

    With m_i cyclic factors Z/p^i, each factor contributes min(l, i) to the
    exponent, so the count is p**(w * (sum_{i<l} i m_i + l sum_{i>=l} m_i)).
    l = 0 counts only the identity.
    """
    if multiplier < 1:
        raise ValueError("multiplier must be a positive integer")
    if not 0 <= l <= profile.max_valuation:
        raise ValueError(f"l must lie in [0, {profile.max_valuation}]")
    counts = profile.cyclic_counts
    exponent = sum(i * counts[i] for i in range(1, l)) + l * sum(
        counts[i] for i in range(max(l, 1), profile.max_valuation + 1)
    )
    return profile.p ** (multiplier * exponent)


def count_order_exact(profile: PPrimaryProfile, l: int, multiplier: int = 1) -> int:
    """Elements of order exactly p**l, as a difference of annihilator counts."""
    if not 1 <= l <= profile.max_valuation:
        raise ValueError(f"l must lie in [1, {profile.max_valuation}]")
    return count_annihilated(profile, l, multiplier) - count_annihilated(profile, l - 1, multiplier)


def _count_order_closed_form(profile: PPrimaryProfile, l: int, multiplier: int = 1) -> int:
    # (p**(w sum_{i>=l} m_i) - 1) * p**(w (sum_{i<l} i m_i + (l-1) sum_{i>=l} m_i)),
    # kept separate so tests can pin the difference form against it.
    counts = profile.cyclic_counts
    w = multiplier
    high = sum(counts[i] for i in range(l, profile.max_valuation + 1))
    low = sum(i * counts[i] for i in range(1, l))
    return (profile.p ** (w * high) - 1) * profile.p ** (w * (low + (l - 1) * high))


def order_reciprocal_sum(group: AbelianGroup, multiplier: int = 1) -> Fraction:
    """Sum of 1/order(a) over the multiplier-fold power of the group, exactly.

    Factors over the p-primary parts: each prime contributes
    1 + sum_l count_order_exact(l) / p**l. The trivial group gives 1.
    """
    if multiplier < 1:
        raise ValueError("multiplier must be a positive integer")
    out = Fraction(1)
    for p in sorted(group.profiles):
        profile = group.profiles[p]
        local = Fraction(1)
        for l in range(1, profile.max_valuation + 1):
            local += Fraction(count_order_exact(profile, l, multiplier), p**l)
        out *= local
    return out


def order_reciprocal_sum_bruteforce(
    moduli: Sequence[int], cap: int = DEFAULT_ENUMERATION_CAP
) -> Fraction:
    """Oracle route: enumerate every element and sum 1/order(a) directly.

    The order of (a_1, ..., a_k) is lcm_j of n_j / gcd(a_j, n_j). Orders are
    tallied and the reciprocals summed as exact fractions. Groups larger
    than `cap` raise EnumerationCapError instead of grinding.
    """
    mods = tuple(int(n) for n in moduli)
    if not mods or any(n < 1 for n in mods):
        raise ValueError("moduli must be a nonempty list of positive integers")
    order = prod(mods)
    if order > cap:
        raise EnumerationCapError(f"group order {order} exceeds the enumeration cap {cap}")
    per_axis = [[n // gcd(a, n) for a in range(n)] for n in mods]
    tally: Counter[int] = Counter()
    for coordinate_orders in cartesian_product(*per_axis):
        tally[lcm(*coordinate_orders)] += 1
    return sum((Fraction(c, o) for o, c in sorted(tally.items())), Fraction(0))
