"""Exact number-theoretic primitives shared by every other module.

Everything here is arbitrary-precision integer or `fractions.Fraction`
arithmetic; nothing rounds. Factorization is trial division backed by a
prime sieve, with a deterministic Miller-Rabin certificate for any cofactor
that survives the sieve, and the factoring backend can be swapped out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm, prod
from types import MappingProxyType
from typing import Callable, Mapping, Sequence

__all__ = [
    "BigRational",
    "EnumerationCapError",
    "FactoredNat",
    "TRIAL_DIVISION_BOUND",
    "divisors",
    "euler_phi",
    "factorize",
    "gcd",
    "gcd_divisor_sum",
    "is_prime",
    "lcm_all",
    "ord_p",
    "valuation_fiber_count",
]

# Exact rationals. Fraction already normalizes to lowest terms with a
# positive denominator and compares structurally, which is the whole
# contract needed here.
BigRational = Fraction

TRIAL_DIVISION_BOUND = 10**6

# These witnesses make Miller-Rabin a primality proof for n < 3.3e24.
_MILLER_RABIN_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MILLER_RABIN_PROVEN_BELOW = 3_317_044_064_679_887_385_961_981


class EnumerationCapError(RuntimeError):
    """A brute-force enumeration would exceed its configured element cap."""


@lru_cache(maxsize=1)
def _prime_table() -> tuple[bytes, tuple[int, ...]]:
    """Sieve of Eratosthenes up to TRIAL_DIVISION_BOUND, built once per process."""
    limit = TRIAL_DIVISION_BOUND
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    primes = tuple(i for i, f in enumerate(flags) if f)
    return bytes(flags), primes


def _miller_rabin(n: int) -> bool:
    # Callers guarantee n is odd, n > TRIAL_DIVISION_BOUND.
    if n >= _MILLER_RABIN_PROVEN_BELOW:
        raise ValueError(f"cannot certify primality of {n}: beyond the proven witness range")
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MILLER_RABIN_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Deterministic primality test: sieve lookup, then certified Miller-Rabin."""
    if n < 2:
        return False
    flags, _ = _prime_table()
    if n <= TRIAL_DIVISION_BOUND:
        return bool(flags[n])
    if n % 2 == 0:
        return False
    return _miller_rabin(n)


@dataclass(frozen=True)
class FactoredNat:
    """A positive integer together with its verified prime factorization.

    `factors` maps primes to exponents >= 1 in increasing prime order.
    Construction checks the ordering, the primality of every listed prime,
    and that the factors multiply back to `value`.
    """

    value: int
    factors: Mapping[int, int]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise ValueError("FactoredNat.value must be >= 1")
        items = list(self.factors.items())
        if items != sorted(items):
            raise ValueError("factors must be listed in increasing prime order")
        for p, e in items:
            if e < 1:
                raise ValueError(f"exponent of {p} must be >= 1")
            if not is_prime(p):
                raise ValueError(f"listed factor {p} is not prime")
        if prod(p**e for p, e in items) != self.value:
            raise ValueError("factors do not multiply back to value")
        object.__setattr__(self, "factors", MappingProxyType(dict(items)))


def factorize(n: int, backend: Callable[[int], Mapping[int, int]] | None = None) -> FactoredNat:
    """Factor n >= 1 into its ordered prime-power decomposition.

    The default backend is sieve trial division up to 1e6 plus a Miller-Rabin
    certificate for the remaining cofactor; it raises if the cofactor is a
    composite with no factor below the sieve bound, rather than guess. A
    custom `backend(n) -> {prime: exponent}` replaces it wholesale; its
    output still passes FactoredNat validation.
    """
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    if backend is not None:
        return FactoredNat(n, dict(backend(n)))
    return _factorize_default(n)


@lru_cache(maxsize=1 << 16)
def _factorize_default(n: int) -> FactoredNat:
    out: dict[int, int] = {}
    rest = n
    for p in _prime_table()[1]:
        if p * p > rest:
            break
        if rest % p == 0:
            e = 1
            rest //= p
            while rest % p == 0:
                rest //= p
                e += 1
            out[p] = e
    if rest > 1:
        # Past the loop, rest has no prime factor <= min(sqrt(rest), sieve bound),
        # so it is prime unless it is larger than the squared sieve bound.
        if rest > TRIAL_DIVISION_BOUND**2 and not _miller_rabin(rest):
            raise ValueError(
                f"cannot factor {n}: cofactor {rest} is composite with no factor <= {TRIAL_DIVISION_BOUND}"
            )
        out[rest] = 1
    return FactoredNat(n, out)


def divisors(n: FactoredNat | int) -> list[int]:
    """All positive divisors, in increasing order."""
    fn = n if isinstance(n, FactoredNat) else factorize(n)
    out = [1]
    for p, e in fn.factors.items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


@lru_cache(maxsize=1 << 16)
def euler_phi(n: int) -> int:
    """Euler totient, computed multiplicatively from the factorization."""
    out = 1
    for p, e in factorize(n).factors.items():
        out *= (p - 1) * p ** (e - 1)
    return out


def ord_p(n: int, p: int) -> int:
    """The p-adic valuation of n: the largest e with p**e dividing n."""
    if n < 1:
        raise ValueError("ord_p expects n >= 1")
    if not is_prime(p):
        raise ValueError(f"ord_p needs a prime base, got {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def valuation_fiber_count(p: int, exponent: int, valuation: int) -> int:
    """How many l in [1, p**exponent] have p-adic valuation exactly `valuation`.

    The top valuation is hit only by l = p**exponent itself; below it the
    count is p**(exponent - valuation) - p**(exponent - valuation - 1).
    """
    if not is_prime(p):
        raise ValueError(f"valuation_fiber_count needs a prime, got {p}")
    if exponent < 0 or valuation < 0:
        raise ValueError("exponent and valuation must be nonnegative")
    if valuation > exponent:
        raise ValueError(f"valuation {valuation} exceeds the range exponent {exponent}")
    if valuation == exponent:
        return 1
    return p ** (exponent - valuation) - p ** (exponent - valuation - 1)


@lru_cache(maxsize=1 << 16)
def _totient_sum_over_divisors(g: int) -> int:
    return sum(euler_phi(d) for d in divisors(g))


def gcd_divisor_sum(n: int, m: int) -> int:
    """gcd(n, m) assembled as the sum of euler_phi(d) over common divisors d.

    The sum is computed honestly (no shortcut to gcd); agreement with gcd is
    what the callers verify.
    """
    if n < 1 or m < 1:
        raise ValueError("gcd_divisor_sum expects positive integers")
    return _totient_sum_over_divisors(gcd(n, m))


def lcm_all(values: Sequence[int]) -> int:
    """Least common multiple of a nonempty sequence of positive integers."""
    vals = list(values)
    if not vals:
        raise ValueError("lcm_all needs at least one value")
    if any(v < 1 for v in vals):
        raise ValueError("lcm_all expects positive integers")
    return lcm(*vals)
