"""Exact integer and rational helpers used by every other module.

Everything here is exact: Python ints, `fractions.Fraction`, and explicit
error raising instead of silent truncation.  No floats anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Tuple

__all__ = [
    "gcd",
    "lcm",
    "is_prime",
    "Factorization",
    "factorize",
    "divisors",
    "divisors_upto",
    "p_part",
    "p_prime_part",
    "PrimePower",
    "prime_power",
    "prime_powers_upto",
    "q_product",
    "binomial_exceeds",
    "prod_one_minus_inv_powers",
    "prod_one_minus_neg_inv_powers",
]


def gcd(*values: int) -> int:
    """Greatest common divisor of any number of integers (gcd() == 0)."""
    return math.gcd(*values)


def lcm(*values: int) -> int:
    return math.lcm(*values)


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Deterministic Miller-Rabin witness set: correct for all n < 3.3 * 10^24.
_MR_BASES = _SMALL_PRIMES
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Uses trial division by small primes, then Miller-Rabin with a fixed
    witness set that is provably correct below ~3.3e24.  Larger inputs are
    rejected loudly rather than answered probabilistically.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_LIMIT:
        raise ValueError(f"primality test out of certified range: {n}")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Factorization:
    """A positive integer as a sorted tuple of (prime, exponent) pairs."""

    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.pairs:
            if p <= last:
                raise ValueError(f"prime factors out of order: {self.pairs}")
            if e < 1:
                raise ValueError(f"nonpositive exponent: {self.pairs}")
            last = p

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def multiplicity(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0


def _brent_rho(n: int) -> int:
    """Return a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    # deterministic parameter sweep; every composite yields eventually
    for c in range(1, 50):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ValueError(f"factor search failed for {n}")


def factorize(n: int) -> Factorization:
    """Full prime factorization of a positive integer."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    found: dict[int, int] = {}

    def record(p: int) -> None:
        found[p] = found.get(p, 0) + 1

    rest = n
    for p in _SMALL_PRIMES:
        while rest % p == 0:
            record(p)
            rest //= p
    # trial division up to 10^6 covers every composite this project meets
    f = 41
    while f * f <= rest and f < 1_000_000:
        while rest % f == 0:
            record(f)
            rest //= f
        f += 2
    stack = [rest] if rest > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            record(m)
            continue
        d = _brent_rho(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(tuple(sorted(found.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    out = [1]
    for p, e in factorize(n).pairs:
        powers = [p**i for i in range(1, e + 1)]
        out += [d * pk for d in out for pk in powers]
    return sorted(out)


def divisors_upto(n: int, cap: int) -> list[int]:
    """Divisors of n that are <= cap, without building the full list.

    Uses direct trial of candidates when cap is small relative to n, so n
    may be astronomically large as long as cap stays modest.
    """
    if cap < 1:
        return []
    cap = min(cap, n)
    if cap <= 100_000:
        return [d for d in range(1, cap + 1) if n % d == 0]
    return [d for d in divisors(n) if d <= cap]


def p_part(n: int, p: int) -> int:
    """Largest power of the prime p dividing n."""
    if n == 0:
        raise ValueError("p_part of zero")
    n = abs(n)
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def p_prime_part(n: int, p: int) -> int:
    """The p'-part: n with every factor of p removed."""
    return abs(n) // p_part(n, p)


@dataclass(frozen=True)
class PrimePower:
    """q = p^f with p prime and f >= 1."""

    p: int
    f: int

    def __post_init__(self) -> None:
        if self.f < 1:
            raise ValueError(f"exponent must be positive: {self.f}")
        if not is_prime(self.p):
            raise ValueError(f"base is not prime: {self.p}")

    @property
    def value(self) -> int:
        return self.p**self.f


def prime_power(q: int) -> PrimePower:
    """Decompose q as p^f, rejecting anything that is not a prime power >= 2."""
    if q < 2:
        raise ValueError(f"not a prime power: {q}")
    fac = factorize(q)
    if len(fac.pairs) != 1:
        raise ValueError(f"not a prime power: {q}")
    p, f = fac.pairs[0]
    return PrimePower(p, f)


def prime_powers_upto(limit: int) -> list[int]:
    """All prime powers q with 2 <= q <= limit, ascending."""
    out = []
    for q in range(2, limit + 1):
        try:
            prime_power(q)
        except ValueError:
            continue
        out.append(q)
    return out


def q_product(q: int, terms: Sequence[Tuple[int, int]]) -> int:
    """Product of (q^j - eps) over the given (j, eps) pairs.

    Every factor must come out positive; eps is normally +1 or -1 (the
    unitary order formulas use eps = (-1)^j).  Rejects q < 2.
    """
    if q < 2:
        raise ValueError(f"q must be at least 2: {q}")
    out = 1
    for j, eps in terms:
        term = q**j - eps
        if term <= 0:
            raise ValueError(f"nonpositive factor q^{j} - {eps} for q={q}")
        out *= term
    return out


def binomial_exceeds(n: int, k: int, bound: int) -> bool:
    """Exact test C(n, k) > bound with early exit.

    The partial products C(n-k+i, i) are themselves binomial coefficients,
    hence nondecreasing integers, so we may stop as soon as one of them
    clears the bound.
    """
    if k < 0 or k > n:
        return 0 > bound
    k = min(k, n - k)
    num, den = 1, 1
    for i in range(1, k + 1):
        num *= n - k + i
        den *= i
        if num // den > bound:
            return True
    return num // den > bound


def prod_one_minus_inv_powers(q: int, a: int) -> Fraction:
    """prod_{j=1..a} (1 - q^-j) as an exact Fraction."""
    out = Fraction(1)
    for j in range(1, a + 1):
        out *= 1 - Fraction(1, q**j)
    return out


def prod_one_minus_neg_inv_powers(q: int, a: int) -> Fraction:
    """prod_{j=1..a} (1 - (-q)^-j) as an exact Fraction."""
    out = Fraction(1)
    for j in range(1, a + 1):
        out *= 1 - Fraction(1, (-q) ** j)
    return out
