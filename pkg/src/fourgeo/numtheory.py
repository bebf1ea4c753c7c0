"""Big-integer primitives: prime windows, congruences, four squares.

Everything here works on unbounded Python integers. Randomness only enters
:func:`four_square` (and Miller-Rabin above the deterministic range) through
an explicitly seeded :class:`random.Random`, so results are reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    Exhausted,
    InconsistentCongruences,
    InputError,
    NonCoprimeModuli,
)

FOUR_SQUARE_BRUTE_LIMIT = 10**6

# Bases 2..41 are a deterministic Miller-Rabin certificate below this bound.
_MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_MR_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Each random round errs with probability <= 1/4: 33 rounds give < 2**-64.
MR_RANDOM_ROUNDS = 33
_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


# ---------------------------------------------------------------- primes


def sieve(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def iter_odd_primes(start: int, stop: int, segment: int = 1 << 20) -> Iterator[int]:
    """Odd primes p with start <= p < stop, ascending, by a segmented sieve."""
    base = sieve(math.isqrt(max(stop, 4)) + 1)[1:]  # odd base primes
    lo = max(start, 3) | 1
    while lo < stop:
        hi = min(lo + 2 * segment, stop)
        count = (hi - lo + 1) // 2
        mask = np.ones(count, dtype=bool)
        for p in base.tolist():
            if p * p >= hi:
                break
            first = max(p * p, -(-lo // p) * p)
            if first % 2 == 0:
                first += p
            if first < hi:
                mask[(first - lo) // 2 :: p] = False
        for idx in np.flatnonzero(mask).tolist():
            yield lo + 2 * idx
        lo += 2 * count


@dataclass(frozen=True)
class PrimeWindow:
    """k distinct odd primes with (d + 1) < alpha (d' - 1) for all d != d'."""

    primes: tuple[int, ...]
    alpha: Fraction

    def __post_init__(self):
        if len(set(self.primes)) != len(self.primes) or any(p % 2 == 0 for p in self.primes):
            raise InputError(f"window primes must be distinct odd primes: {self.primes}")
        if list(self.primes) != sorted(self.primes):
            raise InputError("window primes must be ascending")
        if not window_ok(self.primes, self.alpha):
            raise InputError(f"{self.primes} violates the alpha={self.alpha} window bound")

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    @property
    def smallest(self) -> int:
        return self.primes[0]


def window_ok(primes: Sequence[int], alpha: Fraction) -> bool:
    alpha = Fraction(alpha)
    return all(
        (d + 1) * alpha.denominator < alpha.numerator * (e - 1)
        for d in primes
        for e in primes
        if d != e
    )


def primes_in_window(k: int, alpha: Fraction, search_limit: int) -> PrimeWindow:
    """The k consecutive odd primes with the smallest maximum satisfying the
    window bound, all below ``search_limit``.

    The scan starts at 2k/(alpha-1): below that no k primes can fit, since
    k odd primes span at least 2(k-1).
    """
    alpha = Fraction(alpha)
    if k < 1:
        raise InputError("k must be positive")
    if alpha <= 1:
        raise InputError("alpha must exceed 1")
    start = 3 if k == 1 else max(3, math.floor(2 * k / (alpha - 1)))
    recent: list[int] = []
    for p in iter_odd_primes(start, search_limit):
        recent.append(p)
        if len(recent) > k:
            recent.pop(0)
        if len(recent) == k and window_ok(recent, alpha):
            return PrimeWindow(tuple(recent), alpha)
    raise Exhausted(f"no {k} odd primes below {search_limit} fit alpha={alpha}")


# ---------------------------------------------------------------- congruences


@dataclass(frozen=True)
class Congruence:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InputError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds(self, value: int) -> bool:
        return value % self.modulus == self.residue


def crt_solve(congruences: Iterable[Congruence]) -> Congruence:
    """Chinese remainder theorem for pairwise coprime moduli."""
    congruences = list(congruences)
    for i, a in enumerate(congruences):
        for b in congruences[i + 1 :]:
            if math.gcd(a.modulus, b.modulus) != 1:
                raise NonCoprimeModuli(a.modulus, b.modulus)
    return crt_combine(congruences)


def crt_combine(congruences: Iterable[Congruence]) -> Congruence:
    """Solve a system with arbitrary moduli, checking consistency on shared factors."""
    residue, modulus = 0, 1
    for c in congruences:
        g = math.gcd(modulus, c.modulus)
        if (c.residue - residue) % g:
            raise InconsistentCongruences(
                f"x = {residue} mod {modulus} and x = {c.residue} mod {c.modulus} disagree mod {g}"
            )
        step = modulus // g
        # residue + modulus * t = c.residue (mod c.modulus)
        t = ((c.residue - residue) // g) * pow(step, -1, c.modulus // g) % (c.modulus // g)
        residue += modulus * t
        modulus *= c.modulus // g
        residue %= modulus
    return Congruence(residue, modulus)


def _solve_linear(coefficient: int, target: int, modulus: int) -> Congruence:
    if math.gcd(coefficient, modulus) != 1:
        raise InconsistentCongruences(f"{coefficient} is not invertible mod {modulus}")
    return Congruence(target * pow(coefficient, -1, modulus) % modulus, modulus)


def solve_C(window: PrimeWindow, target: int, force_even: bool = False) -> Congruence:
    """All C with (P/d)^8 C = target (mod d-1) for every d in the window.

    With ``force_even`` the moduli become 2(d-1), which makes every quotient
    ((P/d)^8 C - target)/(d-1) even.
    """
    P = window.product
    factor = 2 if force_even else 1
    return crt_combine(
        _solve_linear((P // d) ** 8, target, factor * (d - 1)) for d in window.primes
    )


def solve_Cprime(window: PrimeWindow, target: int, force_even: bool = False) -> Congruence:
    """All C' with (P/d)^16 C' = target (mod d^2-1) for every d (2(d^2-1) with ``force_even``)."""
    P = window.product
    factor = 2 if force_even else 1
    return crt_combine(
        _solve_linear((P // d) ** 16, target, factor * (d * d - 1)) for d in window.primes
    )


# ---------------------------------------------------------------- primality & roots


def is_probable_prime(n: int, rng: random.Random | None = None) -> bool:
    """Miller-Rabin. Exact below ~3.3e24; above it 33 random bases (error < 2**-64)."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_BOUND:
        bases: Iterable[int] = _MR_DETERMINISTIC_BASES
    else:
        rng = rng or random.Random(n)
        bases = (rng.randrange(2, n - 1) for _ in range(MR_RANDOM_ROUNDS))
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(a: int, p: int) -> int:
    ls = pow(a, (p - 1) // 2, p)
    return -1 if ls == p - 1 else ls


def mod_sqrt(a: int, p: int) -> int:
    """A square root of a modulo the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise InputError(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def two_square_prime(p: int) -> tuple[int, int]:
    """(a, b) with a^2 + b^2 = p for p = 2 or a prime p = 1 (mod 4)."""
    if p == 2:
        return 1, 1
    if p % 4 != 1:
        raise InputError(f"{p} is not 1 mod 4")
    a, b = p, mod_sqrt(p - 1, p)
    limit = math.isqrt(p)
    while b > limit:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    if b * b + c * c != p:
        raise InputError(f"{p} is not prime")
    return b, c


# ---------------------------------------------------------------- four squares


def _four_square_brute(n: int) -> tuple[int, int, int, int]:
    """Lexicographically largest descending (a, b, c, d)."""
    for a in range(math.isqrt(n), -1, -1):
        r1 = n - a * a
        if 4 * a * a < n:
            break
        for b in range(min(a, math.isqrt(r1)), -1, -1):
            r2 = r1 - b * b
            if 3 * b * b < r1:
                break
            for c in range(min(b, math.isqrt(r2)), -1, -1):
                r3 = r2 - c * c
                if 2 * c * c < r2:
                    break
                d = math.isqrt(r3)
                if d * d == r3:
                    return a, b, c, d
    raise AssertionError(f"no four-square decomposition found for {n}")  # Lagrange


def four_square(n: int, seed: int = 0, brute_limit: int = FOUR_SQUARE_BRUTE_LIMIT) -> tuple[int, int, int, int]:
    """(a, b, c, d), descending, with a^2 + b^2 + c^2 + d^2 = n.

    Small n are solved by exhaustive search. Larger n: strip factors of 4,
    draw a, b at random with parities making p = n - a^2 - b^2 = 1 (mod 4),
    and split p into two squares once it tests prime.
    """
    if n < 0:
        raise InputError("four_square needs n >= 0")
    if n <= brute_limit:
        return _four_square_brute(n)
    scale = 1
    while n % 4 == 0:
        n //= 4
        scale *= 2
    if n <= brute_limit:
        return tuple(scale * x for x in _four_square_brute(n))  # type: ignore[return-value]
    rng = random.Random(seed)
    # (parity of a, parity of b) forcing a^2 + b^2 = n - 1 (mod 4)
    parities = {1: (0, 0), 2: (1, 0), 3: (1, 1)}[n % 4]
    bound = math.isqrt(n) + 1
    while True:
        a, b = rng.randrange(bound), rng.randrange(bound)
        if a & 1 != parities[0]:
            a ^= 1
        if b & 1 != parities[1]:
            b ^= 1
        p = n - a * a - b * b
        if p < 1:
            continue
        if p == 1:
            c, d = 1, 0
        elif p % 4 == 1 and is_probable_prime(p, rng):
            c, d = two_square_prime(p)
        else:
            continue
        if a * a + b * b + c * c + d * d == n:
            out = sorted((scale * abs(x) for x in (a, b, c, d)), reverse=True)
            return tuple(out)  # type: ignore[return-value]
