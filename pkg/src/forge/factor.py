"""Integer factorization under a budget: trial division, then Brent's variant of Pollard rho."""

from __future__ import annotations

import math
import random
import threading
from collections import Counter

from forge.abelian import BudgetError, is_prime

TRIAL_LIMIT = 10**6
RHO_ITERATIONS = 10**7


class FactorBudgetExceeded(BudgetError):
    pass


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


_PRIMES: list[int] = []
_PRIMES_LOCK = threading.Lock()


def _trial_primes() -> list[int]:
    global _PRIMES
    if not _PRIMES:
        with _PRIMES_LOCK:
            if not _PRIMES:
                _PRIMES = _small_primes(TRIAL_LIMIT)
    return _PRIMES


def brent_rho(n: int, seed: int = 1, max_iterations: int = RHO_ITERATIONS) -> int:
    """A nontrivial factor of the odd composite n, or raise FactorBudgetExceeded."""
    rng = random.Random(seed)
    spent = 0
    while spent < max_iterations:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < max_iterations:
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
            spent += 2 * r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorBudgetExceeded(f"Pollard rho gave up on {n} after {spent} iterations")


def factorize(n: int, *, rho_iterations: int = RHO_ITERATIONS) -> dict[int, int]:
    """Prime factorization of |n| as {p: e}. Raises FactorBudgetExceeded."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: Counter = Counter()
    for p in _trial_primes():
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            out[p] += 1
    stack = [n] if n > 1 else []
    while stack:
        k = stack.pop()
        if k < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(k):
            # after full trial division to TRIAL_LIMIT anything below its square is prime
            out[k] += 1
            continue
        r = math.isqrt(k)
        if r * r == k:
            stack += [r, r]
            continue
        d = brent_rho(k, max_iterations=rho_iterations)
        stack += [d, k // d]
    return dict(sorted(out.items()))


def squarefree_decompose(N: int, **kw) -> tuple[int, int]:
    """(d0, s) with N = s^2 * d0, d0 squarefree with the sign of N, s > 0."""
    if N == 0:
        raise ValueError("N must be nonzero")
    d0, s = (1 if N > 0 else -1), 1
    for p, e in factorize(N, **kw).items():
        s *= p ** (e // 2)
        if e % 2:
            d0 *= p
    return d0, s
