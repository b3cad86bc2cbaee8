"""Prime and prime-power tables (von Mangoldt function)."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def primes_upto(n: int) -> np.ndarray:
    """Primes <= n by an odd-only sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n // 2 + 1, dtype=bool)  # sieve[i] <-> 2i+1
    sieve[0] = False
    for i in range(1, (int(n**0.5) - 1) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 1
            sieve[p * p // 2 :: p] = False
    odd = 2 * np.flatnonzero(sieve) + 1
    odd = odd[odd <= n]
    return np.concatenate(([2], odd)).astype(np.int64)


@dataclass(frozen=True)
class LambdaTable:
    """Prime powers n <= limit with Lambda(n) = log p and log n, sorted by n.

    ``base`` holds the prime p and ``power`` the exponent k with n = p**k.
    """

    limit: int
    n: np.ndarray
    lam: np.ndarray
    logn: np.ndarray
    base: np.ndarray
    power: np.ndarray

    def __len__(self):
        return len(self.n)

    def psi(self, y=None) -> float:
        """Chebyshev psi(y) = sum of Lambda(n) for n <= y."""
        if y is None:
            return float(np.sum(self.lam))
        return float(np.sum(self.lam[self.n <= y]))

    def upto(self, y):
        """Restriction of the table to n <= y."""
        k = int(np.searchsorted(self.n, y, side="right"))
        return LambdaTable(min(int(y), self.limit), self.n[:k], self.lam[:k],
                           self.logn[:k], self.base[:k], self.power[:k])


@lru_cache(maxsize=16)
def lambda_table(limit) -> LambdaTable:
    """Build (and cache) the von Mangoldt table up to ``limit``.

    Tables are immutable; the arrays are flagged read-only.
    """
    limit = int(np.floor(limit))
    ps = primes_upto(limit)
    ns, bs, ks = [], [], []
    pk = ps.copy()
    k = 1
    while len(pk):
        ns.append(pk)
        bs.append(ps[: len(pk)])
        ks.append(np.full(len(pk), k))
        k += 1
        keep = ps[: len(pk)].astype(object) ** k <= limit  # exact, no overflow
        ps_k = ps[: len(pk)][keep]
        pk = ps_k ** k
    if ns:
        n = np.concatenate(ns)
        base = np.concatenate(bs)
        power = np.concatenate(ks)
    else:
        n = base = power = np.zeros(0, dtype=np.int64)
    order = np.argsort(n, kind="stable")
    n, base, power = n[order], base[order], power[order]
    lam = np.log(base.astype(float))
    logn = np.log(n.astype(float))
    for a in (n, base, power, lam, logn):
        a.setflags(write=False)
    return LambdaTable(limit, n, lam, logn, base, power)


def von_mangoldt_naive(n: int) -> float:
    """Lambda(n) by trial division; slow, used as an independent check."""
    if n < 2:
        return 0.0
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return float(np.log(p)) if m == 1 else 0.0
        p += 1
    return float(np.log(m))
