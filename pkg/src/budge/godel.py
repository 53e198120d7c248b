"""Prime utilities and the register-vector <-> Gödel-number correspondence.

A register vector ``(e1, e2, ..., ek)`` stands for the integer
``2**e1 * 3**e2 * ... * p(k)**ek``.  Vectors are kept in canonical form
(no trailing zeros) so that vector equality coincides with integer equality.
"""

from __future__ import annotations

import threading
from typing import Iterable, Optional, Tuple

RegisterVector = Tuple[int, ...]


class InvalidIndexError(ValueError):
    pass


class RegisterRangeError(ValueError):
    """A state holds a prime factor beyond the allowed register count."""

    def __init__(self, register: int, bound: int):
        super().__init__(
            f"prime factor p({register}) exceeds the register bound {bound}"
        )
        self.register = register
        self.bound = bound


class _PrimeTable:
    # Grows by sieving successive segments; guarded so threads may share it.

    def __init__(self) -> None:
        self._primes = [2, 3, 5, 7, 11, 13]
        self._limit = 14  # every prime below this is in the table
        self._lock = threading.Lock()

    def nth(self, n: int) -> int:
        primes = self._primes
        if n <= len(primes):
            return primes[n - 1]
        with self._lock:
            while len(self._primes) < n:
                self._extend()
            return self._primes[n - 1]

    def _extend(self) -> None:
        lo = self._limit
        hi = lo * 2
        seg = bytearray([1]) * (hi - lo)
        for p in self._primes:
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            seg[start - lo :: p] = bytes(len(range(start, hi, p)))
        # hi = 2*lo, so sqrt(hi) < lo: the table already holds every sieving prime
        self._primes.extend(lo + off for off in range(hi - lo) if seg[off])
        self._limit = hi


_TABLE = _PrimeTable()


def nth_prime(n: int) -> int:
    """Return the n-th prime, counting from ``nth_prime(1) == 2``."""
    if n < 1:
        raise InvalidIndexError(f"prime index must be >= 1, got {n}")
    return _TABLE.nth(n)


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def canonical(regs: Iterable[int]) -> RegisterVector:
    """Strip trailing zeros, rejecting negative entries."""
    out = list(regs)
    for v in out:
        if v < 0:
            raise ValueError(f"register values must be natural numbers, got {v}")
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def encode(regs: Iterable[int]) -> int:
    i = 1
    for k, e in enumerate(canonical(regs), start=1):
        if e:
            i *= nth_prime(k) ** e
    return i


def decode(i: int, max_registers: Optional[int] = None) -> RegisterVector:
    """Factor ``i`` into its exponent vector over consecutive primes.

    With ``max_registers`` set, a prime factor beyond ``p(max_registers)``
    raises :class:`RegisterRangeError` instead of being decoded.
    """
    if i < 1:
        raise ValueError(f"Gödel numbers are positive, got {i}")
    regs = []
    k = 0
    while i > 1:
        k += 1
        p = nth_prime(k)
        e = 0
        while i % p == 0:
            i //= p
            e += 1
        if e and max_registers is not None and k > max_registers:
            raise RegisterRangeError(k, max_registers)
        regs.append(e)
        if i > 1 and p * p > i:
            # the remainder is itself prime; find its index
            while True:
                k += 1
                if max_registers is not None and k > max_registers:
                    raise RegisterRangeError(k, max_registers)
                q = nth_prime(k)
                if q == i:
                    regs.append(1)
                    i = 1
                    break
                regs.append(0)
    return canonical(regs)


def add_vectors(v: RegisterVector, w: RegisterVector) -> RegisterVector:
    n = max(len(v), len(w))
    v = tuple(v) + (0,) * (n - len(v))
    w = tuple(w) + (0,) * (n - len(w))
    return canonical(a + b for a, b in zip(v, w))
