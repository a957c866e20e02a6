"""Word-size primes and Chinese remaindering for the multi-modular engines."""
from __future__ import annotations

from functools import lru_cache

import flint
import numpy as np

# Residues below 2**59 leave headroom for summing six of them in int64.
PRIME_BITS = 59


@lru_cache(maxsize=None)
def primes_below(limit_bits: int, count: int) -> tuple[int, ...]:
    """The ``count`` largest primes below ``2**limit_bits``, descending."""
    out = []
    candidate = (1 << limit_bits) - 1
    while len(out) < count:
        if flint.fmpz(candidate).is_prime():
            out.append(candidate)
        candidate -= 2
    return tuple(out)


def primes_for_bits(bits: int, extra: int = 1) -> tuple[int, ...]:
    """Enough primes that their product exceeds ``2**bits``, plus ``extra`` spares."""
    need = bits // (PRIME_BITS - 1) + 1 + extra
    return primes_below(PRIME_BITS, need)


def crt_arrays(residues: list[np.ndarray], primes: tuple[int, ...] | list[int],
               signed: bool = False) -> np.ndarray:
    """Combine residue arrays into exact integers (object dtype).

    The caller guarantees every true value lies in ``[0, M)``, or in
    ``(-M/2, M/2]`` when ``signed``, where M is the product of the primes.
    """
    if len(residues) != len(primes):
        raise ValueError("one residue array per prime is required")
    modulus = 1
    for p in primes:
        modulus *= p
    acc = np.zeros(residues[0].shape, dtype=object)
    for r, p in zip(residues, primes):
        cofactor = modulus // p
        weight = cofactor * pow(cofactor % p, -1, p)
        acc = acc + r.astype(object) * weight
    acc = acc % modulus
    if signed:
        acc = np.where(acc > modulus // 2, acc - modulus, acc)
    return acc
