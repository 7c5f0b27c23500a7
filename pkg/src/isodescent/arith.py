"""Exact integer arithmetic primitives.

Primality, p-adic valuations, Jacobi and rational quartic residue symbols,
and canonical square-class representatives.  Everything here is a pure
function on Python ints (arbitrary precision), deterministic, and safe to
call concurrently.

Square classes are represented by signed squarefree integers: the class of
a nonzero rational v is the unique squarefree integer s with v = s * k^2.
"""

from __future__ import annotations

import math
from functools import lru_cache

# Deterministic Miller-Rabin witness set, valid for all n below this bound
# (Sorenson-Webster).  Inputs past the bound are rejected rather than
# answered probabilistically.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
IS_PRIME_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 1 <= n < IS_PRIME_LIMIT.

    Raises ValueError outside the supported range; never probabilistic.
    """
    if n < 1:
        raise ValueError(f"is_prime requires n >= 1, got {n}")
    if n >= IS_PRIME_LIMIT:
        raise ValueError(f"is_prime supports n < {IS_PRIME_LIMIT}, got {n}")
    if n == 1:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    # n odd, n > 47: Miller-Rabin with the fixed witness set
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


def valuation(n: int, l: int) -> int:
    """Largest e with l^e dividing n.  n must be nonzero, l prime."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    if not is_prime(l):
        raise ValueError(f"valuation requires a prime base, got {l}")
    e = 0
    while n % l == 0:
        n //= l
        e += 1
    return e


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, ascending (sieve of Eratosthenes)."""
    if limit < 2:
        raise ValueError(f"primes_up_to requires limit >= 2, got {limit}")
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(2, limit + 1) if sieve[i]]


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    return tuple(primes_up_to(limit))


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0, exact integer arithmetic."""
    if n < 2:
        return n
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}.

    Desk-scale only: trial division by primes up to 10^6, then the remainder
    must be a prime power p^e, e <= 4 (all that descent coefficients like
    2*b*bbar ever produce).  Anything else is rejected.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _sieve(1_000_000):
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        for mult in (1, 2, 3, 4):
            root = _iroot(n, mult)
            if root**mult == n and root < IS_PRIME_LIMIT and is_prime(root):
                out[root] = out.get(root, 0) + mult
                break
        else:
            raise ValueError(f"cofactor {n} out of supported factoring range")
    return out


def squarefree_class(n: int) -> int:
    """Canonical representative of n modulo nonzero rational squares.

    sign(n) times the product of primes dividing n to an odd power.
    Idempotent: squarefree_class(v * k^2) == squarefree_class(v).
    """
    if n == 0:
        raise ValueError("0 has no square class")
    sign = -1 if n < 0 else 1
    out = sign
    for p, e in factorize(n).items():
        if e % 2:
            out *= p
    return out


def class_product(u: int, v: int) -> int:
    """Product of two square classes (inputs must already be squarefree)."""
    g = math.gcd(u, v)
    return (u * v) // (g * g)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1; the Legendre symbol for prime n.

    0 iff gcd(a, n) > 1.  Multiplicative in both arguments.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"jacobi requires odd n >= 1, got n={n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """base**exp mod modulus, in [0, modulus)."""
    if modulus < 1:
        raise ValueError(f"mod_pow requires modulus >= 1, got {modulus}")
    if exp < 0:
        raise ValueError(f"mod_pow requires exp >= 0, got {exp}")
    return pow(base, exp, modulus)


def quartic_symbol(a: int, p: int) -> int:
    """Rational quartic residue symbol (a/p)_4 = a^((p-1)/4) mod p in {+1,-1}.

    Defined only for p prime, p = 1 mod 4, p not dividing a, and a a
    quadratic residue mod p; +1 exactly when a is a fourth power mod p.
    Non-residues are rejected, not extended to fourth roots of unity.
    """
    if not is_prime(p):
        raise ValueError(f"quartic_symbol requires prime p, got {p}")
    if p % 4 != 1:
        raise ValueError(f"quartic_symbol requires p = 1 mod 4, got {p}")
    if a % p == 0:
        raise ValueError(f"quartic_symbol undefined: {p} divides {a}")
    if jacobi(a, p) != 1:
        raise ValueError(f"quartic_symbol undefined: {a} is not a quadratic residue mod {p}")
    r = pow(a % p, (p - 1) // 4, p)
    if r == 1:
        return 1
    if r == p - 1:
        return -1
    raise AssertionError("quartic symbol of a quadratic residue must be +-1")
