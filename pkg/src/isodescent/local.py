"""Local solvability of quartic spaces w^2 = d1 + c*z^2 + d2*z^4.

Decides existence of points over the reals and over every Q_l, which is
what membership in a descent Selmer group reduces to.  Two independent
routes are provided:

  * solvable_padic: a complete residue-recursion engine.  A Q_l-point
    exists iff a Z_l-point (with v(z) >= 0) exists on the form or on its
    reciprocal (d2, c, d1), the image of z -> 1/z, w -> w/z^2; points with
    v(z) < 0 are never enumerated directly.  Each Z_l question is decided
    by recursing on residue discs around roots of the reduced polynomial,
    stripping even powers of l from the content as it goes.  Recursion
    depth is capped at D = v_l(4*d1*d2*(c^2-4*d1*d2)) + 3 (two more at
    l = 2); exceeding the cap raises rather than guessing.

  * brute_oracle: a breadth-first residue search that only ever reports a
    definite answer with a certificate (an exact Z_l-square value, or a
    proof that every residue class mod l^k is pinned to a non-square).
    Used by the test suite to cross-examine the engine; tri-state because
    it must never claim completeness beyond its depth.

Values that are exact squares in Z_l include 0: a point with w = 0 is a
point.  All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Iterable, Optional, Union

from .arith import is_prime


class LocalEngineError(RuntimeError):
    """Residue recursion exceeded its proven depth cap (engine bug)."""


@dataclass(frozen=True)
class QuarticForm:
    """The curve w^2 = d1 + c*z^2 + d2*z^4 with nonzero discriminant."""

    d1: int
    c: int
    d2: int

    def __post_init__(self) -> None:
        if self.d1 == 0 or self.d2 == 0:
            raise ValueError("quartic form requires d1 != 0 and d2 != 0")
        if self.c * self.c == 4 * self.d1 * self.d2:
            raise ValueError("degenerate quartic form: c^2 = 4*d1*d2")

    def reciprocal(self) -> "QuarticForm":
        return QuarticForm(self.d2, self.c, self.d1)

    def value(self, z: Fraction) -> Fraction:
        z2 = z * z
        return self.d1 + self.c * z2 + self.d2 * z2 * z2


@dataclass(frozen=True)
class Place:
    """A place of Q: a finite prime, or None for the real place."""

    prime: Optional[int]

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"finite place must be prime, got {self.prime}")

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def __str__(self) -> str:
        return "infinity" if self.prime is None else str(self.prime)


INFINITY = Place(None)


@dataclass(frozen=True)
class PointWitness:
    """Exact rational point; on the reciprocal form iff on_reciprocal."""

    z: Fraction
    w: Fraction
    on_reciprocal: bool = False


@dataclass(frozen=True)
class LiftTrace:
    """Residue z0 mod l^modulus_exp whose exact value F(z0) is a Z_l square.

    valuation is v_l(F(z0)) (even), unit the cofactor F(z0)/l^valuation;
    for odd l the unit is a quadratic residue mod l, for l = 2 it is
    1 mod 8, so w lifts by Hensel's lemma with z frozen at z0.
    """

    z0: int
    modulus_exp: int
    valuation: int
    unit: int
    on_reciprocal: bool = False


@dataclass(frozen=True)
class SolvabilityCertificate:
    form: QuarticForm
    place: Place
    solvable: bool
    witness: Union[PointWitness, LiftTrace, None]
    route: str  # "direct", "reciprocal", or "none"


class Verdict(Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    UNKNOWN = "unknown"


# ---------------------------------------------------------------------------
# real place


def solvable_real(q: QuarticForm) -> bool:
    """True iff w^2 = d1 + c*t + d2*t^2 is nonnegative for some t = z^2 >= 0."""
    if q.d2 > 0 or q.d1 > 0:
        return True
    # d1, d2 < 0: the parabola opens downward; its vertex is at t >= 0
    # only when c > 0, and the max value there is (4*d1*d2 - c^2)/(4*d2).
    return q.c > 0 and q.c * q.c >= 4 * q.d1 * q.d2


# ---------------------------------------------------------------------------
# Z_l machinery

Poly = tuple[int, ...]  # coefficients, low degree first


def _poly_eval(f: Poly, x: int) -> int:
    acc = 0
    for coeff in reversed(f):
        acc = acc * x + coeff
    return acc


def _poly_shift(f: Poly, t0: int, l: int) -> Poly:
    """Coefficients of f(t0 + l*s) as a polynomial in s.

    Taylor coefficients at t0 come from repeated synthetic division by
    (x - t0); the i-th then picks up a factor l^i.
    """
    taylor: list[int] = []
    work = list(f)
    while work:
        carry = 0
        quot = [0] * (len(work) - 1)
        for j in range(len(work) - 1, 0, -1):
            carry = carry * t0 + work[j]
            quot[j - 1] = carry
        taylor.append(carry * t0 + work[0])
        work = quot
    return tuple(taylor[i] * l**i for i in range(len(taylor)))


def _vl(n: int, l: int) -> int:
    v = 0
    while n % l == 0:
        n //= l
        v += 1
    return v


@lru_cache(maxsize=64)
def _square_residues(l: int) -> frozenset[int]:
    """Nonzero quadratic residues mod an odd prime l."""
    return frozenset(i * i % l for i in range(1, (l - 1) // 2 + 1))


def is_zl_square(val: int, l: int) -> bool:
    """Exact test: is the integer val a square in Z_l (0 counts)."""
    if val == 0:
        return True
    v = _vl(val, l)
    if v % 2:
        return False
    u = val // l**v
    if l == 2:
        return u % 8 == 1
    return u % l in _square_residues(l)


def _strip_even_content(f: Poly, l: int) -> tuple[Poly, int]:
    """Divide f by the largest even power of l in its content.

    Returns (reduced poly, residual content exponent in {0, 1}).
    """
    e = min(_vl(c, l) for c in f if c != 0)
    if e >= 2:
        f = tuple(c // l ** (e - (e % 2)) for c in f)
        e %= 2
    return f, e


def _zl_search_odd(f: Poly, l: int, budget: int, sqset: frozenset[int]) -> Optional[int]:
    """Smallest-digit z in Z_l (returned as a nested-disc integer) with f(z)
    an exact Z_l square, or None if no such z exists.  Complete for odd l.
    """
    f, e = _strip_even_content(f, l)
    unit_part = f if e == 0 else tuple(c // l for c in f)
    gmod = [c % l for c in unit_part]
    # residues where the primitive part vanishes mod l need recursion; a
    # residue with unit value decides on the spot (QR iff square, given the
    # content parity e).
    if not any(gmod[1:]):
        # constant reduction: one test covers every residue class
        const = gmod[0]
        if const == 0:
            raise AssertionError("primitive polynomial reduced to zero mod l")
        return 0 if (e == 0 and const in sqset) else None
    roots: list[int] = []
    for t0 in range(l):
        r = 0
        for coeff in reversed(gmod):
            r = (r * t0 + coeff) % l
        if r == 0:
            roots.append(t0)
        elif e == 0 and r in sqset:
            return t0
    for t0 in roots:
        val = _poly_eval(f, t0)
        if is_zl_square(val, l):
            return t0
        if budget == 0:
            raise LocalEngineError("depth cap exceeded at odd prime (engine bug)")
        sub = _zl_search_odd(_poly_shift(f, t0, l), l, budget - 1, sqset)
        if sub is not None:
            return t0 + l * sub
    return None


def _zl_search_two(f: Poly, budget: int) -> Optional[int]:
    """Same as _zl_search_odd for l = 2: units are recognized mod 8."""
    f, e = _strip_even_content(f, 2)
    unit_part = f if e == 0 else tuple(c // 2 for c in f)
    for t0 in range(8):
        if is_zl_square(_poly_eval(f, t0), 2):
            return t0
    for t0 in (0, 1):
        if _poly_eval(unit_part, t0) % 2 == 0:
            if budget == 0:
                raise LocalEngineError("depth cap exceeded at l = 2 (engine bug)")
            sub = _zl_search_two(_poly_shift(f, t0, 2), budget - 1)
            if sub is not None:
                return t0 + 2 * sub
    return None


def _depth_cap(q: QuarticForm, l: int) -> int:
    disc_data = 4 * q.d1 * q.d2 * (q.c * q.c - 4 * q.d1 * q.d2)
    cap = _vl(abs(disc_data), l) + 3
    if l == 2:
        cap += 2
    return cap


def _form_poly(q: QuarticForm) -> Poly:
    return (q.d1, 0, q.c, 0, q.d2)


def _certificate(q: QuarticForm, l: int, z0: int, on_reciprocal: bool, depth_used: int):
    """Build the strongest witness available for the found residue."""
    poly_form = q.reciprocal() if on_reciprocal else q
    val = poly_form.value(Fraction(z0))
    n = int(val)
    root = isqrt(n) if n >= 0 else -1
    if n >= 0 and root * root == n:
        z = Fraction(z0)
        w = Fraction(root)
        if on_reciprocal and z0 != 0:
            # convert back to the direct form: z -> 1/z, w -> w/z^2
            return PointWitness(z=1 / z, w=w / (z * z), on_reciprocal=False)
        return PointWitness(z=z, w=w, on_reciprocal=on_reciprocal)
    v = _vl(n, l)
    unit = n // l**v
    return LiftTrace(
        z0=z0,
        modulus_exp=depth_used,
        valuation=v,
        unit=unit,
        on_reciprocal=on_reciprocal,
    )


def solvable_padic(q: QuarticForm, l: int) -> SolvabilityCertificate:
    """Decide whether w^2 = d1 + c*z^2 + d2*z^4 has a point over Q_l."""
    if not is_prime(l):
        raise ValueError(f"solvable_padic requires a prime, got {l}")
    cap = _depth_cap(q, l)
    for route, form in (("direct", q), ("reciprocal", q.reciprocal())):
        poly = _form_poly(form)
        if l == 2:
            z0 = _zl_search_two(poly, cap)
        else:
            z0 = _zl_search_odd(poly, l, cap, _square_residues(l))
        if z0 is not None:
            witness = _certificate(q, l, z0, route == "reciprocal", cap)
            return SolvabilityCertificate(q, Place(l), True, witness, route)
    return SolvabilityCertificate(q, Place(l), False, None, "none")


def solvable_at(q: QuarticForm, place: Place) -> bool:
    if place.is_infinite:
        return solvable_real(q)
    return solvable_padic(q, place.prime).solvable


def solvable_everywhere_locally(q: QuarticForm, places: Iterable[Place]) -> bool:
    """Conjunction of local solvability over the given places.

    Short-circuits on the first failing place; places are visited in a
    canonical order (infinity first, then ascending primes) so the result
    and any certificates are reproducible.
    """
    ordered = sorted(places, key=lambda pl: (-1 if pl.prime is None else pl.prime))
    if not ordered:
        raise ValueError("solvable_everywhere_locally requires a nonempty place set")
    return all(solvable_at(q, pl) for pl in ordered)


# ---------------------------------------------------------------------------
# brute oracle


def _bfs_one(f: Poly, l: int, depth: int) -> Verdict:
    """Breadth-first certified search for z in Z_l with f(z) a square."""
    prune_gap = 3 if l == 2 else 1
    live = [0]
    modulus = 1
    for k in range(1, depth + 1):
        nxt: list[int] = []
        for base in live:
            for digit in range(l):
                z0 = base + digit * modulus
                val = _poly_eval(f, z0)
                if is_zl_square(val, l):
                    return Verdict.SOLVABLE
                # f(z) = val mod l^k on the whole class; once v(val) is
                # far enough below k the square-ness of the class is pinned.
                if _vl(val, l) <= k - prune_gap:
                    continue
                nxt.append(z0)
        if not nxt:
            return Verdict.UNSOLVABLE
        live = nxt
        modulus *= l
    return Verdict.UNKNOWN


def brute_oracle(q: QuarticForm, l: int, depth: int) -> Verdict:
    """Tri-state exhaustive residue search over the form and its reciprocal.

    SOLVABLE and UNSOLVABLE are certified; UNKNOWN means the depth ran out
    before every residue branch was decided.
    """
    if not is_prime(l):
        raise ValueError(f"brute_oracle requires a prime, got {l}")
    if depth < 1:
        raise ValueError(f"brute_oracle requires depth >= 1, got {depth}")
    a = _bfs_one(_form_poly(q), l, depth)
    if a is Verdict.SOLVABLE:
        return a
    b = _bfs_one(_form_poly(q.reciprocal()), l, depth)
    if b is Verdict.SOLVABLE:
        return b
    if a is Verdict.UNSOLVABLE and b is Verdict.UNSOLVABLE:
        return Verdict.UNSOLVABLE
    return Verdict.UNKNOWN
