"""2-isogeny descent for curves y^2 = x^3 + a*x^2 + b*x.

Curve and dual-curve models, the isogeny pair and their composition,
Selmer groups from local solvability of the quartic spaces
w^2 = b1 + a*z^2 + (b/b1)*z^4, the descent map alpha with bounded rational
point search on those spaces, Lutz-Nagell torsion, and the rank bounds

    upper = dim S[psibar] + dim S[psi] - 2
    lower = dim Im(alpha) + dim Im(alphabar) - 2   (floored at 0)

Convention: S[psibar] is computed from the spaces of E itself and S[psi]
from the spaces of the dual curve; the middle coefficient of a curve's
spaces is always that curve's own a.  All point arithmetic is exact
rational arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Optional

from .arith import class_product, factorize, squarefree_class
from .local import (
    INFINITY,
    Place,
    QuarticForm,
    solvable_everywhere_locally,
)

PSI = "psi"
PSIBAR = "psibar"

# Mazur: rational torsion has order at most 12
_MAX_TORSION_ORDER = 12


class InternalConsistencyError(RuntimeError):
    """A computed Selmer set failed subgroup closure (local engine bug)."""


@dataclass(frozen=True)
class CurveModel:
    """y^2 = x^3 + a*x^2 + b*x, nonsingular."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.b == 0:
            raise ValueError("curve requires b != 0")
        if self.a * self.a == 4 * self.b:
            raise ValueError("singular curve: a^2 = 4b")


@dataclass(frozen=True)
class CurvePoint:
    """The identity, or an affine rational point."""

    x: Optional[Fraction]
    y: Optional[Fraction]

    @classmethod
    def identity(cls) -> "CurvePoint":
        return cls(None, None)

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(Fraction(x), Fraction(y))

    @property
    def is_identity(self) -> bool:
        return self.x is None


@dataclass(frozen=True)
class HomSpacePoint:
    """Rational point (z, w) on w^2 = b1 + a*z^2 + (b/b1)*z^4, z != 0."""

    b1: int
    z: Fraction
    w: Fraction

    def __post_init__(self) -> None:
        if self.z == 0:
            raise ValueError("homogeneous space point requires z != 0")


@dataclass(frozen=True)
class SelmerGroup:
    classes: frozenset[int]
    bad_places: frozenset[Place]
    which: str

    @property
    def dim(self) -> int:
        n = len(self.classes)
        if n & (n - 1):
            raise InternalConsistencyError(f"Selmer cardinality {n} is not a power of 2")
        return n.bit_length() - 1

    def sorted_classes(self) -> list[int]:
        return sorted(self.classes)


@dataclass(frozen=True)
class RankBounds:
    dim_selmer_psibar: int
    dim_selmer_psi: int
    dim_im_alpha: int
    dim_im_alphabar: int
    lower: int
    upper: int


# ---------------------------------------------------------------------------
# curve-level operations


def on_curve(E: CurveModel, P: CurvePoint) -> bool:
    if P.is_identity:
        return True
    x, y = P.x, P.y
    return y * y == x * x * x + E.a * x * x + E.b * x


def _require_on_curve(E: CurveModel, P: CurvePoint) -> None:
    if not on_curve(E, P):
        raise ValueError(f"point {P} is not on y^2 = x^3 + {E.a}x^2 + {E.b}x")


def point_negate(P: CurvePoint) -> CurvePoint:
    if P.is_identity:
        return P
    return CurvePoint(P.x, -P.y)


def point_add(E: CurveModel, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent addition on y^2 = x^3 + a*x^2 + b*x."""
    if P.is_identity:
        return Q
    if Q.is_identity:
        return P
    if P.x == Q.x:
        if P.y == -Q.y:
            return CurvePoint.identity()
        # duplication
        lam = (3 * P.x * P.x + 2 * E.a * P.x + E.b) / (2 * P.y)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - E.a - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(x3, y3)


def point_multiply(E: CurveModel, n: int, P: CurvePoint) -> CurvePoint:
    if n < 0:
        return point_multiply(E, -n, point_negate(P))
    acc = CurvePoint.identity()
    step = P
    while n:
        if n & 1:
            acc = point_add(E, acc, step)
        step = point_add(E, step, step)
        n >>= 1
    return acc


def dual_curve(E: CurveModel) -> CurveModel:
    """(a, b) -> (-2a, a^2 - 4b); nonsingular whenever E is."""
    return CurveModel(-2 * E.a, E.a * E.a - 4 * E.b)


def bad_places(E: CurveModel) -> frozenset[Place]:
    """Infinity together with every prime dividing 2*b*bbar."""
    bbar = dual_curve(E).b
    primes = {2} | set(factorize(E.b)) | set(factorize(bbar))
    return frozenset({INFINITY} | {Place(p) for p in primes})


def divisor_classes(b: int) -> list[int]:
    """Signed squarefree divisors supported on the primes of b, ascending.

    These are the candidate square classes b1 with b1 and b/b1 both
    supported on primes of b; there are 2^(omega+1) of them.
    """
    if b == 0:
        raise ValueError("divisor_classes requires b != 0")
    primes = sorted(factorize(b))
    divisors = [1]
    for p in primes:
        divisors += [d * p for d in divisors]
    signed = sorted(d * s for d in divisors for s in (1, -1))
    return signed


def _space_form(curve: CurveModel, b1: int) -> QuarticForm:
    if curve.b % b1 != 0:
        raise ValueError(f"{b1} does not divide b = {curve.b}")
    return QuarticForm(b1, curve.a, curve.b // b1)


def _closure(classes: Iterable[int]) -> frozenset[int]:
    group = {1}
    frontier = set(classes) | {1}
    while frontier != group:
        group = set(frontier)
        frontier = {class_product(u, v) for u in group for v in group}
    return frozenset(group)


def _descent_side(E: CurveModel, which: str) -> CurveModel:
    if which == PSIBAR:
        return E
    if which == PSI:
        return dual_curve(E)
    raise ValueError(f"which must be {PSIBAR!r} or {PSI!r}, got {which!r}")


@lru_cache(maxsize=4096)
def selmer(E: CurveModel, which: str) -> SelmerGroup:
    """Square classes b1 | b whose space is solvable at every bad place.

    which=PSIBAR uses the spaces of E, which=PSI the spaces of the dual
    curve; the bad-place set is shared.  The result is checked to be a
    subgroup containing 1 and the class of b.
    """
    places = bad_places(E)
    curve = _descent_side(E, which)
    classes = frozenset(
        b1
        for b1 in divisor_classes(curve.b)
        if solvable_everywhere_locally(_space_form(curve, b1), places)
    )
    torsion_class = squarefree_class(curve.b)
    if 1 not in classes or torsion_class not in classes:
        raise InternalConsistencyError(
            f"Selmer set {sorted(classes)} is missing a guaranteed class"
        )
    for u, v in itertools.combinations(classes, 2):
        if class_product(u, v) not in classes:
            raise InternalConsistencyError(
                f"Selmer set {sorted(classes)} is not closed: {u}*{v} escapes"
            )
    return SelmerGroup(classes, places, which)


# ---------------------------------------------------------------------------
# rational points on the spaces


def _search_class(
    curve: CurveModel, b1: int, height_bound: int, first_only: bool
) -> list[tuple[int, int, int]]:
    """Primitive hits (m, e, w_num) with w^2 = b1 + a*z^2 + (b/b1)*z^4 at
    z = m/e, gcd(m, e) = 1, 1 <= m, e and max(m, e) <= height_bound.

    Enumerates in rings of increasing max(m, e) so small points surface
    first; exact integer arithmetic throughout.
    """
    a, d2 = curve.a, curve.b // b1
    hits: list[tuple[int, int, int]] = []
    # with a = 0 and mixed signs, one of m/e, e/m is bounded by |b1/d2|^(1/4)
    cap = (b1, -d2) if (a == 0 and d2 < 0 and b1 > 0) else None
    floor_ = (-b1, d2) if (a == 0 and b1 < 0 and d2 > 0) else None

    def try_pair(m: int, e: int) -> bool:
        if gcd(m, e) != 1:
            return False
        m2 = m * m
        e2 = e * e
        if cap is not None and m2 * m2 * cap[1] > cap[0] * e2 * e2:
            return False
        if floor_ is not None and m2 * m2 * floor_[1] < floor_[0] * e2 * e2:
            return False
        n = b1 * e2 * e2 + a * m2 * e2 + d2 * m2 * m2
        if n < 0:
            return False
        r = isqrt(n)
        if r * r != n:
            return False
        hits.append((m, e, r))
        return True

    for h in range(1, height_bound + 1):
        for e in range(1, h + 1):
            if try_pair(h, e) and first_only:
                return hits
        for m in range(1, h):
            if try_pair(m, h) and first_only:
                return hits
    return hits


def search_homspace_points(E: CurveModel, b1: int, height_bound: int) -> list[HomSpacePoint]:
    """All rational points z = m/e, max(|m|, e) <= height_bound, on the b1
    space of E, with both signs of z and w emitted.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    if b1 not in divisor_classes(E.b):
        raise ValueError(f"{b1} is not a divisor class of b = {E.b}")
    points: list[HomSpacePoint] = []
    for m, e, wn in sorted(_search_class(E, b1, height_bound, first_only=False)):
        z = Fraction(m, e)
        w = Fraction(wn, e * e)
        for zs in (z, -z):
            for ws in (w, -w) if w != 0 else (w,):
                points.append(HomSpacePoint(b1, zs, ws))
    return points


def homspace_to_curve(E: CurveModel, P: HomSpacePoint) -> CurvePoint:
    """(z, w) on the b1 space maps to (b1/z^2, b1*w/z^3) on E."""
    x = Fraction(P.b1) / (P.z * P.z)
    y = Fraction(P.b1) * P.w / (P.z * P.z * P.z)
    point = CurvePoint(x, y)
    _require_on_curve(E, point)
    return point


def alpha_image(E: CurveModel, which: str, height_bound: int) -> frozenset[int]:
    """Subgroup of square classes proven to lie in the descent image.

    Generated by 1 and the class of b (images of the identity and (0, 0))
    together with every Selmer class whose space yields a rational point
    within the height bound.  Monotone nondecreasing in the bound.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    sel = selmer(E, which)
    curve = _descent_side(E, which)
    generated = _closure([squarefree_class(curve.b)])
    for b1 in sorted(sel.classes):
        if b1 in generated:
            continue
        if _search_class(curve, b1, height_bound, first_only=True):
            generated = _closure(generated | {b1})
    if not generated <= sel.classes:
        raise InternalConsistencyError("alpha image escaped its Selmer group")
    return generated


# ---------------------------------------------------------------------------
# isogenies


def apply_isogeny(E: CurveModel, P: CurvePoint) -> CurvePoint:
    """The 2-isogeny (x, y) -> (y^2/x^2, y*(b - x^2)/x^2) onto the dual.

    The kernel {O, (0,0)} maps to the identity.
    """
    _require_on_curve(E, P)
    target = dual_curve(E)
    if P.is_identity or P.x == 0:
        return CurvePoint.identity()
    x, y = P.x, P.y
    X = (y / x) ** 2
    Y = y * (E.b - x * x) / (x * x)
    image = CurvePoint(X, Y)
    _require_on_curve(target, image)
    return image


def apply_dual_isogeny(E: CurveModel, P: CurvePoint) -> CurvePoint:
    """The dual isogeny (X, Y) -> (Y^2/4X^2, Y*(bbar - X^2)/8X^2) onto E.

    Composing after apply_isogeny is multiplication by 2 on E.
    """
    Ebar = dual_curve(E)
    _require_on_curve(Ebar, P)
    if P.is_identity or P.x == 0:
        return CurvePoint.identity()
    X, Y = P.x, P.y
    x = Y * Y / (4 * X * X)
    y = Y * (Ebar.b - X * X) / (8 * X * X)
    image = CurvePoint(x, y)
    _require_on_curve(E, image)
    return image


# ---------------------------------------------------------------------------
# torsion


def _divisors_of(fact: dict[int, int]) -> list[int]:
    out = [1]
    for p, e in fact.items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def _quadratic_integer_roots(mid: int, const: int) -> list[int]:
    """Integer roots of x^2 + mid*x + const."""
    disc = mid * mid - 4 * const
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    return sorted({(-mid + s) // 2 for s in (r, -r) if (-mid + s) % 2 == 0})


def _cubic_integer_roots(a2: int, a1: int, a0: int) -> list[int]:
    """Integer roots of x^3 + a2*x^2 + a1*x + a0 (rational-root theorem)."""
    if a0 == 0:
        return sorted({0} | set(_quadratic_integer_roots(a2, a1)))
    roots = set()
    for d in _divisors_of(factorize(a0)):
        for x in (d, -d):
            if ((x + a2) * x + a1) * x + a0 == 0:
                roots.add(x)
    return sorted(roots)


def torsion_info(E: CurveModel) -> list[CurvePoint]:
    """All rational torsion points, by Lutz-Nagell candidates certified
    through multiples (Mazur's bound caps the order at 12).

    Candidates have y = 0 or y^2 | disc = 16*b^2*(a^2 - 4b); integral x.
    """
    disc = 16 * E.b * E.b * (E.a * E.a - 4 * E.b)
    fact = factorize(disc)
    y_candidates = [0] + _divisors_of({p: e // 2 for p, e in fact.items() if e >= 2})
    found = {CurvePoint.identity()}
    for y in y_candidates:
        target = y * y
        if target == 0:
            xs = [0] + _quadratic_integer_roots(E.a, E.b)
        else:
            xs = _cubic_integer_roots(E.a, E.b, -target)
        for x in xs:
            for sign in (1, -1) if y else (1,):
                P = CurvePoint.affine(x, sign * y)
                if not on_curve(E, P) or P in found:
                    continue
                acc = P
                for _ in range(_MAX_TORSION_ORDER):
                    if acc.is_identity:
                        found.add(P)
                        break
                    acc = point_add(E, acc, P)
    return sorted(found, key=lambda P: (not P.is_identity, P.x or 0, P.y or 0))


# ---------------------------------------------------------------------------
# rank bounds


def rank_bounds(E: CurveModel, height_bound: int = 2000) -> RankBounds:
    """Selmer upper bound and search-based lower bound on rank(E(Q))."""
    db = selmer(E, PSIBAR).dim
    dp = selmer(E, PSI).dim
    ia = len(alpha_image(E, PSIBAR, height_bound)).bit_length() - 1
    ib = len(alpha_image(E, PSI, height_bound)).bit_length() - 1
    upper = db + dp - 2
    lower = max(0, ia + ib - 2)
    return RankBounds(
        dim_selmer_psibar=db,
        dim_selmer_psi=dp,
        dim_im_alpha=ia,
        dim_im_alphabar=ib,
        lower=lower,
        upper=upper,
    )
