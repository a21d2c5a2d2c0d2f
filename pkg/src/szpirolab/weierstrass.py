"""Weierstrass models over Q: invariants, coordinate changes, group law.

Model: y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6.  Coefficients are
exact rationals (plain ints stay ints, so integral models never touch
Fraction on the hot paths).  The invariant and transformation formulas are
plain polynomial expressions, so they also accept Poly coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from szpirolab.intarith import iroot

__all__ = [
    "AffinePoint",
    "INFINITY",
    "Isomorphism",
    "ModelInvariants",
    "SingularModelError",
    "WeierstrassModel",
    "add_points",
    "compute_invariants",
    "full_two_torsion",
    "is_on_curve",
    "j_invariant",
    "negate_point",
    "point_order",
    "transform",
]


class SingularModelError(ValueError):
    """Operation requires a nonsingular model (discriminant != 0)."""


def _norm(x):
    """Collapse integral Fractions back to int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


@dataclass(frozen=True)
class WeierstrassModel:
    a1: object
    a2: object
    a3: object
    a4: object
    a6: object

    def coefficients(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for a in self.coefficients())

    def __str__(self):
        return f"[{self.a1},{self.a2},{self.a3},{self.a4},{self.a6}]"


def model(a1, a2, a3, a4, a6) -> WeierstrassModel:
    """Build a model, normalizing integral Fractions to int."""
    return WeierstrassModel(*(_norm(a) for a in (a1, a2, a3, a4, a6)))


@dataclass(frozen=True)
class ModelInvariants:
    b2: object
    b4: object
    b6: object
    b8: object
    c4: object
    c6: object
    delta: object


def compute_invariants(m: WeierstrassModel) -> ModelInvariants:
    """b-, c-invariants and discriminant; c4^3 - c6^2 = 1728*delta exactly."""
    a1, a2, a3, a4, a6 = m.coefficients()
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    delta = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    assert c4**3 - c6**2 == 1728 * delta
    assert b2 * b6 - b4 * b4 == 4 * b8
    return ModelInvariants(b2, b4, b6, b8, c4, c6, delta)


def discriminant(m: WeierstrassModel):
    return compute_invariants(m).delta


def j_invariant(m: WeierstrassModel) -> Fraction:
    inv = compute_invariants(m)
    if inv.delta == 0:
        raise SingularModelError("j-invariant undefined: singular model")
    return Fraction(inv.c4**3) / Fraction(inv.delta)


@dataclass(frozen=True)
class Isomorphism:
    """Change of variables x = u^2 x' + r, y = u^3 y' + u^2 s x' + t."""

    u: object
    r: object = 0
    s: object = 0
    t: object = 0

    def __post_init__(self):
        if self.u == 0:
            raise ValueError("isomorphism scale u must be nonzero")

    def compose(self, other: "Isomorphism") -> "Isomorphism":
        """The map performing self first, then other."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Isomorphism(
            _norm(u1 * u2),
            _norm(u1 * u1 * r2 + r1),
            _norm(u1 * s2 + s1),
            _norm(u1**3 * t2 + u1 * u1 * s1 * r2 + t1),
        )

    def inverse(self) -> "Isomorphism":
        u, r, s, t = self.u, self.r, self.s, self.t
        uq = Fraction(u)
        return Isomorphism(
            _norm(1 / uq),
            _norm(-Fraction(r) / uq**2),
            _norm(-Fraction(s) / uq),
            _norm(Fraction(s * r - t) / uq**3),
        )


IDENTITY_ISO = Isomorphism(1, 0, 0, 0)


def _exact_div(value, den_power):
    if den_power == 1:
        return value
    q = Fraction(value) / Fraction(den_power)
    return _norm(q)


def transform(m: WeierstrassModel, iso: Isomorphism) -> WeierstrassModel:
    """Apply the substitution; c4' = u^-4 c4, c6' = u^-6 c6, delta' = u^-12 delta."""
    a1, a2, a3, a4, a6 = m.coefficients()
    u, r, s, t = iso.u, iso.r, iso.s, iso.t
    na1 = a1 + 2 * s
    na2 = a2 - s * a1 + 3 * r - s * s
    na3 = a3 + r * a1 + 2 * t
    na4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    na6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    return WeierstrassModel(
        _exact_div(na1, u),
        _exact_div(na2, u * u),
        _exact_div(na3, u**3),
        _exact_div(na4, u**4),
        _exact_div(na6, u**6),
    )


# ---------------------------------------------------------------------------
# Rational points and the group law


@dataclass(frozen=True)
class AffinePoint:
    x: Fraction
    y: Fraction

    def __str__(self):
        return f"({self.x}, {self.y})"


# The point at infinity (group identity).
INFINITY = None

CurvePoint = "AffinePoint | None"


def is_on_curve(m: WeierstrassModel, point) -> bool:
    """Exact equation check; the point at infinity is always on the curve."""
    if point is INFINITY:
        return True
    a1, a2, a3, a4, a6 = m.coefficients()
    x, y = point.x, point.y
    return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6


def negate_point(m: WeierstrassModel, point):
    if point is INFINITY:
        return INFINITY
    x, y = point.x, point.y
    return AffinePoint(x, _norm(Fraction(-y - m.a1 * x - m.a3)))


def add_points(m: WeierstrassModel, p, q):
    """Chord-and-tangent addition in affine coordinates."""
    if p is INFINITY:
        return q
    if q is INFINITY:
        return p
    a1, a2, a3, a4, a6 = m.coefficients()
    x1, y1 = Fraction(p.x), Fraction(p.y)
    x2, y2 = Fraction(q.x), Fraction(q.y)
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return AffinePoint(x3, y3)


def point_order(m: WeierstrassModel, point, cap: int = 16) -> int | None:
    """Exact order of a point if <= cap, else None.

    The cap of 16 leaves slack above the largest rational torsion order (12)
    while keeping runaway loops impossible.
    """
    if compute_invariants(m).delta == 0:
        raise SingularModelError("point order undefined on a singular model")
    if not is_on_curve(m, point):
        raise ValueError(f"point {point} is not on the curve")
    if point is INFINITY:
        return 1
    acc = point  # invariant: acc == k * point at the top of iteration k
    for k in range(1, cap + 1):
        if acc is INFINITY:
            return k
        acc = add_points(m, acc, point)
    return None


def _monic_cubic_integer_roots(c2: int, c1: int, c0: int) -> list[int]:
    """Integer roots of X^3 + c2 X^2 + c1 X + c0, by exact bisection on the
    monotonic pieces between the critical points."""

    def ev(x: int) -> int:
        return ((x + c2) * x + c1) * x + c0

    bound = 1 + max(abs(c2), abs(c1), abs(c0))  # Cauchy bound
    cuts = {-bound, bound}
    disc = 4 * c2 * c2 - 12 * c1  # of the derivative 3X^2 + 2 c2 X + c1
    if disc >= 0:
        s = math.isqrt(disc)
        for num in (-2 * c2 - s, -2 * c2 + s):
            x = num // 6
            cuts.update((max(-bound, min(bound, x)), max(-bound, min(bound, x + 1))))
    grid = sorted(cuts)
    roots = {x for x in grid if ev(x) == 0}
    for lo, hi in zip(grid, grid[1:]):
        flo, fhi = ev(lo), ev(hi)
        if flo == 0 or fhi == 0 or (flo > 0) == (fhi > 0):
            continue
        while hi - lo > 1:
            mid = (lo + hi) // 2
            fm = ev(mid)
            if fm == 0:
                roots.add(mid)
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
    return sorted(roots)


def _rational_roots_cubic(c3: int, c2: int, c1: int, c0: int) -> list[Fraction]:
    """Rational roots of c3 x^3 + c2 x^2 + c1 x + c0 (c3 != 0).

    Substituting X = c3 x makes the cubic monic with integer coefficients,
    so every rational root shows up as an integer root X0 with x = X0/c3.
    """
    g = math.gcd(math.gcd(abs(c3), abs(c2)), math.gcd(abs(c1), abs(c0)))
    if g > 1:
        c3, c2, c1, c0 = c3 // g, c2 // g, c1 // g, c0 // g
    return [
        Fraction(x0, c3)
        for x0 in _monic_cubic_integer_roots(c2, c1 * c3, c0 * c3 * c3)
    ]


def _rational_roots_quadratic(c2: int, c1: int, c0: int) -> list[Fraction]:
    if c2 == 0:
        return [] if c1 == 0 else [Fraction(-c0, c1)]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    root = iroot(disc, 2)
    if root is None:
        return []
    return sorted({Fraction(-c1 + root, 2 * c2), Fraction(-c1 - root, 2 * c2)})


def full_two_torsion(m: WeierstrassModel) -> list:
    """All rational points of order dividing 2, the identity included.

    The x-coordinates of 2-torsion are the rational roots of the 2-division
    polynomial 4x^3 + b2 x^2 + 2 b4 x + b6.
    """
    inv = compute_invariants(m)
    if inv.delta == 0:
        raise SingularModelError("two-torsion undefined on a singular model")
    b2, b4, b6 = Fraction(inv.b2), Fraction(inv.b4), Fraction(inv.b6)
    den = 1
    for f in (b2, b4, b6):
        den = den * f.denominator // math.gcd(den, f.denominator)
    coeffs = [int(4 * den), int(b2 * den), int(2 * b4 * den), int(b6 * den)]
    points = [INFINITY]
    for x in _rational_roots_cubic(*coeffs):
        y = _norm(Fraction(-(m.a1 * x + m.a3), 2))
        pt = AffinePoint(x, y)
        assert is_on_curve(m, pt)
        points.append(pt)
    return points
