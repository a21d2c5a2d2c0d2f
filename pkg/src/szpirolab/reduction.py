"""Global minimal models, Tate's algorithm, conductors, semistability.

Minimalization follows Laska-Kraus-Connell: strip fourth/sixth powers from
(c4, c6) prime by prime, then back off at 2 and 3 until the Kraus
integrality conditions admit an integral model, and rebuild the reduced
model from the minimal pair.  Tate's algorithm runs per prime with the
standard translations; the conductor exponent comes out of Ogg's formula
f_p = v_p(delta_min) - (components - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from szpirolab.intarith import factorize, p_adic_valuation
from szpirolab.weierstrass import (
    Isomorphism,
    SingularModelError,
    WeierstrassModel,
    compute_invariants,
    transform,
)

__all__ = [
    "LocalReductionData",
    "MinimalModelResult",
    "NonMinimalError",
    "conductor",
    "local_reduction",
    "minimal_model",
    "semistability_report",
    "tate_local",
]


class NonMinimalError(ValueError):
    """tate_local was handed a model that is not minimal at the prime."""


@dataclass(frozen=True)
class MinimalModelResult:
    minimal: WeierstrassModel
    scaling_u: int
    iso: Isomorphism
    delta_min: int

    @property
    def invariants(self):
        return compute_invariants(self.minimal)


@dataclass(frozen=True)
class LocalReductionData:
    p: int
    vp_delta: int
    fp: int
    kodaira: str
    semistable: bool


def _kraus_ok_at_2(c4: int, c6: int) -> bool:
    # An integral model with invariants (c4, c6) exists 2-adically iff
    # c6 = -1 mod 4, or v2(c4) >= 4 with c6 = 0 or 8 mod 32.
    if c6 % 4 == 3:
        return True
    if (c4 == 0 or c4 % 16 == 0) and c6 % 32 in (0, 8):
        return True
    return False


def _kraus_ok_at_3(c6: int) -> bool:
    # 3-adic condition: v3(c6) != 2.
    return c6 == 0 or p_adic_valuation(c6, 3) != 2


def _model_from_c4c6(c4: int, c6: int) -> WeierstrassModel:
    """Connell's recipe: reduced integral model with the given invariants."""
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, rem = divmod(b2 * b2 - c4, 24)
    if rem:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    b6, rem = divmod(-b2**3 + 36 * b2 * b4 - c6, 216)
    if rem:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    a1 = b2 % 2
    a2, rem = divmod(b2 - a1, 4)
    if rem:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    a3 = b6 % 2
    a4, rem = divmod(b4 - a1 * a3, 2)
    if rem:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    a6, rem = divmod(b6 - a3, 4)
    if rem:
        raise ValueError(f"no integral model with c4={c4}, c6={c6}")
    m = WeierstrassModel(a1, a2, a3, a4, a6)
    inv = compute_invariants(m)
    assert (inv.c4, inv.c6) == (c4, c6)
    return m


def minimal_model(m: WeierstrassModel) -> MinimalModelResult:
    """Global minimal model of an integral model, with the witnessing data.

    Returns the minimal model, the positive integer u with
    delta_input = u^12 * delta_min, and the isomorphism mapping the input
    model onto the minimal one.
    """
    if not m.is_integral():
        raise ValueError("minimal_model requires integral coefficients")
    inv = compute_invariants(m)
    c4, c6, delta = inv.c4, inv.c6, inv.delta
    if delta == 0:
        raise SingularModelError("singular model has no minimal model")

    # Primes that can be scaled out must divide both invariants (or the
    # nonzero one when the other vanishes).
    if c4 == 0:
        support = factorize(c6)
    elif c6 == 0:
        support = factorize(c4)
    else:
        support = factorize(math.gcd(c4, c6))

    u = 1
    for p, _ in support:
        k4 = p_adic_valuation(c4, p) // 4 if c4 != 0 else None
        k6 = p_adic_valuation(c6, p) // 6 if c6 != 0 else None
        k = min(
            [x for x in (k4, k6) if x is not None]
            + [p_adic_valuation(delta, p) // 12]
        )
        if p == 2:
            while k > 0 and not _kraus_ok_at_2(c4 // 2 ** (4 * k), c6 // 2 ** (6 * k)):
                k -= 1
        elif p == 3:
            while k > 0 and not _kraus_ok_at_3(c6 // 3 ** (6 * k)):
                k -= 1
        u *= p**k

    c4m, c6m = c4 // u**4, c6 // u**6
    minimal = _model_from_c4c6(c4m, c6m)
    delta_min = compute_invariants(minimal).delta
    assert delta == u**12 * delta_min

    # Recover (r, s, t) linking the input model to the minimal one.
    a1, a2, a3 = m.a1, m.a2, m.a3
    s = Fraction(u * minimal.a1 - a1, 2)
    r = Fraction(u * u * minimal.a2 - a2 + s * a1 + s * s, 3)
    t = Fraction(u**3 * minimal.a3 - a3 - r * a1, 2)
    iso = Isomorphism(u, r, s, t)
    assert transform(m, iso) == minimal
    return MinimalModelResult(minimal, u, iso, delta_min)


def _centered(x: int, modulus: int) -> int:
    r = x % modulus
    if 2 * r > modulus:
        r -= modulus
    return r


def _inverse_mod(a: int, modulus: int) -> int:
    return pow(a, -1, modulus)


def _translate(m: WeierstrassModel, r: int = 0, s: int = 0, t: int = 0):
    return transform(m, Isomorphism(1, r, s, t))


def _cubic_has_distinct_roots(a: int, b: int, c: int, p: int) -> bool:
    # Discriminant of the monic cubic T^3 + aT^2 + bT + c.
    disc = 18 * a * b * c - 4 * a**3 * c + a * a * b * b - 4 * b**3 - 27 * c * c
    return disc % p != 0


def tate_local(m: WeierstrassModel, p: int) -> LocalReductionData:
    """Tate's algorithm at p for a model minimal at p.

    Produces the Kodaira type and conductor exponent.  A model that turns
    out to be non-minimal at p (the algorithm's final rescaling step) is
    rejected, since exponents are only meaningful for minimal models.
    """
    if not m.is_integral():
        raise ValueError("tate_local requires an integral model")
    inv = compute_invariants(m)
    if inv.delta == 0:
        raise SingularModelError("Tate's algorithm requires delta != 0")
    n = p_adic_valuation(inv.delta, p) if inv.delta % p == 0 else 0
    if n == 0:
        return LocalReductionData(p, 0, 0, "I0", True)
    if inv.c4 % p != 0:
        # Multiplicative reduction: type I_n, exponent 1.
        return LocalReductionData(p, n, 1, f"I{n}", True)

    # Additive reduction.  Move the singular point of the reduction to (0,0).
    a1, a2, a3, a4, a6 = m.coefficients()
    if p == 2:
        r = a4 % 2
        t = (r * (1 + a2 + a4) + a6) % 2
    elif p == 3:
        r = (-inv.b6) % 3
        t = (a1 * r + a3) % 3
    else:
        r = _centered(-inv.b2 * _inverse_mod(12, p) % p, p)
        t = _centered(-(a1 * r + a3) * _inverse_mod(2, p) % p, p)
    work = _translate(m, r=r, t=t)
    a1, a2, a3, a4, a6 = work.coefficients()
    assert a3 % p == 0 and a4 % p == 0 and a6 % p == 0

    def val(x, bound):
        # v_p(x) capped at bound, with v_p(0) treated as the cap.
        v = 0
        while v < bound and x % p == 0:
            x //= p
            v += 1
        return v

    if val(a6, 2) < 2:
        return LocalReductionData(p, n, n, "II", False)
    winv = compute_invariants(work)
    if val(winv.b8, 3) < 3:
        return LocalReductionData(p, n, n - 1, "III", False)
    if val(winv.b6, 3) < 3:
        return LocalReductionData(p, n, n - 2, "IV", False)

    # Normalize so that p | a1, a2; p^2 | a3, a4; p^3 | a6.
    if p == 2:
        s = a2 % 2
        t = 2 * ((a6 // 4) % 2)
    else:
        s = _centered(-a1 * _inverse_mod(2, p) % p, p)
        t = _centered(-a3 * _inverse_mod(2, p * p) % (p * p), p * p)
    work = _translate(work, s=s, t=t)
    a1, a2, a3, a4, a6 = work.coefficients()
    assert a1 % p == 0 and a2 % p == 0
    assert a3 % p**2 == 0 and a4 % p**2 == 0 and a6 % p**3 == 0

    # Distinguish I0*, I_m*, and the deeper types via the cubic
    # P(T) = T^3 + a2/p T^2 + a4/p^2 T + a6/p^3 over F_p.
    A, B, C = a2 // p, a4 // p**2, a6 // p**3
    if _cubic_has_distinct_roots(A, B, C, p):
        return LocalReductionData(p, n, n - 4, "I0*", False)

    if (3 * B - A * A) % p != 0:
        # Double root; translate it to T = 0 and run the I_m* ladder.
        if p == 2:
            root = B % 2
        else:
            root = (A * B - 9 * C) * _inverse_mod(2 * (3 * B - A * A) % p, p) % p
        work = _translate(work, r=p * _centered(root, p))
        a1, a2, a3, a4, a6 = work.coefficients()
        assert a2 % p != 0 or a2 // p % p != 0  # v(a2) == 1
        ix, iy = 3, 3
        mx, my = p * p, p * p
        while True:
            a3t = a3 // my
            a6t = a6 // (mx * my)
            if (a3t * a3t + 4 * a6t) % p != 0:
                break
            if p == 2:
                root = a6t % 2
            else:
                root = -a3t * _inverse_mod(2, p) % p
            work = _translate(work, t=my * _centered(root, p))
            a1, a2, a3, a4, a6 = work.coefficients()
            iy += 1
            my *= p
            a2t = a2 // p
            a4t = a4 // (p * mx)
            a6t = a6 // (mx * my)
            if (a4t * a4t - 4 * a2t * a6t) % p != 0:
                break
            if p == 2:
                root = a6t * _inverse_mod(a2t, 2) % 2
            else:
                root = -a4t * _inverse_mod(2 * a2t % p, p) % p
            work = _translate(work, r=mx * _centered(root, p))
            a1, a2, a3, a4, a6 = work.coefficients()
            ix += 1
            mx *= p
        m_star = ix + iy - 5
        return LocalReductionData(p, n, n - 4 - m_star, f"I{m_star}*", False)

    # Triple root; translate it to T = 0.
    if p == 2:
        root = A % 2
    elif p == 3:
        root = (-C) % 3
    else:
        root = -A * _inverse_mod(3, p) % p
    work = _translate(work, r=p * _centered(root, p))
    a1, a2, a3, a4, a6 = work.coefficients()
    assert a2 % p**2 == 0 and a4 % p**3 == 0 and a6 % p**4 == 0

    # Quadratic Y^2 + (a3/p^2) Y - a6/p^4 over F_p.
    a3t = a3 // p**2
    a6t = a6 // p**4
    if (a3t * a3t + 4 * a6t) % p != 0:
        return LocalReductionData(p, n, n - 6, "IV*", False)
    if p == 2:
        root = a6t % 2
    else:
        root = -a3t * _inverse_mod(2, p) % p
    work = _translate(work, t=p * p * _centered(root, p))
    a1, a2, a3, a4, a6 = work.coefficients()
    assert a3 % p**3 == 0 and a6 % p**5 == 0

    if a4 % p**4 != 0:
        return LocalReductionData(p, n, n - 7, "III*", False)
    if a6 % p**6 != 0:
        return LocalReductionData(p, n, n - 8, "II*", False)
    raise NonMinimalError(f"model {m} is not minimal at {p}")


def local_reduction(m: WeierstrassModel) -> list[LocalReductionData]:
    """Tate data at every bad prime of the global minimal model of m."""
    mm = minimal_model(m)
    out = []
    for p, _ in factorize(mm.delta_min):
        out.append(tate_local(mm.minimal, p))
    return out


def conductor(m: WeierstrassModel) -> int:
    """The conductor: product of p^fp over primes dividing delta_min."""
    N = 1
    for data in local_reduction(m):
        N *= data.p**data.fp
    return N


def semistability_report(m: WeierstrassModel) -> list[tuple[int, bool]]:
    """(p, semistable at p) for each bad prime, via p | gcd(c4, delta_min)."""
    mm = minimal_model(m)
    c4 = compute_invariants(mm.minimal).c4
    out = []
    for p, _ in factorize(mm.delta_min):
        out.append((p, c4 % p != 0))
    return out
