"""Sharpness families: one curve sequence per torsion structure whose
Szpiro ratio descends to the sharp bound along squarefree conductor values.

The height and conductor-radical polynomials are stored as literal factored
integer data and then cross-validated against the minimal-model pipeline,
so a transcription slip and an implementation slip cannot mask each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from szpirolab.bounds import height_of_minimal, szpiro_exponent
from szpirolab.families import model_coefficients
from szpirolab.intarith import (
    FactorBudgetError,
    factorize,
    is_squarefree,
    radical,
)
from szpirolab.reduction import minimal_model, tate_local
from szpirolab.weierstrass import WeierstrassModel, compute_invariants

__all__ = [
    "SHARP_FAMILIES",
    "SharpFamilySpec",
    "SharpnessRecord",
    "ConsistencyReport",
    "build_FT",
    "convergence_scan",
    "degree_limit_check",
    "fit_intercept",
    "sharp_polynomials",
    "sieve_ST",
    "verify_sharp_consistency",
]


def _poly(coeffs):
    """Evaluate-by-Horner closure over low-to-high integer coefficients."""
    rev = tuple(reversed(coeffs))

    def ev(n):
        acc = 0
        for c in rev:
            acc = acc * n + c
        return acc

    ev.coeffs = tuple(coeffs)
    ev.degree = len(coeffs) - 1
    return ev


@dataclass(frozen=True)
class SharpFamilySpec:
    """Static data for one sharpness sequence F_T(n)."""

    name: str
    # Family parameters (A, B[, D]) as coefficient tuples in n; None for C1,
    # whose model is written out directly.
    A: tuple | None
    B: tuple | None
    D: tuple | None
    w_const: int | None  # minimal-model rescaling; None means |32 n|
    height_factors: tuple  # ((coeffs, exponent), ...): H = prod |P(n)|^e
    f_factors: tuple  # (coeffs, ...): f = prod P(n), signed

    def w(self, n: int) -> int:
        return abs(32 * n) if self.w_const is None else self.w_const

    def height_value(self, n: int) -> int:
        out = 1
        for coeffs, e in self.height_factors:
            out *= abs(_poly(coeffs)(n)) ** e
        return out

    def f_value(self, n: int) -> int:
        out = 1
        for coeffs in self.f_factors:
            out *= _poly(coeffs)(n)
        return out

    def f_factor_values(self, n: int) -> list[int]:
        return [_poly(coeffs)(n) for coeffs in self.f_factors]

    @property
    def height_degree(self) -> int:
        return sum((len(c) - 1) * e for c, e in self.height_factors)

    @property
    def f_degree(self) -> int:
        return sum(len(c) - 1 for c in self.f_factors)


SHARP_FAMILIES: dict[str, SharpFamilySpec] = {
    s.name: s
    for s in (
        SharpFamilySpec(
            "C1", None, None, None, 1,
            (((48, 144), 3),),
            ((7, 12), (13, 60, 144)),
        ),
        SharpFamilySpec(
            "C2", (-1,), (8,), (0, 1), 2,
            (((1, 192), 3),),
            ((0, 1), (-1, 64)),
        ),
        SharpFamilySpec(
            "C3", (1,), (0, 1), None, 1,
            (((1, -36, 216), 2),),
            ((0, 1), (-1, 27)),
        ),
        SharpFamilySpec(
            "C4", (0, 0, 256), (-1, 0, 4), None, None,
            (((1, 0, -264, 0, 5136), 3),),
            ((0, 1), (-1, 2), (1, 2), (-1, 0, 20)),
        ),
        SharpFamilySpec(
            "C5", (1, 2), (0, 1), None, 1,
            (((1, 26, 206, 526, 421), 2), ((1, 4, 5), 2)),
            ((0, 1), (1, 2), (1, 15, 25)),
        ),
        SharpFamilySpec(
            "C6", (1, 3), (0, 1), None, 1,
            (((1, 18, 84, 120), 3), ((1, 6), 3)),
            ((0, 1), (1, 12), (1, 3), (1, 4)),
        ),
        SharpFamilySpec(
            "C7", (1, 3), (0, 1), None, 1,
            (
                (
                    (1, 42, 777, 8414, 59682, 293286, 1027173, 2590434,
                     4680102, 5920782, 4989285, 2519622, 577801),
                    2,
                ),
            ),
            ((0, 1), (1, 2), (1, 3), (1, 14, 49, 49)),
        ),
        SharpFamilySpec(
            "C8", (1, 4), (0, 1), None, 1,
            (
                ((-1, -16, -96, -224, 184, 2272, 5424, 5984, 2696), 2),
                ((-1, -8, -16, 16, 56), 2),
            ),
            ((0, 1), (1, 4), (1, 2), (1, 3), (-1, 0, 8)),
        ),
        SharpFamilySpec(
            "C9", (1, 2), (0, 1), None, 1,
            (
                (
                    (1, 36, 594, 5994, 41607, 211626, 819423, 2474496,
                     5916807, 11299356, 17291556, 21173562, 20613420,
                     15760494, 9272961, 4061502, 1250883, 242514, 22329),
                    2,
                ),
            ),
            ((0, 1), (1, 1), (1, 2), (1, 3, 3), (1, 9, 18, 9)),
        ),
        SharpFamilySpec(
            "C10", (1, 4), (0, 1), None, 1,
            (
                (
                    (1, 40, 720, 7720, 54960, 273840, 979520, 2534880,
                     4710480, 6129200, 5299680, 2733440, 635920),
                    3,
                ),
            ),
            ((0, 1), (1, 2), (1, 4), (1, 3), (1, 10, 20), (1, 5, 5)),
        ),
        SharpFamilySpec(
            "C12", (1, 6), (0, 1), None, 1,
            (
                (
                    (1, 54, 1332, 19836, 198498, 1405032, 7205496, 26936592,
                     72709428, 137824296, 173452752, 129338064, 42787896),
                    3,
                ),
                ((1, 18, 120, 348, 366), 3),
            ),
            ((0, 1), (1, 6), (1, 4), (1, 5), (1, 6, 6), (1, 10, 26), (1, 9, 21)),
        ),
        SharpFamilySpec(
            "C2xC2", (0, 16), (1, 4), (1,), 2,
            (((1, -8, 208), 3),),
            ((0, 1), (1, 4), (-1, 12)),
        ),
        SharpFamilySpec(
            "C2xC4", (1, 2), (0, 1), None, 1,
            (((1, 24, 200, 672, 976), 3),),
            ((0, 1), (1, 2), (1, 10), (1, 6)),
        ),
        SharpFamilySpec(
            "C2xC6", (3, 8), (-1,), None, 16,
            (
                ((1333, 21078, 138720, 486360, 958080, 1005408, 439104), 3),
                ((13, 66, 84), 3),
            ),
            ((1, 3), (5, 12), (7, 18), (1, 2), (2, 5), (3, 8)),
        ),
        SharpFamilySpec(
            "C2xC8", (0, 4), (1, 1), None, 64,
            (
                (
                    (1, 32, 472, 4256, 26220, 116768, 387560, 973088,
                     1853894, 2658400, 2812328, 2129632, 1140780, 511840,
                     301720, 180064, 51361),
                    3,
                ),
            ),
            ((0, 1), (1, 1), (1, 2), (1, 3), (-1, -2, 1), (1, 6, 7), (1, 4, 5)),
        ),
    )
}


def build_FT(T: str, n: int) -> WeierstrassModel:
    """The n-th member of the sharpness sequence for T."""
    spec = SHARP_FAMILIES[T]
    if T == "C1":
        m = WeierstrassModel(0, 0, 1, 3 * n + 1, 0)
    else:
        args = [_poly(spec.A)(n), _poly(spec.B)(n)]
        if spec.D is not None:
            args.append(_poly(spec.D)(n))
        m = WeierstrassModel(*model_coefficients(T, tuple(args)))
    if compute_invariants(m).delta == 0:
        raise ValueError(f"F_{T}({n}) is degenerate (discriminant zero)")
    return m


def sharp_polynomials(T: str, n: int) -> tuple[int, int]:
    """(H_T(n), f_T(n)) from the stored table data; H is valid for |n| > 1."""
    spec = SHARP_FAMILIES[T]
    return spec.height_value(n), spec.f_value(n)


def degree_limit_check(T: str) -> bool:
    """deg H / deg f must equal the sharp exponent l exactly."""
    spec = SHARP_FAMILIES[T]
    return Fraction(spec.height_degree, spec.f_degree) == szpiro_exponent(T).value


@dataclass(frozen=True)
class ConsistencyReport:
    T: str
    n: int
    w: int
    findings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def verify_sharp_consistency(T: str, n: int) -> ConsistencyReport:
    """Cross-validate the stored table data against the exact pipeline.

    Checks, for |n| > 1: the model-to-minimal discriminant ratio is w^12;
    the minimal naive height equals H(n); rad(delta_min) = rad(f(n));
    the curve is semistable everywhere; and N = |f(n)| when f(n) is
    squarefree.  Each failure becomes a named finding.
    """
    if abs(n) <= 1:
        raise ValueError("consistency checks require |n| > 1")
    spec = SHARP_FAMILIES[T]
    findings: list[str] = []
    model = build_FT(T, n)
    mm = minimal_model(model)
    delta = compute_invariants(model).delta

    w_expected = spec.w(n)
    ratio = delta // mm.delta_min
    if delta != mm.delta_min * w_expected**12 or ratio != w_expected**12:
        findings.append(
            f"discriminant ratio {ratio} is not w^12 = {w_expected}^12 for F_{T}({n})"
        )

    H_expected, f_expected = sharp_polynomials(T, n)
    height = height_of_minimal(mm)
    if height != H_expected:
        findings.append(
            f"naive height {height} != table value {H_expected} for F_{T}({n})"
        )

    if radical(mm.delta_min) != radical(f_expected):
        findings.append(
            f"rad(delta_min) != rad(f(n)) for F_{T}({n}): "
            f"{radical(mm.delta_min)} vs {radical(f_expected)}"
        )

    c4_min = mm.invariants.c4
    bad = [p for p, _ in factorize(mm.delta_min) if c4_min % p == 0]
    if bad:
        findings.append(f"F_{T}({n}) has additive reduction at {bad}")

    if is_squarefree(f_expected):
        N = 1
        for p, _ in factorize(mm.delta_min):
            N *= p ** tate_local(mm.minimal, p).fp
        if N != abs(f_expected):
            findings.append(
                f"conductor {N} != |f(n)| = {abs(f_expected)} for squarefree f, F_{T}({n})"
            )

    return ConsistencyReport(T, n, w_expected, tuple(findings))


def _f_is_squarefree(spec: SharpFamilySpec, n: int) -> bool:
    """Squarefree test of f(n) through its factored form.

    The product is squarefree iff the factor values are pairwise coprime
    and each is individually squarefree; factoring the small pieces avoids
    ever factoring the full product.
    """
    values = spec.f_factor_values(n)
    if any(v == 0 for v in values):
        return False
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if math.gcd(values[i], values[j]) != 1:
                return False
    return all(abs(v) == 1 or is_squarefree(v) for v in values)


def sieve_ST(T: str, n_lo: int, n_hi: int) -> list[int]:
    """All n in [n_lo, n_hi] with |n| > 1 and f_T(n) squarefree."""
    if n_lo > n_hi:
        raise ValueError("empty range")
    spec = SHARP_FAMILIES[T]
    return [
        n
        for n in range(n_lo, n_hi + 1)
        if abs(n) > 1 and _f_is_squarefree(spec, n)
    ]


@dataclass(frozen=True)
class SharpnessRecord:
    T: str
    n: int
    model: WeierstrassModel
    height: int
    f_value: int
    squarefree: bool
    conductor: int | None  # |f| when squarefree, else None
    sigma_m: float

    def as_dict(self) -> dict:
        return {
            "T": self.T,
            "n": self.n,
            "model": [str(a) for a in self.model.coefficients()],
            "height": str(self.height),
            "f": str(self.f_value),
            "squarefree": self.squarefree,
            "conductor": None if self.conductor is None else str(self.conductor),
            "sigma_m": self.sigma_m,
        }


def fit_intercept(points: list[tuple[float, float]]) -> tuple[float, float]:
    """(intercept, slope) of the least-squares line through (x, y) points."""
    n = len(points)
    if n < 2:
        raise ValueError("need at least two points to fit")
    sx = sum(x for x, _ in points)
    sy = sum(y for _, y in points)
    sxx = sum(x * x for x, _ in points)
    sxy = sum(x * y for x, y in points)
    denom = n * sxx - sx * sx
    if denom == 0:
        raise ValueError("degenerate abscissae")
    slope = (n * sxy - sx * sy) / denom
    intercept = (sy - slope * sx) / n
    return intercept, slope


@dataclass(frozen=True)
class ConvergenceScan:
    T: str
    records: tuple[SharpnessRecord, ...]
    intercept: float | None
    slope: float | None
    strictly_above: bool  # sigma_m > l for every record, checked exactly
    sieve_hits: int
    budget_skipped: tuple[int, ...]  # n whose factoring exceeded the budget
    warning: str | None


def _sample_values(n_min: int, n_max: int, samples: int | None) -> list[int]:
    if samples is None or samples >= n_max - n_min + 1:
        return list(range(n_min, n_max + 1))
    # Log-spaced, deduplicated, deterministic.
    lo, hi = math.log(n_min), math.log(n_max)
    out = sorted(
        {round(math.exp(lo + (hi - lo) * i / (samples - 1))) for i in range(samples)}
    )
    return [n for n in out if n_min <= n <= n_max]


def convergence_scan(
    T: str,
    n_max: int,
    n_min: int = 2,
    samples: int | None = None,
    skip_budget_errors: bool = True,
) -> ConvergenceScan:
    """Ratio records along the squarefree set, plus the 1/log fit.

    The height comes from the actual minimal model (not the stored table,
    which is cross-checked separately) and the conductor is |f(n)|, valid
    on the squarefree set where the curve is semistable.  sigma_m is fitted
    against 1/log|f(n)|; the intercept estimates the limiting ratio, since
    the convergence itself is logarithmic and never lands.  With samples
    set, candidate n are log-spaced across [n_min, n_max]; membership and
    all comparisons stay exact.
    """
    if n_max < 10:
        raise ValueError("n_max must be >= 10")
    spec = SHARP_FAMILIES[T]
    exp = szpiro_exponent(T)
    records: list[SharpnessRecord] = []
    strictly_above = True
    budget_skipped: list[int] = []
    for n in _sample_values(max(n_min, 2), n_max, samples):
        try:
            if not _f_is_squarefree(spec, n):
                continue
            model = build_FT(T, n)
            H = height_of_minimal(minimal_model(model))
        except FactorBudgetError:
            if skip_budget_errors:
                budget_skipped.append(n)
                continue
            raise
        _, f = sharp_polynomials(T, n)
        sigma = math.log(H) / math.log(abs(f))
        if not H**exp.q > abs(f) ** exp.p:
            strictly_above = False
        records.append(SharpnessRecord(T, n, model, H, f, True, abs(f), sigma))
    warning = None
    intercept = slope = None
    if len(records) < 10:
        warning = f"only {len(records)} sieve hits in range; fit skipped"
    else:
        pts = [(1.0 / math.log(abs(r.f_value)), r.sigma_m) for r in records]
        intercept, slope = fit_intercept(pts)
    return ConvergenceScan(
        T,
        tuple(records),
        intercept,
        slope,
        strictly_above,
        len(records),
        tuple(budget_skipped),
        warning,
    )
