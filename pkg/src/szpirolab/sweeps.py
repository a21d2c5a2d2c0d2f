"""Batch verification sweeps over family parameter spaces.

One pass per instance runs the whole pipeline (minimal model, conductor,
bound polynomial, height inequality, torsion certification) and returns
findings; a sweep aggregates them.  Instances are enumerated
deterministically and chunks are merged in input order, so output never
depends on worker scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from szpirolab.bounds import szpiro_exponent, verify_height_bound
from szpirolab.families import (
    FamilyInstance,
    PaperContractViolation,
    ValidationError,
    build_model,
    delta_eval,
    recover_uT,
    validate_params,
)
from szpirolab.intarith import factorize, is_squarefree
from szpirolab.reduction import minimal_model, tate_local
from szpirolab.weierstrass import (
    AffinePoint,
    full_two_torsion,
    point_order,
)

__all__ = [
    "ALL_CHECKS",
    "InstanceReport",
    "SweepConfig",
    "SweepSummary",
    "check_instance",
    "default_jobs",
    "iter_param_tuples",
    "run_config",
    "run_sweep",
]

_ORIGIN = AffinePoint(Fraction(0), Fraction(0))

_FP_CAPS = {2: 8, 3: 5}

ALL_CHECKS = ("bounds", "height", "torsion")


def default_jobs() -> int:
    env = os.environ.get("SZPIROLAB_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class SweepConfig:
    """A batch-verification request: which families, how far, how wide."""

    family: str = "all"  # a family name or "all"
    bound: int = 30
    c30_bound: int = 100
    checks: tuple[str, ...] = ALL_CHECKS
    jobs: int = 1
    output_format: str = "json-lines"  # or "csv"
    output_path: str | None = None

    def __post_init__(self):
        if self.bound < 1 or self.c30_bound < 1:
            raise ValueError("parameter bounds must be positive")
        if self.jobs < 1:
            raise ValueError("worker count must be >= 1")
        unknown = set(self.checks) - set(ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        if self.output_format not in ("json-lines", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def family_names(self) -> list[str]:
        from szpirolab.families import FAMILIES

        return list(FAMILIES) if self.family == "all" else [self.family]


@dataclass(frozen=True)
class InstanceReport:
    family: str
    params: tuple[int, ...]
    u: int
    conductor: int
    delta_bound: int
    height: int
    sigma_m: float
    findings: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def check_instance(instance: FamilyInstance, checks=ALL_CHECKS) -> InstanceReport:
    """Run the selected published checks on one validated instance.

    "bounds": admissible u set, per-prime and global conductor bounds, the
    exact ratio inequality height^q > N^p, and the conductor exponent caps.
    "height": the strict height-vs-bound inequality.
    "torsion": the expected order of (0, 0), plus full rational 2-torsion
    where the torsion structure demands it.
    """
    findings: list[str] = []
    name = instance.family.name
    fam = instance.family
    model = build_model(instance)
    mm = minimal_model(model)
    minv = mm.invariants
    height = max(abs(minv.c4**3), minv.c6**2)

    if name == "C3_0":
        u = mm.scaling_u
        a = instance.params[0]
        bound = 27 * a * a if "bounds" in checks else 0
        if u != 1:
            findings.append(f"{instance}: expected already-minimal model, got u={u}")
    else:
        try:
            u = recover_uT(instance, mm)
        except PaperContractViolation as exc:
            findings.append(str(exc))
            u = mm.scaling_u
        bound = 0
        if "bounds" in checks:
            try:
                bound = abs(delta_eval(instance, u))
            except (ValueError, PaperContractViolation) as exc:
                findings.append(f"{instance}: {exc}")

    N = 1
    for p, _ in factorize(mm.delta_min):
        if minv.c4 % p != 0:
            fp = 1
        else:
            data = tate_local(mm.minimal, p)
            fp = data.fp
            if fp <= 1:
                findings.append(
                    f"{instance}: additive prime {p} got exponent {fp}"
                )
        cap = _FP_CAPS.get(p, 2)
        if fp > cap:
            findings.append(f"{instance}: f_{p} = {fp} exceeds cap {cap}")
        N *= p**fp
        if bound and bound % p ** fp != 0:
            vd = 0
            b = bound
            while b % p == 0:
                b //= p
                vd += 1
            findings.append(
                f"{instance}: v_{p}(N) = {fp} > v_{p}(delta) = {vd}"
            )

    if bound and N > bound:
        findings.append(f"{instance}: conductor {N} > bound {bound}")

    exp = szpiro_exponent(name)
    if not height**exp.q > N**exp.p:
        findings.append(
            f"{instance}: height^{exp.q} <= N^{exp.p} (ratio bound violated)"
        )

    if "height" in checks and name != "C3_0" and not verify_height_bound(instance):
        findings.append(f"{instance}: |delta|^l >= u^-12 max(|alpha^3|, beta^2)")

    if "torsion" in checks:
        order = point_order(model, _ORIGIN)
        if order != fam.point_order:
            findings.append(
                f"{instance}: (0,0) has order {order}, expected {fam.point_order}"
            )
        if fam.has_full_two_torsion and len(full_two_torsion(model)) != 4:
            findings.append(f"{instance}: full rational 2-torsion not found")

    sigma = math.log(height) / math.log(N) if N > 1 else float("inf")
    return InstanceReport(
        name, instance.params, u, N, bound, height, sigma, tuple(findings)
    )


# ---------------------------------------------------------------------------
# Enumeration of the valid parameter space within a box.


def _squarefree_range(bound: int, include_one: bool = False):
    lo = 1 if include_one else 2
    vals = [d for d in range(lo, bound + 1) if is_squarefree(d)]
    return [-d for d in range(1, bound + 1) if is_squarefree(d)] + vals


def iter_param_tuples(name: str, bound: int):
    """Raw candidate tuples in the box; validity is decided by
    validate_params so the two never drift apart."""
    if name == "C3_0":
        for a in range(1, bound + 1):
            yield (a,)
    elif name == "C2":
        sq = sorted(_squarefree_range(bound))
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                if b == 0:
                    continue
                for d in sq:
                    yield (a, b, d)
    elif name == "C2xC2":
        sq = sorted(_squarefree_range(bound, include_one=True))
        for a in range(-bound, bound + 1):
            if a == 0 or a % 2 != 0:
                continue
            for b in range(-bound, bound + 1):
                if math.gcd(a, b) != 1:
                    continue
                for d in sq:
                    yield (a, b, d)
    else:
        for a in range(1, bound + 1):
            for b in range(-bound, bound + 1):
                if math.gcd(a, b) != 1:
                    continue
                yield (a, b)


def instances_in_box(name: str, bound: int):
    """All valid instances with parameters in the box."""
    for params in iter_param_tuples(name, bound):
        try:
            yield validate_params(name, *params)
        except ValidationError:
            continue


@dataclass(frozen=True)
class SweepSummary:
    family: str
    bound: int
    checked: int
    findings: tuple[str, ...]
    max_sigma: float
    min_sigma: float

    @property
    def ok(self) -> bool:
        return not self.findings


def _check_chunk(name: str, chunk: list[tuple[int, ...]], checks=ALL_CHECKS):
    checked = 0
    findings: list[str] = []
    max_sigma, min_sigma = -math.inf, math.inf
    for params in chunk:
        try:
            inst = validate_params(name, *params)
        except ValidationError:
            continue
        rep = check_instance(inst, checks)
        checked += 1
        findings.extend(rep.findings)
        max_sigma = max(max_sigma, rep.sigma_m)
        min_sigma = min(min_sigma, rep.sigma_m)
    return checked, findings, max_sigma, min_sigma


def _check_chunk_star(args):
    return _check_chunk(*args)


def run_sweep(
    name: str,
    bound: int,
    jobs: int = 1,
    c30_bound: int | None = None,
    checks=ALL_CHECKS,
) -> SweepSummary:
    """Verify every valid instance in the box; returns aggregate findings.

    c30_bound overrides the box for the cubefree one-parameter family when
    sweeping "all" with a deeper range there.
    """
    if name == "C3_0" and c30_bound is not None:
        bound_used = c30_bound
    else:
        bound_used = bound
    tuples = list(iter_param_tuples(name, bound_used))
    if jobs <= 1 or len(tuples) < 512:
        parts = [_check_chunk(name, tuples, checks)]
    else:
        step = -(-len(tuples) // (jobs * 8))
        chunks = [tuples[i : i + step] for i in range(0, len(tuples), step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(_check_chunk_star, [(name, c, checks) for c in chunks])
            )
    checked = sum(p[0] for p in parts)
    findings: list[str] = []
    for p in parts:
        findings.extend(p[1])
    max_sigma = max((p[2] for p in parts if p[0]), default=-math.inf)
    min_sigma = min((p[3] for p in parts if p[0]), default=math.inf)
    return SweepSummary(name, bound_used, checked, tuple(findings), max_sigma, min_sigma)


def run_config(config: SweepConfig) -> list[SweepSummary]:
    """Run the sweep described by a config, one summary per family."""
    return [
        run_sweep(
            name,
            config.bound,
            jobs=config.jobs,
            c30_bound=config.c30_bound,
            checks=config.checks,
        )
        for name in config.family_names()
    ]
