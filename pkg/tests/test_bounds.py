"""Heights, ratios, the quality of abc triples, and the phi machinery."""

import math
import random
from fractions import Fraction

import pytest

from szpirolab.bounds import (
    SzpiroExponent,
    abc_quality,
    all_phi_specs,
    exceeds,
    homogeneity_check,
    leading_dominance,
    naive_height,
    phi_eval,
    phi_scan,
    phi_spec,
    szpiro_exponent,
    szpiro_ratio,
    verify_height_bound,
)
from szpirolab.families import ValidationError, build_model, validate_params
from szpirolab.sharpness import build_FT
from szpirolab.weierstrass import SingularModelError, WeierstrassModel

C5_11 = WeierstrassModel(0, -1, -1, 0, 0)
CURVE_11A1 = WeierstrassModel(0, -1, 1, -10, -20)


class TestExponentTable:
    def test_values(self):
        expected = {
            "C1": Fraction(1),
            "C2": Fraction(3, 2),
            "C3": Fraction(2),
            "C3_0": Fraction(2),
            "C2xC2": Fraction(2),
            "C4": Fraction(12, 5),
            "C5": Fraction(3),
            "C6": Fraction(3),
            "C2xC4": Fraction(3),
            "C7": Fraction(4),
            "C8": Fraction(4),
            "C2xC6": Fraction(4),
            "C9": Fraction(9, 2),
            "C10": Fraction(9, 2),
            "C12": Fraction(24, 5),
            "C2xC8": Fraction(24, 5),
        }
        for name, l in expected.items():
            exp = szpiro_exponent(name)
            assert exp.value == l
            assert math.gcd(exp.p, exp.q) == 1


class TestHeight:
    def test_c5(self):
        assert naive_height(C5_11) == max(16**3, 152**2) == 23104

    def test_c3_0(self):
        # c4 = 0 and c6 = -216 a^2, so the height is (216 a^2)^2
        assert naive_height(WeierstrassModel(0, 0, 1, 0, 0)) == 216**2 == 46656
        assert naive_height(build_model(validate_params("C3_0", 3))) == (216 * 9) ** 2

    def test_sharp_c2_height(self):
        for n in (2, 5, -4):
            assert naive_height(build_FT("C2", n)) == abs(192 * n + 1) ** 3

    def test_singular_rejected(self):
        with pytest.raises(SingularModelError):
            naive_height(WeierstrassModel(0, 0, 0, 0, 0))


class TestRatio:
    def test_c5(self):
        sigma = szpiro_ratio(C5_11)
        assert abs(sigma - math.log(23104) / math.log(11)) < 1e-12
        assert round(sigma, 4) == 4.1902

    def test_11a1(self):
        sigma = szpiro_ratio(CURVE_11A1)
        assert abs(sigma - 2 * math.log(20008) / math.log(11)) < 1e-12
        assert round(sigma, 4) == 8.2605

    def test_always_above_one(self):
        rng = random.Random(3)
        checked = 0
        while checked < 25:
            coeffs = [rng.randrange(-9, 10) for _ in range(5)]
            m = WeierstrassModel(*coeffs)
            try:
                assert szpiro_ratio(m) > 1
                assert exceeds(m, SzpiroExponent(1, 1))
            except SingularModelError:
                continue
            checked += 1


class TestExceeds:
    def test_c5_against_three(self):
        assert exceeds(C5_11, SzpiroExponent(3, 1))

    def test_c3_0_against_two(self):
        m = WeierstrassModel(0, 0, 1, 0, 0)
        assert naive_height(m) == 46656 > 27**2
        assert exceeds(m, SzpiroExponent(2, 1))

    def test_agrees_with_float_away_from_threshold(self):
        rng = random.Random(21)
        for name in ("C5", "C6", "C8"):
            done = 0
            while done < 10:
                a = rng.randrange(1, 25)
                b = rng.randrange(-25, 25)
                try:
                    inst = validate_params(name, a, b)
                except ValidationError:
                    continue
                m = build_model(inst)
                sigma = szpiro_ratio(m)
                for l in (Fraction(3, 2), Fraction(2), Fraction(3), Fraction(9, 2)):
                    if abs(sigma - float(l)) > 1e-9:
                        assert exceeds(
                            m, SzpiroExponent(l.numerator, l.denominator)
                        ) == (sigma > float(l))
                done += 1


class TestAbcQuality:
    def test_trivial(self):
        assert abc_quality(1, 1, 2) == 1.0

    def test_known(self):
        assert abs(abc_quality(1, 8, 9) - math.log(9) / math.log(6)) < 1e-12
        assert abs(abc_quality(1, 2, 3) - math.log(3) / math.log(6)) < 1e-12

    def test_preconditions(self):
        with pytest.raises(ValueError, match="a \\+ b = c"):
            abc_quality(1, 2, 4)
        with pytest.raises(ValueError, match="gcd"):
            abc_quality(2, 2, 4)
        with pytest.raises(ValueError, match="positive"):
            abc_quality(-1, 3, 2)


class TestPhi:
    def test_branch_count(self):
        specs = all_phi_specs()
        assert len(specs) == 28
        by_family = {}
        for s in specs:
            by_family.setdefault(s.family.name, []).append(s.u_key)
        assert sorted(by_family["C4"]) == ["2c", "c"]
        assert sorted(by_family["C2"]) == [1, 2, 4]
        assert by_family["C3"] == ["c2d"]

    def test_phi_c5_at_zero(self):
        val = phi_eval(phi_spec("C5", 1), 0)
        assert val.sign == 1 and val.exact == 1

    def test_prefactors(self):
        assert phi_spec("C3", "c2d").prefactor == 1
        assert phi_spec("C4", "c").prefactor == 1
        assert phi_spec("C4", "2c").prefactor == Fraction(1, 2**12)
        assert phi_spec("C2", 4).prefactor == Fraction(1, 4**12)

    def test_invalid(self):
        with pytest.raises(ValueError):
            phi_spec("C5", 2)
        with pytest.raises(ValueError):
            phi_spec("C3_0", 1)

    def test_small_grids_nonnegative(self):
        for spec in all_phi_specs():
            res = phi_scan(spec, denominator=8, x_range=3)
            assert res.violations == (), spec.label
            assert res.zeros == (), spec.label

    def test_c2xc4_minimum_shrinks_with_refinement(self):
        spec = phi_spec("C2xC4", 2)
        coarse = phi_scan(spec, 64, 2)
        fine = phi_scan(spec, 1024, 2)
        assert coarse.violations == () and fine.violations == ()
        # exact rationals here because l = 3 is an integer
        assert 0 < fine.min_exact < coarse.min_exact
        assert abs(float(fine.argmin) - (1 - math.sqrt(5)) / 8) < 0.01 or abs(
            float(fine.argmin) - (1 + math.sqrt(5)) / 8
        ) < 0.01 or abs(float(fine.argmin) + (3 - math.sqrt(5)) / 8) < 0.01 or abs(
            float(fine.argmin) + (3 + math.sqrt(5)) / 8
        ) < 0.01

    def test_parallel_scan_matches_serial(self):
        spec = phi_spec("C6", 2)
        serial = phi_scan(spec, 16, 4, jobs=1)
        parallel = phi_scan(spec, 16, 4, jobs=2)
        assert serial.argmin == parallel.argmin
        assert serial.min_exact == parallel.min_exact
        assert serial.violations == parallel.violations

    def test_tail_dominance_all_branches(self):
        for spec in all_phi_specs():
            rep = leading_dominance(spec)
            assert rep.dominant, spec.label
            # both sides cover the same tail degree or the max side wins on degree
            assert rep.max_side_degree >= rep.bound_side_degree


class TestHomogeneity:
    def test_spec_examples(self):
        assert homogeneity_check(validate_params("C5", 2, 3))
        assert homogeneity_check(validate_params("C2", 3, 2, 5))
        # a = 24 with decomposition (2,1,3), b = 5: the (cde) scaling branch
        inst = validate_params("C3", 24, 5)
        assert inst.decomposition == (2, 1, 3)
        assert homogeneity_check(inst)

    def test_alpha_scaling_explicitly(self):
        # alpha(2,3) = 2^4 alpha(1, 3/2) for the weight-12 family with 5-torsion
        from szpirolab.bounds import _alpha_beta_at

        a24, _ = _alpha_beta_at("C5", (2, 3))
        a_sub, _ = _alpha_beta_at("C5", (1, Fraction(3, 2)))
        assert Fraction(a24) == 16 * a_sub

    def test_c3_0_has_none(self):
        with pytest.raises(ValueError):
            homogeneity_check(validate_params("C3_0", 1))

    def test_zero_leading_parameter_rejected(self):
        inst = validate_params("C2", 0, 1, 2)
        with pytest.raises(ValueError, match="nonzero"):
            homogeneity_check(inst)


class TestHeightBound:
    def test_samples(self):
        assert verify_height_bound(validate_params("C5", 1, 1))
        assert verify_height_bound(validate_params("C2", 1, 2, 3))
        assert verify_height_bound(validate_params("C3", 24, 1))
        assert verify_height_bound(validate_params("C3_0", 7))

    def test_c2xc6_defect_class_still_holds(self):
        # The conductor bound breaks for this class; the height bound does not.
        assert verify_height_bound(validate_params("C2xC6", 1, 2))
