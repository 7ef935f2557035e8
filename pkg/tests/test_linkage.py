import dataclasses
import math

import pytest

from chedra.errors import (
    DegenerateTip,
    InvariantError,
    MixedCases,
    RadicandNegative,
    SingularDenominator,
)
from chedra.geometry import profile_point
from chedra.linkage import (
    CaseLabel,
    LinkageSpec,
    Sublinkage,
    classify,
    compatibility_coeffs,
    extend_sublinkage,
    family_tip_height,
    flexion_range,
    interval_containing,
    residual_w,
    select_branch,
    tip_b,
)
from conftest import draw_initial, draw_reference_parameter

ROOT2 = math.sqrt(2.0)


class TestTipHeight:
    def test_scaling_dataset(self, scaling_initial):
        assert abs(tip_b(2.0, scaling_initial, "+") - 2 * ROOT2) < 1e-12

    def test_collineation_dataset(self, collineation_initial):
        b = tip_b(2.0, collineation_initial, "+")
        assert abs(b + 1.5) < 1e-12
        # the defining distance: |B0 - (0,0,b)| = u0
        p = profile_point(2.0, 2.0, 1.0)
        b0 = (-p.d, -p.z)
        assert abs(math.hypot(b0[0], b0[1] - b) - 1.0) < 1e-12

    def test_coincident_outer_tips(self):
        # s = t and v = 1 force the far tip onto the near one; the minus
        # branch would put it at the middle tip, which is excluded
        initial = Sublinkage(s=2.0, t=2.0, u=2.0, v=1.0)
        assert abs(tip_b(3.0, initial, "+") - 3.0) < 1e-12
        with pytest.raises(DegenerateTip):
            tip_b(3.0, initial, "-")

    def test_radicand_negative(self, perspectivity_initial):
        with pytest.raises(RadicandNegative):
            tip_b(2.0, perspectivity_initial, "+")

    def test_closed_form_scaling_family(self, rng):
        # in the regime where the profile point sits between the tip heights,
        # the plus branch is the scaling root v0 * a
        checked = 0
        while checked < 100:
            initial = draw_initial(rng, "1a")
            a = draw_reference_parameter(rng, initial, table_regime=True)
            if a is None:
                continue
            checked += 1
            for _ in range(10):
                lo = math.sqrt(abs(initial.s ** 2 - initial.t ** 2))
                lo = max(lo, abs(initial.s - initial.t))
                hi = initial.s + initial.t
                x = rng.uniform(lo + 1e-2 * (hi - lo), hi - 1e-2 * (hi - lo))
                b = tip_b(x, initial, "+")
                assert abs(b - initial.v * x) <= 1e-12 * max(abs(b), 1.0)


class TestResidual:
    def test_copy_of_initial_vanishes(self, scaling_initial, rng):
        other = dataclasses.replace(scaling_initial, phi=0.7)
        for a in rng.uniform(0.5, 2.7, 10):
            assert abs(residual_w(a, scaling_initial, other, "+")) < 1e-12

    def test_generated_scaling_vanishes(self, scaling_initial):
        other = extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0, phi=0.5)
        for a in (1.5, 2.0, 2.5):
            assert abs(residual_w(a, scaling_initial, other, "+")) < 1e-12

    def test_perturbation_is_visible(self, scaling_initial):
        other = extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0, phi=0.5)
        bad = dataclasses.replace(other, u=other.u + 1e-3)
        assert abs(residual_w(2.0, scaling_initial, bad, "+")) > 1e-3


class TestCoefficients:
    def test_copy_gives_zero(self, scaling_initial):
        other = dataclasses.replace(scaling_initial, phi=0.4)
        assert compatibility_coeffs(scaling_initial, other).max_normalized() < 1e-14

    def test_perspectivity_dataset(self, perspectivity_initial):
        other = Sublinkage(s=2.0, t=math.sqrt(7.0), u=2 * math.sqrt(7.0), v=3.0, phi=0.3)
        triple = compatibility_coeffs(perspectivity_initial, other)
        assert max(abs(triple.a4), abs(triple.a2), abs(triple.a0)) < 1e-10
        assert triple.max_normalized() < 1e-13

    def test_incompatible_data_rejected(self, rng):
        # two distinct parameter values give inconsistent tip heights, so the
        # quartic cannot vanish identically
        for _ in range(30):
            initial = draw_initial(rng, "3")
            other = Sublinkage(*rng.uniform(0.6, 2.4, 3), v=rng.uniform(0.4, 2.0))
            deficits = compatibility_coeffs(initial, other).max_normalized()
            cls = classify(LinkageSpec(initial, (dataclasses.replace(other, phi=1.0),),
                                       "+", 1.0))
            if cls.flexible:
                # the random draw accidentally landed on a family; skip
                continue
            assert cls.max_residual > 1e-6 or deficits > 1e-6

    def test_homogeneity(self, rng):
        # scaling all bar lengths by lam multiplies the three coefficients by
        # lam^2, lam^4, lam^6 and leaves the normalized values unchanged
        initial = draw_initial(rng, "3")
        other = extend_sublinkage(initial, "3", s=1.7, phi=0.5)
        lam = 1.7
        scaled_i = Sublinkage(s=lam * initial.s, t=lam * initial.t,
                              u=lam * initial.u, v=initial.v)
        scaled_o = Sublinkage(s=lam * other.s, t=lam * other.t,
                              u=lam * other.u, v=other.v, phi=other.phi)
        base = compatibility_coeffs(initial, other)
        scaled = compatibility_coeffs(scaled_i, scaled_o)
        assert abs(scaled.scale4 - lam ** 2 * base.scale4) < 1e-9 * scaled.scale4
        assert abs(scaled.scale2 - lam ** 4 * base.scale2) < 1e-9 * scaled.scale2
        assert abs(scaled.scale0 - lam ** 6 * base.scale0) < 1e-9 * scaled.scale0
        assert scaled.max_normalized() < 1e-13


class TestClassify:
    def test_scaling_patch(self, scaling_initial):
        others = tuple(extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0,
                                         phi=0.4 * j) for j in (1, 2))
        cls = classify(LinkageSpec(scaling_initial, others, "+", 2.0))
        assert cls.label is CaseLabel.SCALING_1A
        assert cls.branch == "+"

    def test_perspectivity_patch(self, perspectivity_initial):
        others = (extend_sublinkage(perspectivity_initial, "3", s=2.0, phi=0.3),)
        cls = classify(LinkageSpec(perspectivity_initial, others, "+", 2.95))
        assert cls.label is CaseLabel.PERSPECTIVITY_3
        assert not cls.case3_compatible

    def test_collineation_patch(self, collineation_initial):
        others = (extend_sublinkage(collineation_initial, "2a", s=3.0, t=2.0, phi=0.4),)
        cls = classify(LinkageSpec(collineation_initial, others, "+", 2.0))
        assert cls.label is CaseLabel.COLLINEATION_2A
        assert cls.branch == "+"

    def test_perturbation_flips_to_not_flexible(self, scaling_initial):
        other = extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0, phi=0.4)
        bad = dataclasses.replace(other, u=other.u * (1 + 1e-3))
        cls = classify(LinkageSpec(scaling_initial, (bad,), "+", 2.0))
        assert cls.label is CaseLabel.NOT_FLEXIBLE
        assert cls.max_residual > 1e-6

    def test_mixed_families_raise(self, collineation_initial):
        scaling_member = extend_sublinkage(collineation_initial, "1b", s=1.4, t=1.9,
                                           phi=0.3)
        collineation_member = extend_sublinkage(collineation_initial, "2a", s=3.0,
                                                t=2.0, phi=0.6)
        with pytest.raises(MixedCases):
            classify(LinkageSpec(collineation_initial,
                                 (scaling_member, collineation_member), "+", 2.0))

    def test_generated_label_round_trip(self, rng):
        for case in ("1a", "1b", "2a", "2b", "3"):
            done = 0
            while done < 10:
                initial = draw_initial(rng, case)
                a_ref = draw_reference_parameter(rng, initial)
                if a_ref is None:
                    continue
                try:
                    others = tuple(
                        extend_sublinkage(initial, case, s=rng.uniform(0.7, 2.4),
                                          t=None if case == "3" else rng.uniform(0.7, 2.4),
                                          phi=0.3 * (k + 1))
                        for k in range(2)
                    )
                except (RadicandNegative, SingularDenominator):
                    continue
                done += 1
                cls = classify(LinkageSpec(initial, others, "+", a_ref))
                assert cls.flexible
                assert case in {
                    CaseLabel.SCALING_1A: ("1a",), CaseLabel.SCALING_1B: ("1b",),
                    CaseLabel.COLLINEATION_2A: ("2a",), CaseLabel.COLLINEATION_2B: ("2b",),
                    CaseLabel.PERSPECTIVITY_3: ("3",),
                }.get(cls.label, ("1a", "1b", "2a", "2b", "3"))


class TestExtend:
    def test_scaling_dataset(self, scaling_initial):
        sub = extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0, phi=0.2)
        assert abs(sub.u - 2 * ROOT2) < 1e-12
        assert abs(sub.v - ROOT2) < 1e-12

    def test_collineation_dataset(self, collineation_initial):
        sub = extend_sublinkage(collineation_initial, "2a", s=3.0, t=math.sqrt(6.0),
                                phi=0.2)
        assert abs(sub.v + 1.0) < 1e-12
        assert abs(sub.u - math.sqrt(6.0)) < 1e-12

    def test_perspectivity_dataset(self, perspectivity_initial):
        sub = extend_sublinkage(perspectivity_initial, "3", s=2.0, phi=0.2)
        assert abs(sub.t - math.sqrt(7.0)) < 1e-12
        assert abs(sub.u - 2 * math.sqrt(7.0)) < 1e-12
        assert abs(sub.v - 3.0) < 1e-12

    def test_singular_denominator(self, collineation_initial):
        with pytest.raises(SingularDenominator):
            extend_sublinkage(collineation_initial, "2a", s=2.0, t=2.0, phi=0.2)

    def test_perspectivity_radicand(self, perspectivity_initial):
        with pytest.raises(RadicandNegative):
            extend_sublinkage(perspectivity_initial, "3", s=0.2, phi=0.2)

    def test_proportion_required(self, perspectivity_initial):
        with pytest.raises(InvariantError):
            extend_sublinkage(perspectivity_initial, "1a", s=1.0, t=1.0, phi=0.2)

    def test_intercept_proportion_propagates(self, rng):
        for case in ("1a", "1b", "2a", "2b"):
            done = 0
            while done < 25:
                initial = draw_initial(rng, case)
                try:
                    sub = extend_sublinkage(initial, case, s=rng.uniform(0.7, 2.4),
                                            t=rng.uniform(0.7, 2.4), phi=0.5)
                except (RadicandNegative, SingularDenominator):
                    continue
                done += 1
                assert abs(sub.u - abs(sub.v) * sub.t) <= 1e-12 * max(sub.u, 1.0)


class TestBranchSelection:
    def test_scaling_reference(self, scaling_initial):
        assert select_branch(scaling_initial, "1a", 2.0) == "+"

    def test_collineation_reference(self, collineation_initial):
        assert select_branch(collineation_initial, "2a", 2.0) == "+"

    def test_branch_matches_motion(self, rng):
        # whatever sign is returned, the residual must vanish on that branch
        for case in ("1a", "1b", "2a", "2b"):
            done = 0
            while done < 15:
                initial = draw_initial(rng, case)
                try:
                    sub = extend_sublinkage(initial, case, s=rng.uniform(0.7, 2.4),
                                            t=rng.uniform(0.7, 2.4), phi=0.5)
                except (RadicandNegative, SingularDenominator):
                    continue
                lo = max(abs(initial.s - initial.t), abs(sub.s - sub.t))
                hi = min(initial.s + initial.t, sub.s + sub.t)
                if hi <= lo * 1.02:
                    continue
                a_ref = float(rng.uniform(lo + 0.02 * (hi - lo), hi - 0.02 * (hi - lo)))
                done += 1
                branch = select_branch(initial, case, a_ref)
                assert abs(residual_w(a_ref, initial, sub, branch)) < 1e-9

    def test_negative_z0_scaling(self):
        # with z0 < 0 (and a > 0) the scaling root is still the plus branch
        initial = Sublinkage(s=1.0, t=1.8, u=0.9, v=0.5)
        assert profile_point(1.0, 1.0, 1.8).z < 0
        assert select_branch(initial, "1a", 1.0) == "+"
        sub = extend_sublinkage(initial, "1a", s=1.2, t=2.0, phi=0.3)
        assert abs(residual_w(1.0, initial, sub, "+")) < 1e-12

    def test_family_tip_heights(self, scaling_initial, collineation_initial):
        assert abs(family_tip_height(2.0, scaling_initial, "1a") - 2 * ROOT2) < 1e-12
        assert abs(family_tip_height(2.0, collineation_initial, "2a") + 1.5) < 1e-12


class TestFlexionRange:
    def test_scaling_patch_interval(self, scaling_initial):
        other = extend_sublinkage(scaling_initial, "1a", s=2.0, t=2.0, phi=0.4)
        intervals = flexion_range(LinkageSpec(scaling_initial, (other,), "+", 2.0))
        (lo, hi), = intervals
        assert lo < 1e-6
        assert abs(hi - 2 * ROOT2) < 1e-6

    def test_single_isoceles(self):
        initial = Sublinkage(s=2.0, t=2.0, u=1.0, v=0.5)
        spec = LinkageSpec(initial, (dataclasses.replace(initial, phi=0.5),), "+", 2.0)
        (lo, hi), = flexion_range(spec)
        assert lo < 1e-6
        assert abs(hi - 4.0) < 1e-6

    def test_interval_splits_at_radicand_touch_zero(self, collineation_initial):
        # s0 > t0: the radicand has a double zero at sqrt(s0^2 - t0^2)
        other = extend_sublinkage(collineation_initial, "2a", s=3.0, t=2.0, phi=0.4)
        (lo, hi), = flexion_range(LinkageSpec(collineation_initial, (other,), "+", 2.0))
        assert abs(lo - math.sqrt(3.0)) < 1e-6
        assert abs(hi - 3.0) < 1e-6

    def test_sign_change_endpoint(self, perspectivity_initial):
        other = extend_sublinkage(perspectivity_initial, "3", s=2.0, phi=0.4)
        spec = LinkageSpec(perspectivity_initial, (other,), "+", 2.95)
        (lo, hi), = flexion_range(spec)
        # radicand changes sign where v0^2 z0^2 = v0^2 s0^2 - u0^2
        z_star = math.sqrt(1.0 - 1.0 / 9.0)
        a_star = z_star + math.sqrt(z_star ** 2 + 3.0)
        assert abs(lo - a_star) < 1e-6
        assert abs(hi - 3.0) < 1e-6

    def test_residuals_vanish_inside(self, rng, collineation_initial):
        other = extend_sublinkage(collineation_initial, "2a", s=3.0, t=2.0, phi=0.4)
        spec = LinkageSpec(collineation_initial, (other,), "+", 2.0)
        box = interval_containing(flexion_range(spec), 2.0)
        branch = select_branch(collineation_initial, "2a", 2.0)
        scale = max(collineation_initial.s, collineation_initial.u, other.s, other.u)
        for a in rng.uniform(box[0] + 1e-6, box[1] - 1e-6, 10):
            assert abs(residual_w(a, collineation_initial, other, branch)) \
                < 1e-9 * scale ** 2

    def test_empty_when_reference_inadmissible(self, perspectivity_initial):
        other = extend_sublinkage(perspectivity_initial, "3", s=2.0, phi=0.4)
        spec = LinkageSpec(perspectivity_initial, (other,), "+", 2.0)
        assert flexion_range(spec) == []
