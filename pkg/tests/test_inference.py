from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkfuzzy import (
    FuzzySet,
    InferenceConfig,
    InputMismatchError,
    InputRangeError,
    LinguisticVariable,
    PiecewiseLinearMF,
    Rule,
    RuleBase,
    RuleResolutionError,
    Universe,
    UniverseMismatchError,
    aggregate,
    defuzzify,
    evaluate,
    firing_strength,
    fuzzify_singleton,
    implicate,
)
from oracles import riemann_centroid

OUT = Universe(0.0, 100.0)


def tri(center, half_width=12.5, label="t"):
    return FuzzySet(
        label,
        OUT,
        PiecewiseLinearMF([(center - half_width, 0.0), (center, 1.0), (center + half_width, 0.0)]),
    )


def height_variable():
    u = Universe(100.0, 220.0)
    return LinguisticVariable(
        "height_cm",
        u,
        {
            "short": FuzzySet("short", u, PiecewiseLinearMF([(165.0, 1.0), (195.0, 0.0)])),
            "tall": FuzzySet("tall", u, PiecewiseLinearMF([(165.0, 0.0), (195.0, 1.0)])),
        },
    )


def rating_variable(name):
    u = Universe(0.0, 10.0)
    return LinguisticVariable(
        name,
        u,
        {
            "bad": FuzzySet("bad", u, PiecewiseLinearMF([(0.0, 1.0), (10.0, 0.0)])),
            "good": FuzzySet("good", u, PiecewiseLinearMF([(0.0, 0.0), (10.0, 1.0)])),
        },
    )


def two_level_output():
    return LinguisticVariable(
        "quality",
        OUT,
        {
            "low": FuzzySet("low", OUT, PiecewiseLinearMF([(0.0, 1.0), (50.0, 0.0)])),
            "high": FuzzySet("high", OUT, PiecewiseLinearMF([(50.0, 0.0), (100.0, 1.0)])),
        },
    )


class TestFuzzifySingleton:
    def test_height_example(self):
        degs = fuzzify_singleton(height_variable(), 187.0)
        assert degs["tall"] == pytest.approx(22.0 / 30.0, abs=1e-12)
        assert degs["short"] == pytest.approx(8.0 / 30.0, abs=1e-12)

    def test_crossover_symmetry(self):
        degs = fuzzify_singleton(rating_variable("flexibility"), 5.0)
        assert degs == {"bad": 0.5, "good": 0.5}

    def test_upper_endpoint(self):
        degs = fuzzify_singleton(rating_variable("flexibility"), 10.0)
        assert degs == {"bad": 0.0, "good": 1.0}

    def test_marginal_overshoot_clamped(self):
        degs = fuzzify_singleton(rating_variable("r"), 10.0 + 5e-10)
        assert degs["good"] == 1.0

    def test_out_of_range_names_variable(self):
        with pytest.raises(InputRangeError, match="height_cm"):
            fuzzify_singleton(height_variable(), 98.0)
        with pytest.raises(InputRangeError, match="height_cm"):
            fuzzify_singleton(height_variable(), 220.1)


class TestFiringStrength:
    RULE = Rule((("a", "good"), ("b", "good")), ("quality", "high"))

    def test_min_fold(self):
        fz = {"a": {"good": 0.7}, "b": {"good": 0.4}}
        assert firing_strength(self.RULE, fz, "min") == 0.4

    def test_zero_annihilates_both_norms(self):
        fz = {"a": {"good": 0.0}, "b": {"good": 0.9}}
        assert firing_strength(self.RULE, fz, "min") == 0.0
        assert firing_strength(self.RULE, fz, "product") == 0.0

    def test_product_fold(self):
        fz = {"a": {"good": 0.5}, "b": {"good": 0.5}}
        assert firing_strength(self.RULE, fz, "product") == 0.25

    def test_missing_variable(self):
        with pytest.raises(RuleResolutionError):
            firing_strength(self.RULE, {"a": {"good": 0.5}}, "min")

    def test_unknown_norm(self):
        with pytest.raises(ValueError):
            firing_strength(self.RULE, {"a": {"good": 1.0}, "b": {"good": 1.0}}, "mean")

    @settings(max_examples=60)
    @given(
        degrees=st.lists(
            st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=2, max_size=2
        ),
        bump=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
        norm=st.sampled_from(["min", "product"]),
    )
    def test_monotone_in_each_degree(self, degrees, bump, norm):
        fz = {"a": {"good": degrees[0]}, "b": {"good": degrees[1]}}
        before = firing_strength(self.RULE, fz, norm)
        fz["a"]["good"] = min(1.0, degrees[0] + bump)
        after = firing_strength(self.RULE, fz, norm)
        assert after >= before


class TestRuleAndRuleBase:
    def test_antecedent_nonempty_and_unique(self):
        with pytest.raises(ValueError):
            Rule((), ("q", "high"))
        with pytest.raises(ValueError):
            Rule((("a", "good"), ("a", "bad")), ("q", "high"))

    def test_rules_must_resolve(self):
        a = rating_variable("a")
        out = two_level_output()
        with pytest.raises(RuleResolutionError):
            RuleBase([a], out, [Rule((("b", "good"),), ("quality", "high"))])
        with pytest.raises(RuleResolutionError):
            RuleBase([a], out, [Rule((("a", "great"),), ("quality", "high"))])
        with pytest.raises(RuleResolutionError):
            RuleBase([a], out, [Rule((("a", "good"),), ("other", "high"))])
        with pytest.raises(RuleResolutionError):
            RuleBase([a], out, [Rule((("a", "good"),), ("quality", "medium"))])

    def test_names_unique_and_rules_required(self):
        a = rating_variable("a")
        out = two_level_output()
        rule = Rule((("a", "good"),), ("quality", "high"))
        with pytest.raises(ValueError):
            RuleBase([a, rating_variable("a")], out, [rule])
        with pytest.raises(ValueError):
            RuleBase([a], out, [])

    def test_sentence_rendering(self):
        rule = Rule(
            (("height_cm", "tall"), ("flexibility", "bad")), ("quality", "relatively_bad")
        )
        assert rule.sentence() == (
            "IF height_cm is tall AND flexibility is bad THEN quality is relatively_bad"
        )


class TestImplicate:
    def test_full_strength_is_identity_on_grid(self):
        t = tri(50.0)
        sampled = t.mf.degrees(OUT.grid())
        for method in ("clip", "scale"):
            out = implicate(t, 1.0, method)
            assert np.array_equal(out.mf.ds, sampled)

    def test_zero_strength_annihilates(self):
        t = tri(50.0)
        for method in ("clip", "scale"):
            assert np.all(implicate(t, 0.0, method).mf.ds == 0.0)

    def test_clip_builds_plateau(self):
        out = implicate(tri(50.0), 0.6, "clip")
        assert float(out.mf.ds.max()) == 0.6
        xs = out.mf.xs
        plateau = out.mf.ds[(xs >= 45.0) & (xs <= 55.0)]
        assert np.all(plateau == 0.6)

    def test_clip_bounded_by_strength(self):
        out = implicate(tri(30.0), 0.37, "clip")
        assert np.all(out.mf.ds <= 0.37)

    def test_scale_bounded_by_strength_times_peak(self):
        out = implicate(tri(30.0), 0.37, "scale")
        assert float(out.mf.ds.max()) <= 0.37 * 1.0 + 1e-15

    def test_strength_out_of_bounds(self):
        with pytest.raises(ValueError):
            implicate(tri(50.0), 1.2, "clip")
        with pytest.raises(ValueError):
            implicate(tri(50.0), -0.1, "scale")


class TestAggregate:
    def test_single_set_unchanged(self):
        t = tri(40.0)
        agg = aggregate([t])
        assert np.array_equal(agg.mf.ds, t.mf.degrees(OUT.grid()))

    def test_set_with_complement_covers_half(self):
        rng = np.random.default_rng(5)
        ds = rng.random(OUT.grid_points)
        a = FuzzySet("a", OUT, PiecewiseLinearMF.from_arrays(OUT.grid(), ds))
        from gkfuzzy import set_complement

        agg = aggregate([a, set_complement(a)])
        assert np.all(agg.mf.ds >= 0.5)

    def test_disjoint_clipped_triangles_form_envelope(self):
        a = implicate(tri(25.0), 0.8, "clip")
        b = implicate(tri(75.0), 0.5, "clip")
        agg = aggregate([a, b])
        assert np.array_equal(agg.mf.ds, np.maximum(a.mf.ds, b.mf.ds))

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            aggregate([])

    def test_universe_mismatch_rejected(self):
        other = Universe(0.0, 50.0)
        b = FuzzySet("b", other, PiecewiseLinearMF([(0.0, 0.0), (50.0, 1.0)]))
        with pytest.raises(UniverseMismatchError):
            aggregate([tri(25.0), b])


class TestDefuzzify:
    def test_symmetric_triangle(self):
        assert defuzzify(tri(50.0), "centroid") == pytest.approx(50.0, abs=1e-9)

    def test_clipping_preserves_symmetry(self):
        for s in (0.2, 0.5, 0.9):
            clipped = implicate(tri(50.0), s, "clip")
            assert defuzzify(clipped, "centroid") == pytest.approx(50.0, abs=1e-9)

    def test_mirrored_pair_balances(self):
        agg = aggregate([tri(25.0), tri(75.0)])
        assert defuzzify(agg, "centroid") == pytest.approx(50.0, abs=1e-9)

    def test_asymmetric_aggregate_matches_quadrature(self):
        # full-height triangle at 25, half-height plateau at 75
        agg = aggregate([implicate(tri(25.0), 1.0, "clip"), implicate(tri(75.0), 0.5, "clip")])
        engine = defuzzify(agg, "centroid")
        oracle = riemann_centroid(agg)
        assert abs(engine - oracle) / abs(oracle) < 1e-6

    def test_asymmetric_exact_breakpoints_match_closed_form(self):
        # the same shape built from exact kinks, no grid sampling:
        # areas 12.5 and 9.375 centered at 25 and 75 -> (12.5*25 + 9.375*75) / 21.875
        mf = PiecewiseLinearMF(
            [(12.5, 0.0), (25.0, 1.0), (37.5, 0.0), (62.5, 0.0),
             (68.75, 0.5), (81.25, 0.5), (87.5, 0.0)]
        )
        exact = FuzzySet("exact", OUT, mf)
        engine = defuzzify(exact, "centroid")
        assert engine == pytest.approx(325.0 / 7.0, abs=1e-9)
        oracle = riemann_centroid(exact)
        assert abs(engine - oracle) / abs(oracle) < 1e-6

    def test_zero_area_returns_midpoint(self):
        empty = FuzzySet("e", OUT, PiecewiseLinearMF([(0.0, 0.0), (100.0, 0.0)]))
        assert defuzzify(empty, "centroid") == 50.0
        assert defuzzify(empty, "mean_of_max") == 50.0

    def test_mean_of_max_plateau_center(self):
        clipped = implicate(tri(40.0), 0.5, "clip")
        assert defuzzify(clipped, "mean_of_max") == pytest.approx(40.0, abs=1e-6)

    def test_centroid_within_support(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            center = float(rng.uniform(15.0, 85.0))
            strength = float(rng.uniform(0.05, 1.0))
            clipped = implicate(tri(center), strength, "clip")
            value = defuzzify(clipped, "centroid")
            support = clipped.mf.xs[clipped.mf.ds > 0.0]
            assert support[0] <= value <= support[-1]

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            defuzzify(tri(50.0), "bisector")


class TestEvaluate:
    def build(self, config=None):
        a = rating_variable("a")
        b = rating_variable("b")
        out = two_level_output()
        rules = [
            Rule((("a", "good"), ("b", "good")), ("quality", "high")),
            Rule((("a", "bad"), ("b", "bad")), ("quality", "low")),
        ]
        return RuleBase([a, b], out, rules, config)

    def test_certain_rule_equals_bare_consequent(self):
        rb = self.build()
        trace = evaluate(rb, {"a": 10.0, "b": 10.0})
        expected = defuzzify(implicate(rb.output_variable.terms["high"], 1.0, "scale"))
        assert trace.crisp_output == expected
        assert not trace.degenerate

    def test_no_rule_fires_flags_degenerate_midpoint(self):
        a = rating_variable("a")
        out = two_level_output()
        rb = RuleBase([a], out, [Rule((("a", "good"),), ("quality", "high"))])
        trace = evaluate(rb, {"a": 0.0})
        assert trace.degenerate
        assert trace.crisp_output == 50.0

    def test_input_cover_validated(self):
        rb = self.build()
        with pytest.raises(InputMismatchError, match="missing.*'b'"):
            evaluate(rb, {"a": 5.0})
        with pytest.raises(InputMismatchError, match="unexpected.*'c'"):
            evaluate(rb, {"a": 5.0, "b": 5.0, "c": 1.0})

    def test_trace_invariants(self):
        rb = self.build()
        rng = np.random.default_rng(3)
        for _ in range(25):
            trace = evaluate(rb, {"a": float(rng.uniform(0, 10)), "b": float(rng.uniform(0, 10))})
            strengths = trace.rule_strengths
            assert np.all(strengths >= 0.0) and np.all(strengths <= 1.0)
            assert 0.0 <= trace.crisp_output <= 100.0
            assert len(trace.per_rule) == len(rb.rules)

    def test_rule_order_permutation_is_bit_identical(self):
        a = rating_variable("a")
        b = rating_variable("b")
        out = two_level_output()
        rules = [
            Rule((("a", "good"),), ("quality", "high")),
            Rule((("b", "good"),), ("quality", "high")),
            Rule((("a", "bad"), ("b", "bad")), ("quality", "low")),
            Rule((("b", "bad"),), ("quality", "low")),
        ]
        rb1 = RuleBase([a, b], out, rules)
        rb2 = RuleBase([a, b], out, rules[::-1])
        rng = np.random.default_rng(9)
        for _ in range(20):
            inputs = {"a": float(rng.uniform(0, 10)), "b": float(rng.uniform(0, 10))}
            t1 = evaluate(rb1, inputs)
            t2 = evaluate(rb2, inputs)
            assert np.array_equal(t1.aggregated_output.mf.ds, t2.aggregated_output.mf.ds)
            assert t1.crisp_output == t2.crisp_output

    def test_grouped_aggregation_matches_per_rule_ops(self, gk_rulebase_min_clip):
        """The engine's fold by consequent term equals literal per-rule
        implicate + aggregate, pointwise."""
        rb = gk_rulebase_min_clip
        rng = np.random.default_rng(21)
        inputs = {name: float(rng.uniform(0, 10)) for name in rb.input_names}
        inputs["height_cm"] = float(rng.uniform(100, 220))
        trace = evaluate(rb, inputs)
        outs = []
        for rule, (_, s) in zip(rb.rules, trace.per_rule):
            outs.append(implicate(rb.output_variable.terms[rule.consequent[1]], s, "clip"))
        manual = aggregate(outs)
        assert np.array_equal(manual.mf.ds, trace.aggregated_output.mf.ds)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            InferenceConfig(and_norm="mean")
        with pytest.raises(ValueError):
            InferenceConfig(implication="mamdani")
        with pytest.raises(ValueError):
            InferenceConfig(aggregation="sum")
        with pytest.raises(ValueError):
            InferenceConfig(defuzzifier="bisector")
        with pytest.raises(ValueError):
            InferenceConfig(grid_points=1)
