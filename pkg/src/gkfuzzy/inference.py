"""Rule-based fuzzy inference.

The classic four-stage pipeline over crisp inputs: singleton fuzzification,
per-rule firing strengths under a configurable AND norm, clip or scale
implication, max aggregation, and centroid (or mean-of-max) defuzzification.

A :class:`RuleBase` is immutable once built and precompiles index arrays so
that :func:`evaluate` is cheap enough to call tens of thousands of times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .core import (
    FuzzySet,
    LinguisticVariable,
    PiecewiseLinearMF,
    UniverseMismatchError,
)

# how far outside its universe a crisp input may sit before being rejected
INPUT_CLAMP_TOLERANCE = 1e-9

# grid degrees within this of the maximum count as "attaining" it
MEAN_OF_MAX_TOLERANCE = 1e-12


class InputRangeError(ValueError):
    """A crisp input fell outside its variable's universe."""


class InputMismatchError(ValueError):
    """The inputs mapping does not cover exactly the rule base's variables."""


class RuleResolutionError(LookupError):
    """A rule referenced a variable or term that cannot be resolved."""


@dataclass(frozen=True)
class Rule:
    """Conjunctive IF-THEN rule over named variables and term labels."""

    antecedent: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]

    def __post_init__(self) -> None:
        ant = tuple((str(v), str(t)) for v, t in self.antecedent)
        object.__setattr__(self, "antecedent", ant)
        object.__setattr__(self, "consequent", (str(self.consequent[0]), str(self.consequent[1])))
        if not ant:
            raise ValueError("rule antecedent must be nonempty")
        seen = set()
        for var, _ in ant:
            if var in seen:
                raise ValueError(f"variable {var!r} appears twice in one antecedent")
            seen.add(var)

    def sentence(self) -> str:
        """Render the rule as an IF ... AND ... THEN ... sentence."""
        conds = " AND ".join(f"{var} is {term}" for var, term in self.antecedent)
        out_var, out_term = self.consequent
        return f"IF {conds} THEN {out_var} is {out_term}"


@dataclass(frozen=True)
class InferenceConfig:
    """Operator choices for the inference pipeline.

    The default pairing (product AND with scale implication) keeps the
    crisp output monotone in every input degree for complementary term
    pairs; min with clip is the other classic composition and tends to
    produce small non-monotone dips near saturated rules.
    """

    and_norm: Literal["min", "product"] = "product"
    implication: Literal["clip", "scale"] = "scale"
    aggregation: Literal["max"] = "max"
    defuzzifier: Literal["centroid", "mean_of_max"] = "centroid"
    grid_points: int = 1001

    def __post_init__(self) -> None:
        if self.and_norm not in ("min", "product"):
            raise ValueError(f"and_norm must be 'min' or 'product', got {self.and_norm!r}")
        if self.implication not in ("clip", "scale"):
            raise ValueError(f"implication must be 'clip' or 'scale', got {self.implication!r}")
        if self.aggregation != "max":
            raise ValueError(f"aggregation must be 'max', got {self.aggregation!r}")
        if self.defuzzifier not in ("centroid", "mean_of_max"):
            raise ValueError(
                f"defuzzifier must be 'centroid' or 'mean_of_max', got {self.defuzzifier!r}"
            )
        if self.grid_points < 2:
            raise ValueError(f"grid_points must be >= 2, got {self.grid_points}")


class RuleBase:
    """Input variables, one output variable and the rules tying them together.

    Validates that every rule resolves against the declared variables, then
    precompiles per-rule index arrays and the sampled output term curves.
    """

    def __init__(
        self,
        input_variables: Sequence[LinguisticVariable],
        output_variable: LinguisticVariable,
        rules: Sequence[Rule],
        config: InferenceConfig | None = None,
    ):
        self.input_variables = tuple(input_variables)
        self.output_variable = output_variable
        self.rules = tuple(rules)
        self.config = config or InferenceConfig()

        if not self.input_variables:
            raise ValueError("rule base needs at least one input variable")
        if not self.rules:
            raise ValueError("rule base needs at least one rule")

        names = [v.name for v in self.input_variables] + [output_variable.name]
        dupes = {n for n in names if names.count(n) > 1}
        if dupes:
            raise ValueError(f"duplicate variable names: {sorted(dupes)}")

        self._inputs_by_name = {v.name: v for v in self.input_variables}
        self._validate_rules()
        self._compile()

    def _validate_rules(self) -> None:
        for i, rule in enumerate(self.rules):
            for var, term in rule.antecedent:
                variable = self._inputs_by_name.get(var)
                if variable is None:
                    raise RuleResolutionError(
                        f"rule {i}: unknown input variable {var!r}"
                    )
                if term not in variable.terms:
                    raise RuleResolutionError(
                        f"rule {i}: variable {var!r} has no term {term!r}"
                    )
            out_var, out_term = rule.consequent
            if out_var != self.output_variable.name:
                raise RuleResolutionError(
                    f"rule {i}: consequent names {out_var!r}, expected the output "
                    f"variable {self.output_variable.name!r}"
                )
            if out_term not in self.output_variable.terms:
                raise RuleResolutionError(
                    f"rule {i}: output variable has no term {out_term!r}"
                )

    def _compile(self) -> None:
        # flat slot per (variable, term); one trailing neutral slot for padding
        self._slot: dict[tuple[str, str], int] = {}
        for var in self.input_variables:
            for label in var.terms:
                self._slot[(var.name, label)] = len(self._slot)
        self._n_slots = len(self._slot)

        width = max(len(r.antecedent) for r in self.rules)
        ant = np.full((len(self.rules), width), self._n_slots, dtype=np.intp)
        for i, rule in enumerate(self.rules):
            for j, (var, term) in enumerate(rule.antecedent):
                ant[i, j] = self._slot[(var, term)]
        ant.setflags(write=False)
        self._ant_idx = ant

        self._out_labels = tuple(self.output_variable.terms)
        out_pos = {label: k for k, label in enumerate(self._out_labels)}
        cons = np.asarray([out_pos[r.consequent[1]] for r in self.rules], dtype=np.intp)
        cons.setflags(write=False)
        self._cons_idx = cons

        grid = self.output_variable.universe.grid(self.config.grid_points)
        curves = np.stack(
            [self.output_variable.terms[label].mf.degrees(grid) for label in self._out_labels]
        )
        grid.setflags(write=False)
        curves.setflags(write=False)
        self._out_grid = grid
        self._term_curves = curves

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.input_variables)

    def input_variable(self, name: str) -> LinguisticVariable:
        return self._inputs_by_name[name]

    def with_config(self, config: InferenceConfig) -> "RuleBase":
        """A copy of this rule base evaluating under a different config."""
        return RuleBase(self.input_variables, self.output_variable, self.rules, config)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RuleBase):
            return NotImplemented
        return (
            self.input_variables == other.input_variables
            and self.output_variable == other.output_variable
            and self.rules == other.rules
            and self.config == other.config
        )

    def __repr__(self) -> str:
        return (
            f"RuleBase({len(self.input_variables)} inputs, "
            f"{len(self.rules)} rules, output {self.output_variable.name!r})"
        )


class EvaluationTrace:
    """Everything the engine computed for one evaluation.

    Holds per-rule firing strengths, the fuzzified input degrees, the
    aggregated output set, the crisp output and a flag for the degenerate
    case where no rule fired at all.
    """

    __slots__ = ("_strengths", "fuzzified", "aggregated_output", "crisp_output",
                 "degenerate", "rulebase")

    def __init__(
        self,
        strengths: np.ndarray,
        fuzzified: Mapping[str, Mapping[str, float]],
        aggregated_output: FuzzySet,
        crisp_output: float,
        degenerate: bool,
        rulebase: RuleBase,
    ):
        strengths = np.asarray(strengths, dtype=float)
        strengths.setflags(write=False)
        self._strengths = strengths
        self.fuzzified = fuzzified
        self.aggregated_output = aggregated_output
        self.crisp_output = crisp_output
        self.degenerate = degenerate
        self.rulebase = rulebase

    @property
    def rule_strengths(self) -> np.ndarray:
        return self._strengths

    @property
    def per_rule(self) -> tuple[tuple[int, float], ...]:
        return tuple(enumerate(self._strengths.tolist()))

    def top_rules(self, k: int, fired_only: bool = True) -> list[tuple[int, float]]:
        """The ``k`` strongest rules, strength descending, index ascending."""
        order = sorted(
            range(self._strengths.size),
            key=lambda i: (-self._strengths[i], i),
        )
        picked = []
        for i in order:
            s = float(self._strengths[i])
            if fired_only and s <= 0.0:
                break
            picked.append((i, s))
            if len(picked) == k:
                break
        return picked


def fuzzify_singleton(variable: LinguisticVariable, x: float) -> dict[str, float]:
    """Per-term membership degrees of a crisp input.

    Values marginally outside the universe (within ``INPUT_CLAMP_TOLERANCE``)
    are clamped to the nearest bound; anything further out is rejected.
    """
    x = float(x)
    lo, hi = variable.universe.lo, variable.universe.hi
    if x < lo:
        if lo - x > INPUT_CLAMP_TOLERANCE:
            raise InputRangeError(
                f"{variable.name}: value {x} outside universe [{lo}, {hi}]"
            )
        x = lo
    elif x > hi:
        if x - hi > INPUT_CLAMP_TOLERANCE:
            raise InputRangeError(
                f"{variable.name}: value {x} outside universe [{lo}, {hi}]"
            )
        x = hi
    return {label: term.mf.degree(x) for label, term in variable.terms.items()}


def firing_strength(
    rule: Rule,
    fuzzified: Mapping[str, Mapping[str, float]],
    and_norm: Literal["min", "product"] = "min",
) -> float:
    """Fold the rule's antecedent degrees under the AND norm."""
    if and_norm not in ("min", "product"):
        raise ValueError(f"and_norm must be 'min' or 'product', got {and_norm!r}")
    degrees = []
    for var, term in rule.antecedent:
        if var not in fuzzified:
            raise RuleResolutionError(f"no fuzzified degrees for variable {var!r}")
        table = fuzzified[var]
        if term not in table:
            raise RuleResolutionError(f"variable {var!r} has no degree for term {term!r}")
        degrees.append(float(table[term]))
    if and_norm == "min":
        return min(degrees)
    return math.prod(degrees)


def implicate(
    consequent_set: FuzzySet,
    strength: float,
    implication: Literal["clip", "scale"] = "clip",
) -> FuzzySet:
    """Limit a consequent set to a rule's firing strength.

    ``clip`` takes the pointwise min with the strength; ``scale`` multiplies
    by it. Sampled on the consequent universe grid because clipping
    introduces breakpoints of its own.
    """
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"firing strength must lie in [0, 1], got {strength}")
    if implication not in ("clip", "scale"):
        raise ValueError(f"implication must be 'clip' or 'scale', got {implication!r}")
    xs = consequent_set.universe.grid()
    mu = consequent_set.mf.degrees(xs)
    if implication == "clip":
        out = np.minimum(mu, strength)
    else:
        out = strength * mu
    return FuzzySet(
        f"{consequent_set.label}@{strength:g}",
        consequent_set.universe,
        PiecewiseLinearMF.from_arrays(xs, out),
    )


def aggregate(outputs: Sequence[FuzzySet]) -> FuzzySet:
    """Pointwise max of per-rule output sets on the shared universe grid."""
    if not outputs:
        raise ValueError("aggregate needs at least one output set")
    universe = outputs[0].universe
    for s in outputs[1:]:
        if s.universe != universe:
            raise UniverseMismatchError(
                f"set {s.label!r} is not on the shared output universe"
            )
    xs = universe.grid()
    acc = outputs[0].mf.degrees(xs)
    for s in outputs[1:]:
        acc = np.maximum(acc, s.mf.degrees(xs))
    return FuzzySet("aggregate", universe, PiecewiseLinearMF.from_arrays(xs, acc))


def _extended_breakpoints(fset: FuzzySet) -> tuple[np.ndarray, np.ndarray]:
    """Breakpoints extended flat to the universe bounds."""
    xs, ds = fset.mf.xs, fset.mf.ds
    lo, hi = fset.universe.lo, fset.universe.hi
    pre_x, pre_d, post_x, post_d = [], [], [], []
    if xs[0] > lo:
        pre_x, pre_d = [lo], [ds[0]]
    if xs[-1] < hi:
        post_x, post_d = [hi], [ds[-1]]
    if pre_x or post_x:
        xs = np.concatenate([pre_x, xs, post_x])
        ds = np.concatenate([pre_d, ds, post_d])
    return xs, ds


def defuzzify(fset: FuzzySet, method: Literal["centroid", "mean_of_max"] = "centroid") -> float:
    """Collapse a fuzzy set on a bounded universe to one crisp value.

    ``centroid`` is the exact center of gravity of the piecewise-linear
    membership over the universe (per-segment trapezoid areas and first
    moments, no sampling error). ``mean_of_max`` averages the breakpoints
    attaining the maximum degree. A zero-area set yields the universe
    midpoint.
    """
    if method not in ("centroid", "mean_of_max"):
        raise ValueError(f"unknown defuzzifier {method!r}")
    xs, ds = _extended_breakpoints(fset)
    if method == "centroid":
        x0, x1 = xs[:-1], xs[1:]
        d0, d1 = ds[:-1], ds[1:]
        dx = x1 - x0
        area = dx * (d0 + d1) / 2.0
        moment = dx * (d0 * (2.0 * x0 + x1) + d1 * (x0 + 2.0 * x1)) / 6.0
        total = float(area.sum())
        if total <= 0.0:
            return fset.universe.midpoint
        return float(moment.sum()) / total
    peak = float(ds.max())
    if peak <= 0.0:
        return fset.universe.midpoint
    attaining = xs[ds >= peak - MEAN_OF_MAX_TOLERANCE]
    return float(attaining.mean())


def evaluate(rulebase: RuleBase, inputs: Mapping[str, float]) -> EvaluationTrace:
    """Run the full pipeline for one crisp input vector.

    ``inputs`` must cover exactly the rule base's input variables. Rules
    sharing a consequent term are folded through the max aggregation before
    implication, which is pointwise identical to implicating each rule
    separately and then aggregating.
    """
    names = rulebase.input_names
    missing = [n for n in names if n not in inputs]
    extra = [k for k in inputs if k not in rulebase._inputs_by_name]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing inputs: {missing}")
        if extra:
            parts.append(f"unexpected inputs: {extra}")
        raise InputMismatchError("; ".join(parts))

    fuzzified = {
        var.name: fuzzify_singleton(var, inputs[var.name])
        for var in rulebase.input_variables
    }

    degrees = np.empty(rulebase._n_slots + 1)
    degrees[-1] = 1.0  # neutral padding slot
    for (var, term), slot in rulebase._slot.items():
        degrees[slot] = fuzzified[var][term]

    gathered = degrees[rulebase._ant_idx]
    if rulebase.config.and_norm == "min":
        strengths = gathered.min(axis=1)
    else:
        strengths = gathered.prod(axis=1)

    term_level = np.zeros(len(rulebase._out_labels))
    np.maximum.at(term_level, rulebase._cons_idx, strengths)

    if rulebase.config.implication == "clip":
        agg = np.minimum(rulebase._term_curves, term_level[:, None]).max(axis=0)
    else:
        agg = (rulebase._term_curves * term_level[:, None]).max(axis=0)

    aggregated = FuzzySet(
        "aggregate",
        rulebase.output_variable.universe,
        PiecewiseLinearMF.from_arrays(rulebase._out_grid, agg),
    )
    degenerate = bool(agg.max() == 0.0)
    crisp = defuzzify(aggregated, rulebase.config.defuzzifier)
    return EvaluationTrace(strengths, fuzzified, aggregated, crisp, degenerate, rulebase)
