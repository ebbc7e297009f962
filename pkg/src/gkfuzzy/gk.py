"""Goalkeeper quality model.

Eight attributes (seven 0-10 skill ratings plus height in cm), each with a
two-term linguistic scale, a combinatorially generated rule base mapping
every term combination onto a nine-level quality scale, and scoring /
classification / ranking / explanation on top of the inference engine.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Mapping, Sequence

from .core import FuzzySet, LinguisticVariable, PiecewiseLinearMF, Universe
from .inference import (
    EvaluationTrace,
    InferenceConfig,
    Rule,
    RuleBase,
    evaluate,
)

RATING_ATTRIBUTES = (
    "exit_from_goal",
    "flexibility",
    "overhead_dominance",
    "establishing_connection",
    "courage",
    "leadership",
    "person_battles",
)
HEIGHT_ATTRIBUTE = "height_cm"
ATTRIBUTES = RATING_ATTRIBUTES + (HEIGHT_ATTRIBUTE,)

OUTPUT_VARIABLE = "quality"

RATING_RANGE = (0.0, 10.0)
HEIGHT_RANGE = (100.0, 220.0)


class ProfileError(ValueError):
    """Invalid profile data; carries one message per offending field."""

    def __init__(self, errors: Sequence[tuple[str, str]]):
        self.errors = list(errors)
        super().__init__("; ".join(f"{f}: {m}" for f, m in self.errors))


class QualityLevel(IntEnum):
    """Nine-step quality scale, worst to best."""

    AWFUL = 0
    RELATIVELY_AWFUL = 1
    BAD = 2
    RELATIVELY_BAD = 3
    ORDINARY = 4
    RELATIVELY_GOOD = 5
    GOOD = 6
    ALMOST_EXCELLENT = 7
    EXCELLENT = 8

    @property
    def label(self) -> str:
        """Identifier-style term label used in rule bases."""
        return self.name.lower()

    @property
    def display(self) -> str:
        """Human-readable name, e.g. ``Relatively good``."""
        return self.name.capitalize().replace("_", " ")

    @classmethod
    def from_label(cls, label: str) -> "QualityLevel":
        return cls[label.upper()]


_LEVEL_LABELS = tuple(level.label for level in QualityLevel)


@dataclass(frozen=True)
class GKProfile:
    """Seven skill ratings on [0, 10] plus height in cm on [100, 220]."""

    exit_from_goal: float
    flexibility: float
    overhead_dominance: float
    establishing_connection: float
    courage: float
    leadership: float
    person_battles: float
    height_cm: float

    def __post_init__(self) -> None:
        for name in RATING_ATTRIBUTES:
            v = float(getattr(self, name))
            object.__setattr__(self, name, v)
            if not RATING_RANGE[0] <= v <= RATING_RANGE[1]:
                raise ProfileError([(name, f"rating {v} outside [0, 10]")])
        h = float(self.height_cm)
        object.__setattr__(self, "height_cm", h)
        if not HEIGHT_RANGE[0] <= h <= HEIGHT_RANGE[1]:
            raise ProfileError([(HEIGHT_ATTRIBUTE, f"height {h} outside [100, 220] cm")])

    def as_inputs(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in ATTRIBUTES}

    def as_dict(self) -> dict[str, float]:
        return self.as_inputs()


@dataclass(frozen=True)
class AttributeRamp:
    """Linear transition of the favorable term from degree 0 to 1.

    The unfavorable term is the pointwise complement, so the two degrees
    sum to 1 everywhere.
    """

    lo: float
    hi: float
    ramp_start: float
    ramp_end: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"attribute range needs lo < hi, got [{self.lo}, {self.hi}]")
        if not (self.lo <= self.ramp_start < self.ramp_end <= self.hi):
            raise ValueError(
                f"ramp [{self.ramp_start}, {self.ramp_end}] must sit inside "
                f"[{self.lo}, {self.hi}] with ramp_start < ramp_end"
            )

    @property
    def crossover(self) -> float:
        return (self.ramp_start + self.ramp_end) / 2.0


@dataclass(frozen=True)
class GKCalibration:
    """Membership shapes for the eight attributes and the output scale."""

    ramps: Mapping[str, AttributeRamp]
    output_centers: tuple[float, ...]
    output_lo: float = 0.0
    output_hi: float = 100.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "ramps", dict(self.ramps))
        missing = [a for a in ATTRIBUTES if a not in self.ramps]
        if missing:
            raise ValueError(f"calibration missing ramps for: {missing}")
        centers = tuple(float(c) for c in self.output_centers)
        object.__setattr__(self, "output_centers", centers)
        if len(centers) != len(QualityLevel):
            raise ValueError(f"need {len(QualityLevel)} output centers, got {len(centers)}")
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError("output centers must be strictly increasing")
        if centers[0] < self.output_lo or centers[-1] > self.output_hi:
            raise ValueError("output centers must lie within the output range")


def default_calibration() -> GKCalibration:
    """Full-range complementary ramps and nine evenly spaced output levels.

    Ratings transition across the whole 0-10 scale (crossover at 5), height
    across 165-195 cm (crossover at 180). Output level peaks sit at
    12.5 * k on [0, 100].
    """
    ramps = {name: AttributeRamp(0.0, 10.0, 0.0, 10.0) for name in RATING_ATTRIBUTES}
    ramps[HEIGHT_ATTRIBUTE] = AttributeRamp(100.0, 220.0, 165.0, 195.0)
    centers = tuple(12.5 * k for k in range(9))
    return GKCalibration(ramps=ramps, output_centers=centers)


def favorable_term(attribute: str) -> str:
    return "tall" if attribute == HEIGHT_ATTRIBUTE else "good"


def unfavorable_term(attribute: str) -> str:
    return "short" if attribute == HEIGHT_ATTRIBUTE else "bad"


def _input_variable(name: str, ramp: AttributeRamp) -> LinguisticVariable:
    universe = Universe(ramp.lo, ramp.hi)
    fav, unfav = favorable_term(name), unfavorable_term(name)
    up = PiecewiseLinearMF([(ramp.ramp_start, 0.0), (ramp.ramp_end, 1.0)])
    down = PiecewiseLinearMF([(ramp.ramp_start, 1.0), (ramp.ramp_end, 0.0)])
    return LinguisticVariable(
        name,
        universe,
        {
            unfav: FuzzySet(unfav, universe, down),
            fav: FuzzySet(fav, universe, up),
        },
    )


def _output_variable(calibration: GKCalibration) -> LinguisticVariable:
    universe = Universe(calibration.output_lo, calibration.output_hi)
    centers = calibration.output_centers
    terms: dict[str, FuzzySet] = {}
    for level in QualityLevel:
        k = int(level)
        c = centers[k]
        pts: list[tuple[float, float]] = []
        if k == 0:
            if universe.lo < c:
                pts.append((universe.lo, 1.0))  # shoulder flat to the lower edge
            pts.append((c, 1.0))
            pts.append((centers[k + 1], 0.0))
        elif k == len(centers) - 1:
            pts.append((centers[k - 1], 0.0))
            pts.append((c, 1.0))
            if c < universe.hi:
                pts.append((universe.hi, 1.0))  # shoulder flat to the upper edge
        else:
            pts = [(centers[k - 1], 0.0), (c, 1.0), (centers[k + 1], 0.0)]
        terms[level.label] = FuzzySet(level.label, universe, PiecewiseLinearMF(pts))
    return LinguisticVariable(OUTPUT_VARIABLE, universe, terms)


def generate_gk_rulebase(
    calibration: GKCalibration | None = None,
    config: InferenceConfig | None = None,
) -> RuleBase:
    """One rule per combination of the eight binary terms (2^8 = 256 rules).

    The consequent level equals the number of favorable antecedent terms,
    so per-level rule counts follow the binomial coefficients C(8, k).
    """
    calibration = calibration or default_calibration()
    variables = [_input_variable(name, calibration.ramps[name]) for name in ATTRIBUTES]
    output = _output_variable(calibration)
    rules = []
    for combo in itertools.product((1, 0), repeat=len(ATTRIBUTES)):
        antecedent = tuple(
            (name, favorable_term(name) if bit else unfavorable_term(name))
            for name, bit in zip(ATTRIBUTES, combo)
        )
        level = QualityLevel(sum(combo))
        rules.append(Rule(antecedent, (OUTPUT_VARIABLE, level.label)))
    return RuleBase(variables, output, rules, config or InferenceConfig())


@dataclass(frozen=True)
class ScoredCandidate:
    """A profile with its crisp score, quality level and evaluation trace."""

    profile: GKProfile
    score: float
    level: QualityLevel
    trace: EvaluationTrace


@dataclass(frozen=True)
class RankedCandidate:
    candidate_id: str
    rank: int
    tied: bool
    scored: ScoredCandidate


def classify_term(output_variable: LinguisticVariable, score: float) -> str:
    """Label of the output term with maximum membership at ``score``.

    Ties go to the later-declared term; quality scales declare terms worst
    to best, so ties resolve toward the higher level.
    """
    best_label = None
    best_degree = -1.0
    for label, term in output_variable.terms.items():
        d = term.mf.degree(score)
        if d >= best_degree:
            best_label, best_degree = label, d
    assert best_label is not None
    return best_label


_default_output_variable: LinguisticVariable | None = None


def classify_level(score: float, calibration: GKCalibration | None = None) -> QualityLevel:
    """Quality level whose term peaks closest over ``score``, ties upward."""
    global _default_output_variable
    if calibration is None:
        if _default_output_variable is None:
            _default_output_variable = _output_variable(default_calibration())
        output = _default_output_variable
    else:
        output = _output_variable(calibration)
    if not output.universe.lo <= score <= output.universe.hi:
        raise ValueError(
            f"score {score} outside [{output.universe.lo}, {output.universe.hi}]"
        )
    return QualityLevel.from_label(classify_term(output, score))


def score_gk(profile: GKProfile, rulebase: RuleBase) -> ScoredCandidate:
    """Evaluate one profile against a quality rule base."""
    labels = tuple(rulebase.output_variable.terms)
    if labels != _LEVEL_LABELS:
        raise ValueError("rule base output terms do not form the nine-level quality scale")
    trace = evaluate(rulebase, profile.as_inputs())
    level = QualityLevel.from_label(classify_term(rulebase.output_variable, trace.crisp_output))
    return ScoredCandidate(profile, trace.crisp_output, level, trace)


def rank_candidates(
    candidates: Sequence[tuple[str, GKProfile]],
    rulebase: RuleBase,
) -> list[RankedCandidate]:
    """Score and order candidates, best first.

    The sort is stable: exact score ties keep input order and are flagged.
    """
    if not candidates:
        raise ValueError("rank_candidates needs at least one candidate")
    scored = [(cid, score_gk(profile, rulebase)) for cid, profile in candidates]
    order = sorted(range(len(scored)), key=lambda i: -scored[i][1].score)
    ranked = []
    for pos, i in enumerate(order):
        cid, sc = scored[i]
        prev_tie = pos > 0 and scored[order[pos - 1]][1].score == sc.score
        next_tie = pos + 1 < len(order) and scored[order[pos + 1]][1].score == sc.score
        ranked.append(RankedCandidate(cid, pos + 1, prev_tie or next_tie, sc))
    return ranked


@dataclass(frozen=True)
class RuleActivation:
    index: int
    strength: float
    sentence: str


@dataclass(frozen=True)
class ExplanationReport:
    """Top firing rules plus the per-attribute term degrees behind a score."""

    score: float
    level: QualityLevel
    top_rules: tuple[RuleActivation, ...]
    attribute_degrees: Mapping[str, Mapping[str, float]] = field(default_factory=dict)

    def render(self) -> str:
        lines = [f"score {self.score:.1f} ({self.level.display})"]
        lines.append("strongest rules:")
        for act in self.top_rules:
            lines.append(f"  [{act.index}] strength {act.strength:.4f}: {act.sentence}")
        lines.append("attribute degrees:")
        for attr, table in self.attribute_degrees.items():
            degs = ", ".join(f"{term}={deg:.4f}" for term, deg in table.items())
            lines.append(f"  {attr}: {degs}")
        return "\n".join(lines)


def explain(candidate: ScoredCandidate, top_k: int = 3) -> ExplanationReport:
    """The ``top_k`` strongest rules for a scored candidate, rendered as
    IF-THEN sentences, plus every attribute's term degrees."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    trace = candidate.trace
    rules = trace.rulebase.rules
    top = tuple(
        RuleActivation(i, s, rules[i].sentence())
        for i, s in trace.top_rules(top_k, fired_only=False)
    )
    return ExplanationReport(
        score=candidate.score,
        level=candidate.level,
        top_rules=top,
        attribute_degrees=trace.fuzzified,
    )


def _label_value(attribute: str, text: str, ramp: AttributeRamp) -> float:
    """Crisp stand-in for a linguistic input label.

    Favorable labels map to the top of the ramp (degree exactly 1),
    unfavorable ones to the bottom (degree exactly 0).
    """
    label = text.strip().lower()
    if label == favorable_term(attribute):
        return ramp.ramp_end
    if label == unfavorable_term(attribute):
        return ramp.ramp_start
    raise ValueError(
        f"expected a number or {unfavorable_term(attribute)!r}/"
        f"{favorable_term(attribute)!r}"
    )


def profile_from_mapping(
    data: Mapping[str, object],
    calibration: GKCalibration | None = None,
) -> GKProfile:
    """Build a profile from loosely typed field values.

    Each attribute accepts a number or its linguistic label; all field
    errors are collected into one :class:`ProfileError`.
    """
    calibration = calibration or default_calibration()
    values: dict[str, float] = {}
    errors: list[tuple[str, str]] = []
    for name in ATTRIBUTES:
        lo, hi = (HEIGHT_RANGE if name == HEIGHT_ATTRIBUTE else RATING_RANGE)
        if name not in data or data[name] is None:
            errors.append((name, "missing"))
            continue
        raw = data[name]
        if isinstance(raw, bool):
            errors.append((name, "expected a number or label, got a boolean"))
            continue
        if isinstance(raw, str):
            try:
                value = _label_value(name, raw, calibration.ramps[name])
            except ValueError as label_err:
                try:
                    value = float(raw)
                except ValueError:
                    errors.append((name, str(label_err)))
                    continue
        elif isinstance(raw, (int, float)):
            value = float(raw)
        else:
            errors.append((name, f"expected a number or label, got {type(raw).__name__}"))
            continue
        if not lo <= value <= hi:
            unit = " cm" if name == HEIGHT_ATTRIBUTE else ""
            errors.append((name, f"value {value:g} outside [{lo:g}, {hi:g}]{unit}"))
            continue
        values[name] = value
    if errors:
        raise ProfileError(errors)
    return GKProfile(**values)


def evaluation_report(rulebase: RuleBase, inputs: Mapping[str, float]) -> dict:
    """JSON-ready evaluation payload shared by the service and the CLI."""
    trace = evaluate(rulebase, inputs)
    label = classify_term(rulebase.output_variable, trace.crisp_output)
    try:
        display = QualityLevel.from_label(label).display
    except KeyError:
        display = label
    rules = trace.rulebase.rules
    top = [
        {"index": i, "strength": s, "rule": rules[i].sentence()}
        for i, s in trace.top_rules(5)
    ]
    return {
        "score": round(trace.crisp_output, 1),
        "score_full": trace.crisp_output,
        "level": display,
        "degenerate": trace.degenerate,
        "degrees": {var: dict(table) for var, table in trace.fuzzified.items()},
        "top_rules": top,
    }


def render_report_json(payload: Mapping[str, object]) -> str:
    """Canonical JSON rendering of an evaluation payload.

    The CLI and the HTTP service both emit exactly this text, so their
    outputs can be compared byte for byte.
    """
    return json.dumps(payload, indent=2) + "\n"
