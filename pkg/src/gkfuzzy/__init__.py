"""Mamdani-style fuzzy inference with a goalkeeper quality scoring model.

Layers, bottom up:

- :mod:`gkfuzzy.core` - universes, piecewise-linear membership functions,
  fuzzy sets and their pointwise algebra.
- :mod:`gkfuzzy.inference` - rules, rule bases and the fuzzify / fire /
  implicate / aggregate / defuzzify pipeline.
- :mod:`gkfuzzy.gk` - the eight-attribute goalkeeper model: calibration,
  combinatorial rule generation, scoring, classification, ranking.
- :mod:`gkfuzzy.ruledsl` - the ``.frb`` text format (parse / format).
- :mod:`gkfuzzy.service` - HTTP scoring service with candidate persistence.
- :mod:`gkfuzzy.cli` - the ``gkfuzzy`` command line tool.
"""

from .core import (
    FuzzySet,
    LinguisticVariable,
    PiecewiseLinearMF,
    Universe,
    UniverseMismatchError,
    set_complement,
    set_intersection,
    set_union,
)
from .inference import (
    EvaluationTrace,
    InferenceConfig,
    InputMismatchError,
    InputRangeError,
    Rule,
    RuleBase,
    RuleResolutionError,
    aggregate,
    defuzzify,
    evaluate,
    firing_strength,
    fuzzify_singleton,
    implicate,
)
from .gk import (
    ATTRIBUTES,
    GKCalibration,
    GKProfile,
    ProfileError,
    QualityLevel,
    RankedCandidate,
    ScoredCandidate,
    classify_level,
    default_calibration,
    explain,
    generate_gk_rulebase,
    profile_from_mapping,
    rank_candidates,
    score_gk,
)
from .ruledsl import (
    Diagnostic,
    RuleBaseSyntaxError,
    format_rulebase,
    parse_rulebase,
)

__version__ = "0.1.0"

__all__ = [
    "ATTRIBUTES",
    "Diagnostic",
    "EvaluationTrace",
    "FuzzySet",
    "GKCalibration",
    "GKProfile",
    "InferenceConfig",
    "InputMismatchError",
    "InputRangeError",
    "LinguisticVariable",
    "PiecewiseLinearMF",
    "ProfileError",
    "QualityLevel",
    "RankedCandidate",
    "Rule",
    "RuleBase",
    "RuleBaseSyntaxError",
    "RuleResolutionError",
    "ScoredCandidate",
    "Universe",
    "UniverseMismatchError",
    "aggregate",
    "classify_level",
    "default_calibration",
    "defuzzify",
    "evaluate",
    "explain",
    "firing_strength",
    "format_rulebase",
    "fuzzify_singleton",
    "generate_gk_rulebase",
    "implicate",
    "parse_rulebase",
    "profile_from_mapping",
    "rank_candidates",
    "score_gk",
    "set_complement",
    "set_intersection",
    "set_union",
]
