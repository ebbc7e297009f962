from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gkfuzzy import InferenceConfig, generate_gk_rulebase


@pytest.fixture(scope="session")
def gk_rulebase():
    """The generated rule base under the default (product/scale) config."""
    return generate_gk_rulebase()


@pytest.fixture(scope="session")
def gk_rulebase_min_clip():
    """The same rule base under min AND with clip implication."""
    return generate_gk_rulebase(config=InferenceConfig(and_norm="min", implication="clip"))
