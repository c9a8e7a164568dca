from __future__ import annotations

import json
from fractions import Fraction

import pytest

from tuning import ChainSpec, chain_spec_to_dict

# two-internal reference instance; every downstream number below is derived
# from it by exact rational arithmetic
REFERENCE = {
    "n_internal": 2,
    "p00": [[0.2, 0.3], [0.4, 0.1]],
    "p01": [[0.3, 0.2], [0.1, 0.4]],
    "c": [1.0, 2.0],
    "d0": [-0.5, -1.0],
    "d1": [-0.7, -0.2],
}

# frozen exact values for the reference instance (hand-checked)
REF_FUNDAMENTAL = [[Fraction(3, 2), Fraction(1, 2)], [Fraction(2, 3), Fraction(4, 3)]]
REF_B = [[Fraction(1, 2), Fraction(1, 2)], [Fraction(1, 3), Fraction(2, 3)]]
REF_R = [Fraction(5, 2), Fraction(10, 3)]
REF_C_TABLE = [
    [Fraction(19, 10), Fraction(67, 25)],
    [Fraction(71, 35), Fraction(43, 15)],
]
REF_I_STAR = Fraction(43, 15)  # attained at labels (3, 3)
REF_I_MIN = Fraction(19, 10)  # attained at labels (2, 2)
REF_PI = [Fraction(1, 3), Fraction(2, 3)]  # degenerate (3, 3)
REF_RHO = [Fraction(7, 3), Fraction(47, 15)]  # degenerate (3, 3)


@pytest.fixture
def reference_spec() -> ChainSpec:
    return ChainSpec(**REFERENCE)


@pytest.fixture
def reference_model_file(tmp_path, reference_spec):
    path = tmp_path / "reference_model.json"
    path.write_text(json.dumps(chain_spec_to_dict(reference_spec), indent=2))
    return path
