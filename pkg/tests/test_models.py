import json
import math

import pytest

from bethe_ff.errors import CoincidenceError
from bethe_ff.models import FormFactorResult, ModelSpec, RapiditySet


@pytest.mark.parametrize(
    "model",
    [ModelSpec.qnls(10.0, 1.5), ModelSpec.xxx([0.1, -0.2j, 0.3]), ModelSpec.xxz(math.pi / 3, [0.05, -0.05])],
)
def test_json_roundtrip(model):
    assert ModelSpec.from_json(model.to_json()) == model


@pytest.mark.parametrize(
    "d",
    [
        {"kind": "qnls"},
        {"kind": "qnls", "L": 1, "c": -1},
        {"kind": "xxz", "xi": [[0, 0]]},
        {"kind": "xxz", "gamma": 4.0, "xi": [[0, 0]]},
        {"kind": "xxx", "xi": [[0, 0], [0, 0]]},
        {"kind": "xxx", "xi": [[0, 0]], "M": 3},
        {"kind": "xxx", "c": 2.0, "xi": [[0, 0]]},
        {"kind": "heisenberg"},
        {"L": 1},
    ],
)
def test_invalid(d):
    with pytest.raises(ValueError):
        ModelSpec.from_dict(d)


def test_rapidity_set():
    r = RapiditySet([0.1, 0.2 + 1j], "mu")
    assert len(r) == 2 and r[1] == 0.2 + 1j
    with pytest.raises(CoincidenceError):
        RapiditySet([0.1, 0.1 + 1e-13])


def test_result_record():
    r = FormFactorResult(1 + 2j, "oracle", 0.5)
    assert r.condition == 1.0
    assert json.loads(json.dumps(r.to_dict()))["value"] == [1.0, 2.0]
    with pytest.raises(ValueError):
        FormFactorResult(1, "guess")
