import json
import math

import pytest

import normlab


def test_parse_and_evaluate():
    f = normlab.parse("z1*z2 + exp(z1)", 2)
    assert normlab.evaluate(f, [0, 1]) == pytest.approx(1.0)
    value, grad = normlab.evaluate_jet(normlab.parse("z1^2", 1), [3])
    assert value == 9
    assert grad == [6]


def test_sharp_matches_oracle():
    f = normlab.parse("z1*z2", 2)
    assert normlab.sharp(f, [1, 1]) == pytest.approx(math.sqrt(2) / 2, rel=1e-12)
    assert normlab.sharp_fd(f, [1, 1], 256, 1e-4) == pytest.approx(math.sqrt(2) / 2, abs=1e-3)


def test_errors_are_typed():
    with pytest.raises(normlab.ParseError):
        normlab.parse("z1 +", 1)
    with pytest.raises(normlab.EvalError):
        normlab.evaluate(normlab.parse("1/z1", 1), [0])


def test_kobayashi_center():
    ball = normlab.Domain.ball([0, 0], 2.0)
    assert normlab.kobayashi_domain_bounds(ball, [0, 0], [1, 0])[1] == pytest.approx(0.5)


def test_remark_counterexample():
    report = normlab.remark_counterexample(50, 1.0)
    assert report["refutes_converse"]
    assert report["rows"][-1]["ratio"] == (50, 1)


def test_run_command():
    config = {"function": "z", "dimension": 1, "points": [[[0, 0]]]}
    out = normlab.run_command("sharp", json.dumps(config))
    assert out["exit_code"] == 0
    rows = json.loads(out["files"]["sharp.json"])["rows"]
    assert rows[0]["sharp_closed"] == 1.0
    bad = normlab.run_command("sharp", json.dumps({"function": "z"}))
    assert bad["exit_code"] == 2
