import json
from fractions import Fraction

import pytest

from polybound.problem import ProblemError, default_lambda_grid, load_problem, parse_problem
from polybound.smoothness import SmoothnessProfile

BASE = {
    "name": "demo",
    "polynomial": {"n": 2, "power": 2, "edges": [{"vertices": [1, 2], "weight": "1/3"}]},
    "variables": [{"kind": "rademacher"}, {"kind": "bernoulli", "p": "1/2"}],
}


def with_(**kw):
    d = json.loads(json.dumps(BASE))
    d.update(kw)
    return d


def test_parse_and_round_trip():
    spec = parse_problem(with_(overrides={"L": [None, 0.5]},
                               analysis={"lambda_grid": [0.1, 0.2], "samples": 10, "seed": 7,
                                         "constants": "c.json"}))
    assert spec.polynomial.edges[(1, 2)] == Fraction(1, 3)
    assert spec.L_overrides == [None, 0.5]
    assert spec.lambdas() == [0.1, 0.2]
    again = parse_problem(spec.to_dict())
    assert again == spec


def test_scalar_L_override_broadcasts():
    assert parse_problem(with_(overrides={"L": 2})).L_overrides == [2, 2]


@pytest.mark.parametrize(
    "change,field",
    [
        ({"variables": [{"kind": "rademacher"}]}, "variables"),
        ({"variables": [{"kind": "rademacher"}, {"kind": "bernoulli", "p": 2}]}, "variables[1]"),
        ({"analysis": {"lambda_grid": [0.2, 0.1]}}, "lambda_grid"),
        ({"analysis": {"lambda_grid": [-1.0]}}, "lambda_grid"),
        ({"analysis": {"samples": -3}}, "samples"),
        ({"analysis": {"seed": True}}, "seed"),
        ({"overrides": {"L": [1]}}, "overrides.L"),
        ({"overrides": {"L": [1, -1]}}, "overrides.L[1]"),
        ({"polynomial": {"n": 2, "edges": [{"vertices": [1, 3], "weight": 1}]}}, "edge [1, 3]"),
    ],
)
def test_errors_name_the_field(change, field):
    with pytest.raises(ProblemError, match=field.replace("[", r"\[").replace("]", r"\]")):
        parse_problem(with_(**change))


def test_load_problem_errors(tmp_path):
    with pytest.raises(ProblemError, match="cannot read"):
        load_problem(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  \"polynomial\": ]")
    with pytest.raises(ProblemError, match="line 2"):
        load_problem(bad)


def test_default_grid():
    prof = SmoothnessProfile(mu=(1, 1), L=1, mean=0, variance=4, q=1)
    grid = default_lambda_grid(prof)
    assert len(grid) == 10 and grid[0] == pytest.approx(0.2) and grid[-1] == pytest.approx(10)
    assert all(a < b for a, b in zip(grid, grid[1:]))
    flat = SmoothnessProfile(mu=(0, 0), L=0, mean=3, variance=0, q=1)
    assert default_lambda_grid(flat) == [0.0]
