"""Problem files: a polynomial, one law per variable, and analysis settings.

Schema::

    {
      "name": "optional label",
      "polynomial": {"n": 2, "power": 2,
                     "edges": [{"vertices": [1, 2], "weight": 1}]},
      "variables": [{"kind": "rademacher"}, {"kind": "bernoulli", "p": "1/2"}],
      "overrides": {"L": [null, 0.5], "profile": {...}},
      "analysis": {"lambda_grid": [0.1, 0.5], "samples": 100000,
                   "seed": 7, "constants": "constants.json"}
    }

Only ``polynomial`` and ``variables`` are required.  Rational strings such as
``"1/3"`` keep weights and parameters exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .distributions import Distribution, DistributionError, dist_from_dict, dist_to_dict
from .model import MultilinearPolynomial, PolynomialError, poly_from_dict, poly_to_dict, validate
from .smoothness import SmoothnessProfile, profile as build_profile, profile_from_dict

__all__ = ["ProblemError", "ProblemSpec", "load_problem", "parse_problem", "default_lambda_grid"]

GRID_POINTS = 10


class ProblemError(ValueError):
    """Schema or validation failure; the message names the offending field."""


@dataclass
class ProblemSpec:
    polynomial: MultilinearPolynomial
    variables: list
    L_overrides: Optional[list] = None
    profile_override: Optional[SmoothnessProfile] = None
    lambda_grid: Optional[list] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    constants: Optional[str] = None
    name: str = ""
    source: Optional[str] = field(default=None, compare=False)

    def profile(self) -> SmoothnessProfile:
        if self.profile_override is not None:
            return self.profile_override
        return build_profile(self.polynomial, self.variables, self.L_overrides)

    def lambdas(self, prof: Optional[SmoothnessProfile] = None) -> list[float]:
        if self.lambda_grid is not None:
            return list(self.lambda_grid)
        return default_lambda_grid(prof or self.profile())

    def to_dict(self) -> dict:
        out: dict = {}
        if self.name:
            out["name"] = self.name
        out["polynomial"] = poly_to_dict(self.polynomial)
        out["variables"] = [dist_to_dict(d) for d in self.variables]
        overrides = {}
        if self.L_overrides is not None:
            overrides["L"] = [None if x is None else float(x) for x in self.L_overrides]
        if self.profile_override is not None:
            overrides["profile"] = self.profile_override.to_dict()
        if overrides:
            out["overrides"] = overrides
        analysis = {}
        for key, val in (("lambda_grid", self.lambda_grid), ("samples", self.samples),
                         ("seed", self.seed), ("constants", self.constants)):
            if val is not None:
                analysis[key] = val
        if analysis:
            out["analysis"] = analysis
        return out


def default_lambda_grid(prof: SmoothnessProfile, points: int = GRID_POINTS) -> list[float]:
    """``points`` values evenly spanning ``[0.1 sigma, 5 sigma]``; ``[0.0]`` when ``sigma = 0``."""
    sigma = prof.sigma
    if sigma == 0:
        return [0.0]
    return [float(x) for x in np.linspace(0.1 * sigma, 5 * sigma, points)]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ProblemError(msg)


def _parse_analysis(data) -> dict:
    _require(isinstance(data, dict), "analysis: expected an object")
    out = {}
    if "lambda_grid" in data:
        grid = data["lambda_grid"]
        _require(isinstance(grid, list) and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in grid),
                 "analysis.lambda_grid: expected a list of numbers")
        grid = [float(x) for x in grid]
        _require(all(x >= 0 for x in grid), "analysis.lambda_grid: values must be nonnegative")
        _require(all(a < b for a, b in zip(grid, grid[1:])), "analysis.lambda_grid: must be strictly increasing")
        out["lambda_grid"] = grid
    for key in ("samples", "seed"):
        if key in data:
            val = data[key]
            _require(isinstance(val, int) and not isinstance(val, bool) and val >= 0,
                     f"analysis.{key}: expected a nonnegative integer")
            out[key] = val
    if "constants" in data:
        _require(isinstance(data["constants"], str), "analysis.constants: expected a path string")
        out["constants"] = data["constants"]
    return out


def parse_problem(data, source: Optional[str] = None) -> ProblemSpec:
    _require(isinstance(data, dict), "problem: top level must be a JSON object")
    _require("polynomial" in data, "polynomial: missing field")
    _require("variables" in data, "variables: missing field")
    try:
        poly = poly_from_dict(data["polynomial"])
    except PolynomialError as exc:
        raise ProblemError(str(exc)) from None
    problems = validate(poly)
    _require(not problems, "polynomial: " + "; ".join(problems))
    raw_vars = data["variables"]
    _require(isinstance(raw_vars, list), "variables: expected a list")
    _require(len(raw_vars) == poly.n, f"variables: expected {poly.n} entries, got {len(raw_vars)}")
    variables: list[Distribution] = []
    for i, d in enumerate(raw_vars):
        try:
            variables.append(dist_from_dict(d))
        except DistributionError as exc:
            raise ProblemError(f"variables[{i}]: {exc}") from None
    spec = ProblemSpec(polynomial=poly, variables=variables, name=str(data.get("name", "")), source=source)
    overrides = data.get("overrides", {})
    _require(isinstance(overrides, dict), "overrides: expected an object")
    if "L" in overrides:
        Ls = overrides["L"]
        if isinstance(Ls, (int, float)) and not isinstance(Ls, bool):
            Ls = [Ls] * poly.n
        _require(isinstance(Ls, list) and len(Ls) == poly.n, f"overrides.L: expected a list of {poly.n} entries")
        for i, x in enumerate(Ls):
            _require(x is None or (isinstance(x, (int, float)) and not isinstance(x, bool) and x >= 0),
                     f"overrides.L[{i}]: expected a nonnegative number or null")
        spec.L_overrides = Ls
    if "profile" in overrides:
        try:
            spec.profile_override = profile_from_dict(overrides["profile"])
        except ValueError as exc:
            raise ProblemError(f"overrides.profile: {exc}") from None
    if "analysis" in data:
        a = _parse_analysis(data["analysis"])
        spec.lambda_grid = a.get("lambda_grid")
        spec.samples = a.get("samples")
        spec.seed = a.get("seed")
        spec.constants = a.get("constants")
    return spec


def load_problem(path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return parse_problem(data, source=str(path))
    except ProblemError as exc:
        raise ProblemError(f"{path}: {exc}") from None
