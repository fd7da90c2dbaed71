"""Smoothness parameters ``mu_r`` and the per-instance profile.

``mu_r`` is the largest absolute-weighted sum, over vertex sets ``S`` of size
``r``, of the monomials containing ``S`` with their remaining variables
replaced by ``E|Y_v|``.  The empty hyperedge never contributes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .distributions import Distribution
from .model import MultilinearPolynomial, PolynomialError
from . import moments

__all__ = [
    "SmoothnessProfile",
    "UnsupportedDistributionError",
    "mu",
    "mu_all",
    "mu_bruteforce",
    "profile",
    "profile_from_dict",
]

BRUTEFORCE_MAX_N = 20


class UnsupportedDistributionError(ValueError):
    """A variable has no built-in boundedness parameter and no manual override."""


def _check_inputs(poly: MultilinearPolynomial, dists: Sequence[Distribution]) -> None:
    if len(dists) != poly.n:
        raise PolynomialError(f"dimension mismatch: {poly.n} variables, {len(dists)} distributions")


def _aggregate(poly, abs_means, r):
    totals: dict[tuple, object] = {}
    for h, w in poly.edges.items():
        if not h or len(h) < r:
            continue
        aw = abs(w)
        for S in itertools.combinations(h, r):
            term = aw
            for v in h:
                if v not in S:
                    term = term * abs_means[v - 1]
            totals[S] = totals.get(S, 0) + term
    return totals


def mu(poly: MultilinearPolynomial, dists: Sequence[Distribution], r: int):
    """``mu_r`` by aggregating each edge's contribution to its ``r``-subsets."""
    _check_inputs(poly, dists)
    if not 0 <= r <= poly.power:
        raise ValueError(f"r={r} outside [0, {poly.power}]")
    abs_means = [d.abs_mean() for d in dists]
    totals = _aggregate(poly, abs_means, r)
    return max(totals.values(), default=_zero_like(poly))


def mu_all(poly: MultilinearPolynomial, dists: Sequence[Distribution]) -> list:
    _check_inputs(poly, dists)
    abs_means = [d.abs_mean() for d in dists]
    return [max(_aggregate(poly, abs_means, r).values(), default=_zero_like(poly)) for r in range(poly.power + 1)]


def mu_bruteforce(poly: MultilinearPolynomial, dists: Sequence[Distribution], r: int):
    """Literal maximum over every size-``r`` subset of ``[n]``."""
    _check_inputs(poly, dists)
    if poly.n > BRUTEFORCE_MAX_N:
        raise ValueError(f"n={poly.n} too large for brute force (max {BRUTEFORCE_MAX_N})")
    if not 0 <= r <= poly.power:
        raise ValueError(f"r={r} outside [0, {poly.power}]")
    abs_means = [d.abs_mean() for d in dists]
    best = _zero_like(poly)
    for S in itertools.combinations(range(1, poly.n + 1), r):
        s = set(S)
        total = _zero_like(poly)
        for h, w in poly.edges.items():
            if h and s <= set(h):
                term = abs(w)
                for v in set(h) - s:
                    term = term * abs_means[v - 1]
                total = total + term
        if total > best:
            best = total
    return best


def _zero_like(poly):
    return Fraction(0) if poly.is_exact else 0.0


def _jsonable(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, float) and math.isinf(x):
        return None
    return float(x)


@dataclass(frozen=True)
class SmoothnessProfile:
    """Inputs of the tail bounds for one (polynomial, distributions) instance."""

    mu: tuple
    L: object
    mean: object
    variance: object
    q: int
    L_per_variable: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if any(m < 0 for m in self.mu):
            raise ValueError("mu entries must be nonnegative")
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")
        if len(self.mu) != self.q + 1:
            raise ValueError(f"expected {self.q + 1} mu entries, got {len(self.mu)}")

    @property
    def sigma(self) -> float:
        return math.sqrt(float(self.variance))

    def to_dict(self) -> dict:
        return {
            "mu": [_jsonable(m) for m in self.mu],
            "L": _jsonable(self.L),
            "mean": _jsonable(self.mean),
            "variance": _jsonable(self.variance),
            "q": self.q,
        }


def profile_from_dict(data) -> SmoothnessProfile:
    try:
        return SmoothnessProfile(
            mu=tuple(data["mu"]),
            L=data["L"],
            mean=data["mean"],
            variance=data["variance"],
            q=int(data["q"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"profile: missing or malformed field {exc}") from None


def profile(
    poly: MultilinearPolynomial,
    dists: Sequence[Distribution],
    L_overrides: Sequence | None = None,
) -> SmoothnessProfile:
    """Assemble ``mu_0..mu_q``, ``L``, mean and variance.

    ``L`` is the maximum boundedness parameter over the variables that occur
    in some non-empty edge; ``L_overrides[v]`` (when not ``None``) replaces the
    built-in value for variable ``v + 1``.
    """
    _check_inputs(poly, dists)
    overrides = list(L_overrides) if L_overrides is not None else [None] * poly.n
    if len(overrides) != poly.n:
        raise PolynomialError(f"dimension mismatch: {len(overrides)} L overrides for n={poly.n}")
    used = {v for h in poly.edges for v in h}
    per_var = []
    for v, (d, override) in enumerate(zip(dists, overrides), start=1):
        if override is not None:
            per_var.append(override)
            continue
        try:
            per_var.append(d.cmb_parameter())
        except NotImplementedError:
            if v in used:
                raise UnsupportedDistributionError(
                    f"variable {v}: no boundedness parameter for {type(d).__name__}; supply an L override"
                ) from None
            per_var.append(None)
    L = max((per_var[v - 1] for v in used), default=0)
    return SmoothnessProfile(
        mu=tuple(mu_all(poly, dists)),
        L=L,
        mean=moments.exact_mean(poly, dists),
        variance=moments.exact_variance(poly, dists),
        q=poly.power,
        L_per_variable=tuple(per_var),
    )
