"""Exact moment oracles.

Two independent routes compute the same expectations:

* *edge expansion*: multiply the polynomial out ``k`` times, merging equal
  monomials, then use independence to factor each monomial's expectation into
  per-variable raw moments;
* *joint brute force*: enumerate every joint outcome of finitely supported
  variables and sum probability-weighted powers.

Exact rational arithmetic is used whenever the weights and the distribution
parameters are rational.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .distributions import Distribution
from .model import MultilinearPolynomial, PolynomialError, center, evaluate

__all__ = [
    "TERM_CAP",
    "MomentCapError",
    "MomentRequest",
    "exact_mean",
    "exact_variance",
    "exact_moment",
    "exact_central_even_moment",
    "joint_bruteforce_moment",
    "covariance",
    "moment",
    "centered_raw_moment",
]

TERM_CAP = 10**7


class MomentCapError(RuntimeError):
    """Requested computation exceeds the configured enumeration cap."""


@dataclass(frozen=True)
class MomentRequest:
    k: int
    centered: bool = False
    method: str = "edge-expansion"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.method not in ("edge-expansion", "joint-bruteforce"):
            raise ValueError(f"unknown method {self.method!r}")


def _check(poly, dists):
    if len(dists) != poly.n:
        raise PolynomialError(f"dimension mismatch: {poly.n} variables, {len(dists)} distributions")


def exact_mean(poly: MultilinearPolynomial, dists: Sequence[Distribution]):
    _check(poly, dists)
    means = [d.mean() for d in dists]
    total = 0
    for h, w in poly.edges.items():
        term = w
        for v in h:
            term = term * means[v - 1]
        total = total + term
    return total


def centered_raw_moment(dist: Distribution, d: int):
    """``E[(Y - EY)^d]`` from the raw moments by the binomial theorem."""
    m = dist.mean()
    if d == 0:
        return 1
    if d == 1:
        return 0 * m
    return sum(math.comb(d, j) * dist.raw_moment(j) * (-m) ** (d - j) for j in range(d + 1))


def exact_variance(poly: MultilinearPolynomial, dists: Sequence[Distribution]):
    """Sum of squared centered weights times the per-variable variances."""
    _check(poly, dists)
    means = [d.mean() for d in dists]
    var = [d.raw_moment(2) - m * m for d, m in zip(dists, means)]
    centered = center(poly, means)
    total = 0
    for h, w in centered.edges.items():
        if not h:
            continue
        term = w * w
        for v in h:
            term = term * var[v - 1]
        total = total + term
    return total


def _expand_power(poly: MultilinearPolynomial, k: int, cap: int) -> dict:
    """Coefficients of ``f^k`` keyed by per-vertex degree tuples ``((v, d), ...)``."""
    edges = [(h, w) for h, w in poly.edges.items()]
    current: dict[tuple, object] = {(): 1}
    for _ in range(k):
        if len(current) * max(len(edges), 1) > cap:
            raise MomentCapError(
                f"expansion needs {len(current) * len(edges)} products, cap is {cap}"
            )
        nxt: dict[tuple, object] = {}
        for key, c in current.items():
            degrees = dict(key)
            for h, w in edges:
                deg = dict(degrees)
                for v in h:
                    deg[v] = deg.get(v, 0) + 1
                new_key = tuple(sorted(deg.items()))
                nxt[new_key] = nxt.get(new_key, 0) + c * w
        current = nxt
    return current


def _expectation(expansion: dict, moment_fn: Callable[[int, int], object]):
    cache: dict = {}
    total = 0
    for key in sorted(expansion):
        term = expansion[key]
        for v, d in key:
            if (v, d) not in cache:
                cache[(v, d)] = moment_fn(v, d)
            term = term * cache[(v, d)]
        total = total + term
    return total


def exact_moment(poly: MultilinearPolynomial, dists: Sequence[Distribution], k: int, cap: int = TERM_CAP):
    """``E[f(Y)^k]`` by edge expansion."""
    _check(poly, dists)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    expansion = _expand_power(poly, k, cap)
    return _expectation(expansion, lambda v, d: dists[v - 1].raw_moment(d))


def _centered_parts(poly, dists):
    means = [d.mean() for d in dists]
    return center(poly, means).without_empty()


def exact_central_even_moment(
    poly: MultilinearPolynomial, dists: Sequence[Distribution], k: int, cap: int = TERM_CAP
):
    """``E[(f(Y) - E f(Y))^k]`` for even ``k`` via the centered expansion."""
    _check(poly, dists)
    if k < 0 or k % 2:
        raise ValueError(f"k must be a nonnegative even integer, got {k}")
    g = _centered_parts(poly, dists)
    expansion = _expand_power(g, k, cap)
    return _expectation(expansion, lambda v, d: centered_raw_moment(dists[v - 1], d))


def joint_bruteforce_moment(
    poly: MultilinearPolynomial,
    dists: Sequence[Distribution],
    k: int,
    centered: bool = False,
    cap: int = TERM_CAP,
):
    """Sum ``P(y) (f(y) - c)^k`` over every joint outcome of finite supports."""
    _check(poly, dists)
    supports = []
    for v, d in enumerate(dists, start=1):
        s = d.support()
        if s is None:
            raise MomentCapError(f"variable {v}: {type(d).__name__} has infinite support")
        supports.append(s)
    size = math.prod(len(s) for s in supports)
    if size > cap:
        raise MomentCapError(f"{size} joint outcomes exceed cap {cap}")
    c = exact_mean(poly, dists) if centered else 0
    total = 0
    for outcome in itertools.product(*supports):
        x = [val for val, _ in outcome]
        prob = 1
        for _, p in outcome:
            prob = prob * p
        total = total + prob * (evaluate(poly, x) - c) ** k
    return total


def covariance(
    poly1: MultilinearPolynomial,
    poly2: MultilinearPolynomial,
    dists: Sequence[Distribution],
    cap: int = TERM_CAP,
):
    """``E[g1(Y) g2(Y)]``.

    For zero-mean variables and polynomials without constant terms this is
    the covariance; it is exactly zero when the two edge supports are disjoint.
    """
    _check(poly1, dists)
    _check(poly2, dists)
    e1 = _expand_power(poly1, 1, cap)
    e2 = _expand_power(poly2, 1, cap)
    if len(e1) * len(e2) > cap:
        raise MomentCapError(f"{len(e1) * len(e2)} products exceed cap {cap}")
    product: dict[tuple, object] = {}
    for k1, c1 in e1.items():
        for k2, c2 in e2.items():
            deg = dict(k1)
            for v, d in k2:
                deg[v] = deg.get(v, 0) + d
            key = tuple(sorted(deg.items()))
            product[key] = product.get(key, 0) + c1 * c2
    return _expectation(product, lambda v, d: dists[v - 1].raw_moment(d))


def moment(poly: MultilinearPolynomial, dists: Sequence[Distribution], request: MomentRequest):
    """Dispatch a :class:`MomentRequest` to the matching oracle."""
    if request.method == "joint-bruteforce":
        return joint_bruteforce_moment(poly, dists, request.k, request.centered)
    if request.centered:
        if request.k % 2 == 0:
            return exact_central_even_moment(poly, dists, request.k)
        g = _centered_parts(poly, dists)
        return _expectation(_expand_power(g, request.k, TERM_CAP),
                            lambda v, d: centered_raw_moment(dists[v - 1], d))
    return exact_moment(poly, dists, request.k)
