import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from polybound.distributions import Bernoulli, Gaussian, Poisson, Rademacher
from polybound.model import MultilinearPolynomial, center, split_by_sign_and_size
from polybound.moments import (
    MomentCapError,
    MomentRequest,
    covariance,
    exact_central_even_moment,
    exact_mean,
    exact_moment,
    exact_variance,
    joint_bruteforce_moment,
    moment,
)

from conftest import instances

MP = MultilinearPolynomial
HALF = Fraction(1, 2)
RAD2 = [Rademacher()] * 2


def test_mean_examples():
    f = MP.from_terms(2, [((1, 2), 1)])
    assert exact_mean(f, [Bernoulli(HALF)] * 2) == Fraction(1, 4)
    assert exact_mean(f, RAD2) == 0
    g = MP.from_terms(2, [((1,), 2), ((1, 2), 3)])
    assert exact_mean(g, [Bernoulli(1)] * 2) == 5


def test_mean_is_centered_constant():
    f = MP.from_terms(3, [((1, 2), 2), ((2, 3), -1), ((1,), 3)])
    dists = [Bernoulli(Fraction(1, 3)), Poisson(2), Rademacher()]
    means = [d.mean() for d in dists]
    assert exact_mean(f, dists) == center(f, means).edges.get((), 0)


def test_variance_examples():
    f = MP.from_terms(2, [((1, 2), 1)])
    for p in (Fraction(1, 3), HALF, Fraction(4, 5)):
        assert exact_variance(f, [Bernoulli(p)] * 2) == p * p * (1 - p * p)
    assert exact_variance(f, RAD2) == 1
    assert exact_variance(MP.from_terms(2, [((), 4)]), RAD2) == 0


def test_raw_moment_examples():
    f = MP.from_terms(2, [((1, 2), 1)])
    assert exact_moment(f, RAD2, 2) == 1
    assert exact_moment(f, RAD2, 3) == 0


def test_disjoint_pairs_second_moment():
    # E[f^2] = 5/8 by enumeration of the 16 outcomes; 3/8 is the centered value
    f = MP.from_terms(4, [((1, 2), 1), ((3, 4), 1)])
    dists = [Bernoulli(HALF)] * 4
    assert exact_moment(f, dists, 2) == Fraction(5, 8)
    assert joint_bruteforce_moment(f, dists, 2) == Fraction(5, 8)
    assert exact_central_even_moment(f, dists, 2) == Fraction(3, 8)


def test_central_even_examples():
    f = MP.from_terms(2, [((1, 2), 1)])
    assert exact_central_even_moment(f, RAD2, 4) == 1
    assert exact_central_even_moment(MP.from_terms(2, [((), 3)]), RAD2, 6) == 0
    with pytest.raises(ValueError):
        exact_central_even_moment(f, RAD2, 3)


def test_bruteforce_examples():
    f = MP.from_terms(2, [((1, 2), 1)])
    assert joint_bruteforce_moment(f, [Bernoulli(HALF)] * 2, 1) == Fraction(1, 4)
    assert joint_bruteforce_moment(f, RAD2, 2, centered=True) == 1


def test_odd_central_moment_against_monte_carlo():
    f = MP.from_terms(3, [((1, 2), 1), ((2, 3), 1)])
    dists = [Bernoulli(HALF)] * 3
    exact = float(joint_bruteforce_moment(f, dists, 3, centered=True))
    X = np.random.default_rng(99).integers(0, 2, size=(10**7, 3)).astype(float)
    vals = (X[:, 0] * X[:, 1] + X[:, 1] * X[:, 2] - 0.5) ** 3
    se = vals.std() / math.sqrt(vals.size)
    assert abs(vals.mean() - exact) <= 5 * se


def test_bruteforce_rejects_infinite_support():
    f = MP.from_terms(1, [((1,), 1)])
    with pytest.raises(MomentCapError):
        joint_bruteforce_moment(f, [Poisson(1)], 2)


def test_expansion_cap():
    f = MP.from_terms(6, [((i, j), 1) for i in range(1, 7) for j in range(i + 1, 7)])
    with pytest.raises(MomentCapError):
        exact_moment(f, [Rademacher()] * 6, 6, cap=1000)


def test_covariance_examples():
    rad = [Rademacher()] * 4
    g12 = MP.from_terms(4, [((1, 2), 1)])
    assert covariance(g12, MP.from_terms(4, [((3, 4), 1)]), rad) == 0
    assert covariance(g12, g12, rad) == 1
    assert covariance(g12, MP.from_terms(4, [((1, 3), 1)]), rad) == 0
    assert joint_bruteforce_moment(MP.from_terms(4, [((1, 2, 3), 1)]), rad, 1) == 0


def test_moment_dispatch():
    f = MP.from_terms(2, [((1, 2), 1)])
    dists = [Bernoulli(HALF)] * 2
    assert moment(f, dists, MomentRequest(2, centered=True, method="joint-bruteforce")) == Fraction(3, 16)
    assert moment(f, dists, MomentRequest(2, centered=True, method="edge-expansion")) == Fraction(3, 16)
    assert moment(f, dists, MomentRequest(1, centered=False, method="edge-expansion")) == Fraction(1, 4)
    with pytest.raises(ValueError):
        MomentRequest(0, False, "edge-expansion")


@given(instances(finite=True))
def test_variance_matches_enumeration(inst):
    f, dists = inst
    assert exact_variance(f, dists) == joint_bruteforce_moment(f, dists, 2, centered=True)


@given(instances(finite=True, n_max=5, max_edges=4), st.integers(1, 6))
def test_expansion_matches_enumeration(inst, k):
    f, dists = inst
    assert exact_moment(f, dists, k) == joint_bruteforce_moment(f, dists, k)
    if k % 2 == 0:
        assert exact_central_even_moment(f, dists, k) == joint_bruteforce_moment(f, dists, k, centered=True)


@given(instances())
def test_second_central_moment_is_variance(inst):
    f, dists = inst
    assert exact_central_even_moment(f, dists, 2) == exact_variance(f, dists)


@given(instances(finite=True))
def test_variance_splits_over_sign_size_parts(inst):
    f, dists = inst
    g = center(f, [d.mean() for d in dists])
    var = [d.central_abs_moment(2) for d in dists]
    total = 0
    for part, _, _ in split_by_sign_and_size(g):
        for h, w in part.edges.items():
            total += w * w * math.prod((var[v - 1] for v in h), start=Fraction(1))
    assert total == exact_variance(f, dists)


@given(instances(n_max=6, max_edges=4), st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 6]))
def test_minkowski(inst, seed, k):
    f, dists = inst
    rng = random.Random(seed)
    terms = [(rng.sample(range(1, f.n + 1), rng.randint(1, f.power)), Fraction(rng.randint(-3, 3) or 1)) for _ in range(3)]
    g = MP.from_terms(f.n, terms, f.power)
    a = float(exact_central_even_moment(f, dists, k)) ** (1 / k)
    b = float(exact_central_even_moment(g, dists, k)) ** (1 / k)
    ab = float(exact_central_even_moment(f + g, dists, k)) ** (1 / k)
    assert ab <= a + b + 1e-9 * (1 + a + b)


def test_gaussian_chaos_fourth_moment():
    # x1 x2 with standard normals: E[(x1 x2)^4] = 3 * 3
    f = MP.from_terms(2, [((1, 2), 1)])
    assert exact_central_even_moment(f, [Gaussian(0, 1)] * 2, 4) == 9
