"""Tail and moment bounds for multilinear polynomials of independent random variables."""
from .bounds import (
    BoundConstants,
    TailBoundReport,
    bernstein_mu,
    bernstein_var,
    even_moment_bound,
    evaluate_bounds,
    fit_constant,
    hc_tail_bound,
    load_constants,
    main_tail_bound,
    ss_tail_bound,
    varbound_check,
)
from .combinatorics import LabeledHypergraph, canonical_orderings, enumerate_labeled, verify_ordering
from .distributions import (
    Bernoulli,
    Discrete,
    Distribution,
    Exponential,
    Gaussian,
    Geometric,
    LogNormal,
    Poisson,
    Rademacher,
    Uniform,
    catalog,
    verify_cmb,
)
from .estimator import PolynomialTailBound
from .model import MultilinearPolynomial, center, evaluate, split_by_sign_and_size, validate
from .moments import covariance, exact_central_even_moment, exact_mean, exact_moment, exact_variance
from .montecarlo import compare, empirical_tail, wilson_interval
from .problem import ProblemSpec, load_problem
from .smoothness import SmoothnessProfile, mu, profile

__version__ = "0.1.0"
