"""scikit-learn style front end.

``PolynomialTailBound`` is fitted on one problem (a polynomial plus the law
of each variable) and then maps deviation levels to bound values.  The
problem plays the role of the training data; ``lambda`` arrays play the role
of samples passed to ``predict``/``transform``.

>>> from polybound import MultilinearPolynomial, Rademacher
>>> f = MultilinearPolynomial.from_terms(2, [((1, 2), 1)])
>>> est = PolynomialTailBound(R=2.0).fit((f, [Rademacher(), Rademacher()]))
>>> est.predict([0.0]).tolist()
[1.0]
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .bounds import BoundConstants, even_moment_bound, evaluate_bounds, load_constants, main_tail_bound
from .distributions import as_distributions
from .model import MultilinearPolynomial
from .montecarlo import DEFAULT_SEED, compare
from .problem import ProblemSpec, parse_problem
from .smoothness import SmoothnessProfile, profile as build_profile

__all__ = ["PolynomialTailBound", "check_lambdas", "check_problem", "BOUND_COLUMNS"]

BOUND_COLUMNS = ("main", "ss", "hc", "bernstein_mu", "bernstein_var")


def check_lambdas(lambdas) -> np.ndarray:
    """Validate deviation levels: a finite, nonnegative 1-d array (a column is accepted)."""
    arr = np.asarray(lambdas, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    arr = check_array(arr, ensure_2d=False, dtype=float, input_name="lambdas")
    if arr.ndim != 1:
        raise ValueError(f"lambdas must be 1-d, got shape {arr.shape}")
    if np.any(arr < 0):
        raise ValueError("lambdas must be nonnegative")
    return arr


def check_problem(X) -> ProblemSpec:
    """Coerce a :class:`ProblemSpec`, a problem dict, or ``(polynomial, laws)`` to a spec."""
    if isinstance(X, ProblemSpec):
        return X
    if isinstance(X, dict):
        return parse_problem(X)
    if isinstance(X, tuple) and len(X) == 2 and isinstance(X[0], MultilinearPolynomial):
        poly, laws = X
        laws = as_distributions(laws)
        if len(laws) != poly.n:
            raise ValueError(f"expected {poly.n} laws, got {len(laws)}")
        return ProblemSpec(polynomial=poly, variables=laws)
    raise TypeError(
        "expected a ProblemSpec, a problem dict, or a (MultilinearPolynomial, laws) pair; "
        f"got {type(X).__name__}"
    )


class PolynomialTailBound(TransformerMixin, BaseEstimator):
    """Tail bounds for ``|f(Y) - E f(Y)|`` of one multilinear polynomial.

    Parameters
    ----------
    R, R4, R_hc : float, optional
        Override the corresponding manifest constant.
    constants : str or BoundConstants, optional
        Manifest path or object; defaults to the shipped fit.
    L : float or sequence, optional
        Per-variable boundedness overrides (a scalar applies to every variable).
    samples, seed, level, workers
        Monte Carlo settings used by :meth:`report`; ``samples=0`` skips it.
    """

    def __init__(
        self,
        R: Optional[float] = None,
        R4: Optional[float] = None,
        R_hc: Optional[float] = None,
        constants=None,
        L=None,
        samples: int = 0,
        seed: int = DEFAULT_SEED,
        level: float = 0.99,
        workers: int = 1,
    ):
        self.R = R
        self.R4 = R4
        self.R_hc = R_hc
        self.constants = constants
        self.L = L
        self.samples = samples
        self.seed = seed
        self.level = level
        self.workers = workers

    def _resolve_constants(self) -> BoundConstants:
        base = self.constants if isinstance(self.constants, BoundConstants) else load_constants(self.constants)
        overrides = {k: float(v) for k, v in (("R", self.R), ("R4", self.R4), ("R_hc", self.R_hc)) if v is not None}
        return base.with_values(**overrides) if overrides else base

    def fit(self, X, y=None):
        spec = check_problem(X)
        if self.samples < 0:
            raise ValueError("samples must be >= 0")
        if not 0 < self.level < 1:
            raise ValueError("level must lie in (0, 1)")
        L = self.L
        if L is not None and np.isscalar(L):
            L = [L] * spec.polynomial.n
        overrides = L if L is not None else spec.L_overrides
        if spec.profile_override is not None and L is None:
            prof = spec.profile_override
        else:
            prof = build_profile(spec.polynomial, spec.variables, overrides)
        self.problem_ = spec
        self.profile_: SmoothnessProfile = prof
        self.constants_ = self._resolve_constants()
        self.n_variables_ = spec.polynomial.n
        self.q_ = prof.q
        return self

    def predict(self, X) -> np.ndarray:
        """Clamped variance-based tail bound at each deviation level."""
        check_is_fitted(self, "profile_")
        lams = check_lambdas(X)
        return np.array([main_tail_bound(lam, self.profile_, self.constants_) for lam in lams])

    def transform(self, X) -> np.ndarray:
        """Clamped bounds, one column per entry of ``BOUND_COLUMNS``."""
        check_is_fitted(self, "profile_")
        lams = check_lambdas(X)
        rows = [evaluate_bounds(lam, self.profile_, self.constants_) for lam in lams]
        return np.array(
            [[r.main_bound, r.ss_bound, r.hc_bound, r.bernstein_mu, r.bernstein_var] for r in rows]
        ).reshape(len(rows), len(BOUND_COLUMNS))

    def get_feature_names_out(self, input_features=None) -> np.ndarray:
        return np.array(BOUND_COLUMNS, dtype=object)

    def report(self, lambdas: Optional[Sequence[float]] = None) -> list:
        """Full bound table, joined with Monte Carlo estimates when ``samples > 0``.

        ``lambdas`` defaults to the problem's own grid.
        """
        check_is_fitted(self, "profile_")
        lams = self.problem_.lambdas(self.profile_) if lambdas is None else check_lambdas(lambdas)
        spec = self.problem_
        return compare(
            spec.polynomial, spec.variables, lams, self.constants_, self.samples,
            seed=self.seed, level=self.level, workers=self.workers, profile=self.profile_,
        )

    def moment_bound(self, k: int) -> float:
        """Upper bound on ``E|f - E f|^k`` for even ``k``."""
        check_is_fitted(self, "profile_")
        return even_moment_bound(k, self.profile_, self.constants_)
