"""Tail and moment bound formulas, plus fitting of their absolute constants.

The constants ``R`` (tail), ``R4`` (even moments), ``R0`` (counting) and
``R_hc`` (hypercontractive tail) are only known to exist; their operational
values come from fits over a corpus and live in a JSON manifest.
"""
from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from typing import Callable, Iterable, Optional, Sequence

from .smoothness import SmoothnessProfile

__all__ = [
    "E2",
    "BoundConstants",
    "ConstantFitError",
    "TailBoundReport",
    "bernstein_mu",
    "bernstein_var",
    "main_tail_bound",
    "ss_tail_bound",
    "hc_tail_bound",
    "even_moment_bound",
    "varbound_check",
    "fit_constant",
    "fit_monotone",
    "load_constants",
    "default_constants",
]

E2 = math.e**2
SEARCH_CAP = 1e6
REL_TOL = 1e-3
CONSTANTS_ENV = "POLYBOUND_CONSTANTS"


class ConstantFitError(RuntimeError):
    """No constant within the search cap satisfies the corpus."""


@dataclass(frozen=True)
class BoundConstants:
    R: float = 1.0
    R4: float = 1.0
    R0: float = 1.0
    R_hc: float = 1.0
    corpus_hash: str = ""
    fit_date: str = ""

    def __post_init__(self):
        for name in ("R", "R4", "R0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.R_hc > 0:
            raise ValueError("R_hc must be positive")

    def to_dict(self) -> dict:
        return asdict(self)

    def with_values(self, **kw) -> "BoundConstants":
        return replace(self, **kw)

    @classmethod
    def from_dict(cls, data) -> "BoundConstants":
        known = {f: data[f] for f in ("R", "R4", "R0", "R_hc", "corpus_hash", "fit_date") if f in data}
        for f in ("R", "R4", "R0", "R_hc"):
            if f in known:
                known[f] = float(known[f])
        return cls(**known)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def default_constants() -> BoundConstants:
    """The manifest shipped with the package."""
    text = resources.files("polybound.data").joinpath("constants.json").read_text()
    return BoundConstants.from_dict(json.loads(text))


def load_constants(path=None) -> BoundConstants:
    """Load a manifest from ``path``, ``$POLYBOUND_CONSTANTS`` or the shipped default."""
    path = path or os.environ.get(CONSTANTS_ENV)
    if not path:
        return default_constants()
    with open(path) as fh:
        return BoundConstants.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# linear Bernstein bounds


def bernstein_mu(lam: float, mu0_sum: float) -> float:
    """``exp(-lam^2 / (2 mu + 2 lam / 3))``; one-sided, for sums of [0, 1] variables."""
    lam, mu0_sum = float(lam), float(mu0_sum)
    if lam <= 0:
        return 1.0
    return math.exp(-lam * lam / (2 * mu0_sum + 2 * lam / 3))


def bernstein_var(lam: float, V: float) -> float:
    """Variance form: ``exp(-lam^2 / (2 V + 2 lam / 3))``."""
    lam, V = float(lam), float(V)
    if lam <= 0:
        return 1.0
    return math.exp(-lam * lam / (2 * V + 2 * lam / 3))


# ---------------------------------------------------------------------------
# polynomial tail bounds


def _smoothness_terms(lam: float, profile: SmoothnessProfile, scale: float) -> list[float]:
    """``exp(-(lam / (mu_r L^r scale))^(1/r))`` for ``r = 1..q``; zero denominators give 0."""
    L = float(profile.L)
    out = []
    for r in range(1, profile.q + 1):
        denom = float(profile.mu[r]) * L**r * scale
        if denom <= 0:
            out.append(0.0)
            continue
        out.append(math.exp(-((lam / denom) ** (1.0 / r))))
    return out


def _gauss_term(lam: float, denom: float) -> float:
    if denom <= 0:
        return 0.0
    return math.exp(-lam * lam / denom)


def main_tail_bound(lam: float, profile: SmoothnessProfile, constants: BoundConstants, clamp: bool = True) -> float:
    """Variance-based tail bound on ``Pr[|f - Ef| >= lam]``.

    ``e^2 max(exp(-lam^2 / (Var R^q)), max_r exp(-(lam / (mu_r L^r R^q))^(1/r)))``.
    With ``clamp=False`` the raw value is returned (it may exceed 1).
    """
    lam = float(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    scale = float(constants.R) ** profile.q
    terms = [_gauss_term(lam, float(profile.variance) * scale)]
    terms += _smoothness_terms(lam, profile, scale)
    # at lam = 0 every exponent vanishes, even for a constant polynomial
    raw = E2 if lam == 0 else E2 * max(terms)
    return min(raw, 1.0) if clamp else raw


def ss_tail_bound(lam: float, profile: SmoothnessProfile, constants: BoundConstants, clamp: bool = True) -> float:
    """Smoothness-only tail bound, with ``max_r mu_0 mu_r L^r R^q`` in place of the variance."""
    lam = float(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    scale = float(constants.R) ** profile.q
    L = float(profile.L)
    mu0 = float(profile.mu[0])
    proxy = max((mu0 * float(profile.mu[r]) * L**r * scale for r in range(1, profile.q + 1)), default=0.0)
    terms = [_gauss_term(lam, proxy)] + _smoothness_terms(lam, profile, scale)
    raw = E2 if lam == 0 else E2 * max(terms)
    return min(raw, 1.0) if clamp else raw


def warn_if_signed(weights: Iterable) -> None:
    if any(w < 0 for w in weights):
        warnings.warn(
            "smoothness-only bound assumes nonnegative coefficients; evaluating with |w_h|",
            stacklevel=2,
        )


def hc_tail_bound(lam: float, variance: float, q: int, constants: BoundConstants, clamp: bool = True) -> float:
    """``e^2 exp(-(lam^2 / (R_hc Var))^(1/q))``; valid for Gaussian or Rademacher inputs."""
    lam, variance = float(lam), float(variance)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if lam == 0:
        raw = E2
    elif q <= 0 or variance <= 0:
        raw = 0.0
    else:
        raw = E2 * math.exp(-((lam * lam / (float(constants.R_hc) * variance)) ** (1.0 / q)))
    return min(raw, 1.0) if clamp else raw


def even_moment_bound(k: int, profile: SmoothnessProfile, constants: BoundConstants) -> float:
    """``max((k R4^q Var)^(k/2), max_t (k^t R4^q L^t mu_t)^k)`` for even ``k >= 2``."""
    if k < 2 or k % 2:
        raise ValueError(f"k must be an even integer >= 2, got {k}")
    scale = float(constants.R4) ** profile.q
    L = float(profile.L)
    best = (k * scale * float(profile.variance)) ** (k / 2)
    for t in range(1, profile.q + 1):
        best = max(best, (k**t * scale * L**t * float(profile.mu[t])) ** k)
    return best


def varbound_check(profile: SmoothnessProfile, q: Optional[int] = None) -> tuple[bool, float]:
    """Check ``Var <= 2q 4^q max_r (mu_0 mu_r 4^r L^r)``; returns ``(holds, rhs / lhs)``."""
    q = profile.q if q is None else q
    L = float(profile.L)
    mu0 = float(profile.mu[0])
    inner = max((mu0 * float(profile.mu[r]) * 4.0**r * L**r for r in range(1, q + 1)), default=0.0)
    rhs = 2 * q * 4.0**q * inner
    lhs = float(profile.variance)
    if lhs == 0:
        return True, math.inf
    return lhs <= rhs, rhs / lhs


# ---------------------------------------------------------------------------
# tabulated report


@dataclass
class TailBoundReport:
    lam: float
    main_raw: float
    main_bound: float
    ss_raw: float
    ss_bound: float
    hc_raw: float
    hc_bound: float
    bernstein_mu: float
    bernstein_var: float
    empirical: object = None  # montecarlo.TailEstimate
    violation: bool = False

    BOUND_FIELDS = ("lambda", "main_raw", "main_clamped", "ss_clamped", "hc_clamped", "bernstein_var")
    EMPIRICAL_FIELDS = ("estimate", "ci_low", "ci_high")

    @classmethod
    def csv_header(cls, empirical: bool = True) -> list[str]:
        """Column names; the empirical columns only appear when a simulation ran."""
        return list(cls.BOUND_FIELDS) + (list(cls.EMPIRICAL_FIELDS) if empirical else []) + ["violation_flag"]

    def csv_row(self, empirical: bool = True) -> list[str]:
        vals = [self.lam, self.main_raw, self.main_bound, self.ss_bound, self.hc_bound, self.bernstein_var]
        row = [repr(float(v)) for v in vals]
        if empirical:
            emp = self.empirical
            if emp is None:
                row += ["", "", ""]
            else:
                row += [repr(float(emp.estimate)), repr(float(emp.ci_low)), repr(float(emp.ci_high))]
        row.append("1" if self.violation else "0")
        return row

    def to_dict(self) -> dict:
        out = {
            "lambda": self.lam,
            "main_raw": self.main_raw,
            "main_clamped": self.main_bound,
            "ss_raw": self.ss_raw,
            "ss_clamped": self.ss_bound,
            "hc_raw": self.hc_raw,
            "hc_clamped": self.hc_bound,
            "bernstein_mu": self.bernstein_mu,
            "bernstein_var": self.bernstein_var,
            "violation": self.violation,
        }
        if self.empirical is not None:
            e = self.empirical
            out.update(estimate=e.estimate, ci_low=e.ci_low, ci_high=e.ci_high, samples=e.samples, hits=e.hits)
        return out


def evaluate_bounds(lam: float, profile: SmoothnessProfile, constants: BoundConstants) -> TailBoundReport:
    return TailBoundReport(
        lam=float(lam),
        main_raw=main_tail_bound(lam, profile, constants, clamp=False),
        main_bound=main_tail_bound(lam, profile, constants),
        ss_raw=ss_tail_bound(lam, profile, constants, clamp=False),
        ss_bound=ss_tail_bound(lam, profile, constants),
        hc_raw=hc_tail_bound(lam, profile.variance, profile.q, constants, clamp=False),
        hc_bound=hc_tail_bound(lam, profile.variance, profile.q, constants),
        bernstein_mu=bernstein_mu(lam, profile.mu[0]),
        bernstein_var=bernstein_var(lam, profile.variance),
    )


# ---------------------------------------------------------------------------
# constant fitting


def fit_monotone(holds: Callable[[float], bool], lower: float = 1.0, cap: float = SEARCH_CAP, rel_tol: float = REL_TOL) -> float:
    """Smallest ``c >= lower`` (to ``rel_tol``) with ``holds(c)``; ``holds`` must be monotone.

    The returned value always satisfies ``holds``.
    """
    if holds(lower):
        return lower
    lo, hi = lower, lower * 2
    while not holds(hi):
        lo, hi = hi, hi * 2
        if hi > cap:
            raise ConstantFitError(f"no constant up to {cap} satisfies the corpus")
    while (hi - lo) > rel_tol * hi:
        mid = (lo + hi) / 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class MomentDatum:
    """Exact central even moments of one instance, keyed by ``k``."""

    profile: SmoothnessProfile
    moments: dict


@dataclass(frozen=True)
class TailDatum:
    """Empirical upper targets ``(lam, value)`` the tail bound must dominate."""

    profile: SmoothnessProfile
    targets: tuple


def _r4_holds(corpus: Sequence[MomentDatum], c: float) -> bool:
    consts = BoundConstants(R4=c)
    for item in corpus:
        for k, m in item.moments.items():
            if float(m) > even_moment_bound(k, item.profile, consts):
                return False
    return True


def _r_holds(corpus: Sequence[TailDatum], c: float) -> bool:
    consts = BoundConstants(R=c)
    for item in corpus:
        for lam, target in item.targets:
            if main_tail_bound(lam, item.profile, consts) < target:
                return False
    return True


def _rhc_holds(corpus: Sequence[TailDatum], c: float) -> bool:
    consts = BoundConstants(R_hc=c)
    for item in corpus:
        for lam, target in item.targets:
            if hc_tail_bound(lam, item.profile.variance, item.profile.q, consts) < target:
                return False
    return True


_FITTERS = {"R": _r_holds, "R4": _r4_holds, "R_hc": _rhc_holds}
# R_hc is only required to be positive
_LOWER = {"R": 1.0, "R4": 1.0, "R_hc": 1.0 / 64}


def fit_constant(corpus: Sequence, kind: str) -> float:
    """Minimal constant (bisection to 1e-3 relative) valid on every corpus item.

    ``R`` and ``R4`` are searched from 1 upward, ``R_hc`` from 1/64.

    ``kind`` is ``"R4"`` for :class:`MomentDatum` items, ``"R"`` or ``"R_hc"``
    for :class:`TailDatum` items.
    """
    if kind not in _FITTERS:
        raise ValueError(f"unknown constant kind {kind!r}")
    if not corpus:
        raise ValueError("corpus is empty")
    check = _FITTERS[kind]
    return fit_monotone(lambda c: check(corpus, c), lower=_LOWER[kind])

