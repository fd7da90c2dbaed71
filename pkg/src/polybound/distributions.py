"""Catalog of independent-variable laws.

Every law exposes its mean, ``E|Y|``, raw moments, central absolute moments,
a central-moment-boundedness parameter ``L`` and a sampler.  Parameters given
as ints or :class:`~fractions.Fraction` produce exact rational results
wherever a closed form exists.

Central moment boundedness with parameter ``L`` means
``E|Z - EZ|^i <= i * L * E|Z - EZ|^(i-1)`` for every ``i >= 1``.  The
parameter is taken from one of three classes:

* bounded laws (explicit supports, Bernoulli, Rademacher): ``sup |Z - EZ|``;
* continuous log-concave laws (uniform, Gaussian, exponential):
  ``E|X - EX| / ln 2``.  The cruder ``2.88 * E|X|`` also holds but is not used;
* discrete log-concave laws (Poisson, geometric):
  ``1 + max(E[|X - EX| | X >= EX], E[|X - EX| | X < EX])``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np
from scipy import integrate, special

__all__ = [
    "MOMENT_CAP",
    "TAIL_MASS",
    "DistributionError",
    "MomentCapError",
    "Distribution",
    "Discrete",
    "Bernoulli",
    "Rademacher",
    "Uniform",
    "Gaussian",
    "Exponential",
    "Poisson",
    "Geometric",
    "LogNormal",
    "CmbReport",
    "mean",
    "abs_mean",
    "raw_moment",
    "central_abs_moment",
    "cmb_parameter",
    "verify_cmb",
    "sample",
    "dist_from_dict",
    "dist_to_dict",
    "catalog",
]

MOMENT_CAP = 32
# truncation threshold for infinite integer supports
TAIL_MASS = 1e-12


class DistributionError(ValueError):
    pass


class MomentCapError(DistributionError):
    pass


def _num(x):
    """Keep rationals exact, coerce everything else to float."""
    if isinstance(x, bool):
        raise DistributionError(f"expected a number, got {x!r}")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise DistributionError(f"cannot parse number {x!r}") from None
    return float(x)


def _exact(*xs) -> bool:
    return all(isinstance(x, Fraction) for x in xs)


def _check_order(i: int, cap: int = MOMENT_CAP) -> None:
    if i < 0:
        raise DistributionError(f"moment order must be >= 0, got {i}")
    if i > cap:
        raise MomentCapError(f"moment order {i} exceeds cap {cap}")


class Distribution:
    """Base class; subclasses are frozen dataclasses."""

    kind: str = ""
    # "bounded", "continuous-lc" or "discrete-lc"
    family: str = ""

    def mean(self):
        raise NotImplementedError

    def abs_mean(self):
        raise NotImplementedError

    def raw_moment(self, i: int):
        raise NotImplementedError

    def central_abs_moment(self, i: int):
        raise NotImplementedError

    def cmb_parameter(self):
        raise NotImplementedError

    def sample_array(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_exact(self) -> bool:
        return False

    def variance(self):
        return self.central_abs_moment(2)

    def support(self):
        """Finite ``(value, prob)`` pairs, or ``None`` for infinite/continuous support."""
        return None

    def sample(self, rng: np.random.Generator) -> float:
        return float(self.sample_array(rng, 1)[0])

    def to_dict(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# bounded laws


@dataclass(frozen=True)
class Discrete(Distribution):
    """Finite support given as ``(value, probability)`` pairs."""

    points: tuple

    kind = "discrete"
    family = "bounded"

    def __post_init__(self):
        pts = tuple((_num(x), _num(p)) for x, p in self.points)
        if not pts:
            raise DistributionError("discrete: empty support")
        if any(p < 0 for _, p in pts):
            raise DistributionError("discrete: negative probability")
        total = sum(p for _, p in pts)
        if abs(total - 1) > 1e-12:
            raise DistributionError(f"discrete: probabilities sum to {float(total)!r}, not 1")
        object.__setattr__(self, "points", pts)

    @property
    def is_exact(self) -> bool:
        return all(_exact(x, p) for x, p in self.points)

    def support(self):
        return [(x, p) for x, p in self.points if p > 0]

    def mean(self):
        return sum(x * p for x, p in self.points)

    def abs_mean(self):
        return sum(abs(x) * p for x, p in self.points)

    def raw_moment(self, i):
        _check_order(i)
        return sum((x**i if i else 1) * p for x, p in self.points)

    def central_abs_moment(self, i):
        _check_order(i)
        m = self.mean()
        return sum((abs(x - m) ** i if i else 1) * p for x, p in self.points)

    def cmb_parameter(self):
        m = self.mean()
        return max(abs(x - m) for x, p in self.points if p > 0)

    def sample_array(self, rng, size):
        xs = np.array([float(x) for x, _ in self.points])
        ps = np.array([float(p) for _, p in self.points])
        return rng.choice(xs, size=size, p=ps / ps.sum())

    def to_dict(self):
        return {"kind": "discrete", "support": [[_to_json(x), _to_json(p)] for x, p in self.points]}


@dataclass(frozen=True)
class Bernoulli(Distribution):
    p: object

    kind = "bernoulli"
    family = "bounded"

    def __post_init__(self):
        p = _num(self.p)
        if not 0 <= p <= 1:
            raise DistributionError(f"bernoulli: p={p} outside [0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def is_exact(self):
        return _exact(self.p)

    def support(self):
        return [(x, q) for x, q in ((_zero(self.p), 1 - self.p), (_one(self.p), self.p)) if q > 0]

    def mean(self):
        return self.p

    def abs_mean(self):
        return self.p

    def raw_moment(self, i):
        _check_order(i)
        return _one(self.p) if i == 0 else self.p

    def central_abs_moment(self, i):
        _check_order(i)
        if i == 0:
            return _one(self.p)
        p = self.p
        return p * (1 - p) ** i + (1 - p) * p**i

    def cmb_parameter(self):
        if self.p in (0, 1):
            return _zero(self.p)
        return max(self.p, 1 - self.p)

    def sample_array(self, rng, size):
        return (rng.random(size) < float(self.p)).astype(float)

    def to_dict(self):
        return {"kind": "bernoulli", "p": _to_json(self.p)}


@dataclass(frozen=True)
class Rademacher(Distribution):
    kind = "rademacher"
    family = "bounded"

    @property
    def is_exact(self):
        return True

    def support(self):
        return [(Fraction(-1), Fraction(1, 2)), (Fraction(1), Fraction(1, 2))]

    def mean(self):
        return Fraction(0)

    def abs_mean(self):
        return Fraction(1)

    def raw_moment(self, i):
        _check_order(i)
        return Fraction(1) if i % 2 == 0 else Fraction(0)

    def central_abs_moment(self, i):
        _check_order(i)
        return Fraction(1)

    def cmb_parameter(self):
        return Fraction(1)

    def sample_array(self, rng, size):
        return rng.integers(0, 2, size=size).astype(float) * 2.0 - 1.0

    def to_dict(self):
        return {"kind": "rademacher"}


# ---------------------------------------------------------------------------
# continuous log-concave laws


@dataclass(frozen=True)
class Uniform(Distribution):
    a: object
    b: object

    kind = "uniform"
    family = "continuous-lc"

    def __post_init__(self):
        a, b = _num(self.a), _num(self.b)
        if not a < b:
            raise DistributionError(f"uniform: need a < b, got a={a}, b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_exact(self):
        return _exact(self.a, self.b)

    def mean(self):
        return (self.a + self.b) / 2

    def abs_mean(self):
        a, b = self.a, self.b
        if a >= 0:
            return (a + b) / 2
        if b <= 0:
            return -(a + b) / 2
        return (a * a + b * b) / (2 * (b - a))

    def raw_moment(self, i):
        _check_order(i)
        a, b = self.a, self.b
        return (b ** (i + 1) - a ** (i + 1)) / ((i + 1) * (b - a))

    def central_abs_moment(self, i):
        _check_order(i)
        half = (self.b - self.a) / 2
        return half**i / (i + 1)

    def cmb_parameter(self):
        return float(self.central_abs_moment(1)) / math.log(2)

    def sample_array(self, rng, size):
        return rng.uniform(float(self.a), float(self.b), size=size)

    def to_dict(self):
        return {"kind": "uniform", "a": _to_json(self.a), "b": _to_json(self.b)}


@dataclass(frozen=True)
class Gaussian(Distribution):
    mu: object = 0
    sigma: object = 1

    kind = "gaussian"
    family = "continuous-lc"

    def __post_init__(self):
        mu, sigma = _num(self.mu), _num(self.sigma)
        if not sigma > 0:
            raise DistributionError(f"gaussian: sigma must be > 0, got {sigma}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def is_exact(self):
        # raw moments only; E|Y| and odd central moments stay irrational
        return _exact(self.mu, self.sigma)

    def mean(self):
        return self.mu

    def abs_mean(self):
        mu, s = float(self.mu), float(self.sigma)
        return s * math.sqrt(2 / math.pi) * math.exp(-mu * mu / (2 * s * s)) + mu * math.erf(
            mu / (s * math.sqrt(2))
        )

    def raw_moment(self, i):
        _check_order(i)
        mu, var = self.mu, self.sigma * self.sigma
        prev, cur = _one(mu), mu
        if i == 0:
            return prev
        for j in range(2, i + 1):
            prev, cur = cur, mu * cur + (j - 1) * var * prev
        return cur

    def central_abs_moment(self, i):
        _check_order(i)
        s = self.sigma
        if i % 2 == 0:
            return s**i * _double_factorial(i - 1)
        return float(s) ** i * 2 ** (i / 2) * math.gamma((i + 1) / 2) / math.sqrt(math.pi)

    def cmb_parameter(self):
        return float(self.central_abs_moment(1)) / math.log(2)

    def sample_array(self, rng, size):
        return rng.normal(float(self.mu), float(self.sigma), size=size)

    def to_dict(self):
        return {"kind": "gaussian", "mean": _to_json(self.mu), "sigma": _to_json(self.sigma)}


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: object = 1

    kind = "exponential"
    family = "continuous-lc"

    def __post_init__(self):
        rate = _num(self.rate)
        if not rate > 0:
            raise DistributionError(f"exponential: rate must be > 0, got {rate}")
        object.__setattr__(self, "rate", rate)

    @property
    def is_exact(self):
        return _exact(self.rate)

    def mean(self):
        return 1 / self.rate

    def abs_mean(self):
        return 1 / self.rate

    def raw_moment(self, i):
        _check_order(i)
        return math.factorial(i) / self.rate**i

    def central_abs_moment(self, i):
        # E|X - 1|^i for rate 1 is e^-1 (i! + int_0^1 u^i e^u du); the
        # integral is the positive series sum_j 1 / (j! (i + j + 1)).
        _check_order(i)
        if i == 0:
            return 1.0
        series = math.fsum(1.0 / (math.factorial(j) * (i + j + 1)) for j in range(60))
        unit = math.exp(-1.0) * (math.factorial(i) + series)
        return unit / float(self.rate) ** i

    def cmb_parameter(self):
        return self.central_abs_moment(1) / math.log(2)

    def sample_array(self, rng, size):
        return rng.exponential(1.0 / float(self.rate), size=size)

    def to_dict(self):
        return {"kind": "exponential", "rate": _to_json(self.rate)}


# ---------------------------------------------------------------------------
# discrete log-concave laws


class _IntegerLaw(Distribution):
    """Shared truncated-summation machinery for infinite integer supports."""

    family = "discrete-lc"
    lower = 0

    def _logpmf(self, k: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _sf(self, k: int) -> float:
        raise NotImplementedError

    def _sum(self, func, stop_at=None) -> float:
        """``sum_k func(k) p_k`` truncated once the tail mass and terms are negligible."""
        chunk = 256
        start = self.lower
        total = 0.0
        parts = []
        m = float(self.mean())
        while True:
            ks = np.arange(start, start + chunk, dtype=float)
            if stop_at is not None:
                ks = ks[ks < stop_at]
                if ks.size == 0:
                    break
            terms = func(ks) * np.exp(self._logpmf(ks))
            parts.append(terms)
            total += float(terms.sum())
            last = ks[-1]
            tail = self._sf(int(last))
            if (
                last > m
                and tail < TAIL_MASS
                and abs(terms[-1]) <= 1e-18 * max(abs(total), 1e-300)
                and abs(terms[-1]) <= abs(terms[-2] if terms.size > 1 else terms[-1])
            ):
                break
            start += chunk
            if start > 1e7:
                raise DistributionError(f"{self.kind}: truncated sum did not converge")
        if not parts:
            return 0.0
        return math.fsum(np.concatenate(parts).tolist())

    def central_abs_moment(self, i):
        _check_order(i)
        if i == 0:
            return 1.0
        m = float(self.mean())
        return self._sum(lambda k: np.abs(k - m) ** i)

    def _conditional_deviation(self):
        m = float(self.mean())
        above = self._sum(lambda k: np.where(k >= m, k - m, 0.0))
        below = self._sum(lambda k: np.where(k < m, m - k, 0.0), stop_at=math.ceil(m))
        p_above = self._sum(lambda k: (k >= m).astype(float))
        p_below = 1.0 - p_above
        return above, below, p_above, p_below

    def cmb_parameter(self):
        above, below, p_above, p_below = self._conditional_deviation()
        if p_above <= 0 or p_below <= 0:
            # constant law: every central moment vanishes
            return 0.0
        return 1.0 + max(above / p_above, below / p_below)


@dataclass(frozen=True)
class Poisson(_IntegerLaw):
    lam: object

    kind = "poisson"

    def __post_init__(self):
        lam = _num(self.lam)
        if not lam > 0:
            raise DistributionError(f"poisson: lambda must be > 0, got {lam}")
        object.__setattr__(self, "lam", lam)

    @property
    def is_exact(self):
        return _exact(self.lam)

    def mean(self):
        return self.lam

    def abs_mean(self):
        return self.lam

    def raw_moment(self, i):
        # Touchard polynomial via Stirling numbers of the second kind
        _check_order(i)
        lam = self.lam
        return sum(_stirling2(i, j) * lam**j for j in range(i + 1)) if i else _one(lam)

    def _logpmf(self, k):
        lam = float(self.lam)
        return k * math.log(lam) - lam - special.gammaln(k + 1)

    def _sf(self, k):
        return float(special.pdtrc(k, float(self.lam)))

    def sample_array(self, rng, size):
        return rng.poisson(float(self.lam), size=size).astype(float)

    def to_dict(self):
        return {"kind": "poisson", "lambda": _to_json(self.lam)}


@dataclass(frozen=True)
class Geometric(_IntegerLaw):
    """Number of trials up to the first success: support ``{1, 2, ...}``."""

    p: object

    kind = "geometric"
    lower = 1

    def __post_init__(self):
        p = _num(self.p)
        if not 0 < p <= 1:
            raise DistributionError(f"geometric: p={p} outside (0, 1]")
        object.__setattr__(self, "p", p)

    @property
    def is_exact(self):
        return _exact(self.p)

    def mean(self):
        return 1 / self.p

    def abs_mean(self):
        return 1 / self.p

    def raw_moment(self, i):
        # X = 1 + B X' with B ~ Bernoulli(1 - p) gives
        # p m_i = p + (1 - p) sum_{j < i} C(i, j) m_j
        _check_order(i)
        p = self.p
        ms = [_one(p)]
        for n in range(1, i + 1):
            acc = sum(math.comb(n, j) * ms[j] for j in range(n))
            ms.append((p + (1 - p) * acc) / p)
        return ms[i]

    def _logpmf(self, k):
        p = float(self.p)
        if p == 1.0:
            return np.where(k == 1, 0.0, -np.inf)
        return (k - 1) * math.log1p(-p) + math.log(p)

    def _sf(self, k):
        return (1 - float(self.p)) ** k

    def sample_array(self, rng, size):
        return rng.geometric(float(self.p), size=size).astype(float)

    def to_dict(self):
        return {"kind": "geometric", "p": _to_json(self.p)}


@dataclass(frozen=True)
class LogNormal(Distribution):
    """``exp(N(mu, sigma^2))``.  Heavy enough to fall outside every bounded class,
    so :meth:`cmb_parameter` is unavailable and callers must supply ``L``."""

    mu: object = 0
    sigma: object = 1

    kind = "lognormal"
    family = "unsupported"

    def __post_init__(self):
        mu, sigma = float(_num(self.mu)), float(_num(self.sigma))
        if not sigma > 0:
            raise DistributionError(f"lognormal: sigma must be > 0, got {sigma}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    def mean(self):
        return math.exp(self.mu + self.sigma**2 / 2)

    def abs_mean(self):
        return self.mean()

    def raw_moment(self, i):
        _check_order(i)
        return math.exp(i * self.mu + i * i * self.sigma**2 / 2)

    def central_abs_moment(self, i):
        _check_order(i)
        if i == 0:
            return 1.0
        m = self.mean()
        mu, s = self.mu, self.sigma

        def integrand(z):
            dev = abs(math.expm1(mu + s * z - math.log(m))) * m
            if dev == 0:
                return 0.0
            return math.exp(i * math.log(dev) - z * z / 2) / math.sqrt(2 * math.pi)

        # the weighted integrand peaks near z = i * s
        split = (math.log(m) - mu) / s
        top = i * s + 40.0
        lo, _ = integrate.quad(integrand, -40.0, split, epsabs=0, epsrel=1e-11, limit=200)
        hi, _ = integrate.quad(integrand, split, top, epsabs=0, epsrel=1e-11, limit=400, points=[i * s])
        return lo + hi

    def cmb_parameter(self):
        raise NotImplementedError("lognormal is not central moment bounded for any fixed L")

    def sample_array(self, rng, size):
        return rng.lognormal(self.mu, self.sigma, size=size)

    def to_dict(self):
        return {"kind": "lognormal", "mu": self.mu, "sigma": self.sigma}


# ---------------------------------------------------------------------------
# helpers


def _zero(like):
    return Fraction(0) if isinstance(like, Fraction) else 0.0


def _one(like):
    return Fraction(1) if isinstance(like, Fraction) else 1.0


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@functools.lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _to_json(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return float(x)


# ---------------------------------------------------------------------------
# functional surface


def mean(dist: Distribution):
    return dist.mean()


def abs_mean(dist: Distribution):
    return dist.abs_mean()


def raw_moment(dist: Distribution, i: int, cap: int = MOMENT_CAP):
    _check_order(i, cap)
    return dist.raw_moment(i)


def central_abs_moment(dist: Distribution, i: int, cap: int = MOMENT_CAP):
    _check_order(i, cap)
    return dist.central_abs_moment(i)


def cmb_parameter(dist: Distribution):
    return dist.cmb_parameter()


def sample(dist: Distribution, rng: np.random.Generator) -> float:
    return dist.sample(rng)


@dataclass(frozen=True)
class CmbReport:
    L: float
    i_max: int
    worst_ratio: float
    worst_i: int
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def verify_cmb(dist: Distribution, L, i_max: int = 20, tol: float = 1e-9) -> CmbReport:
    """Check ``E|Z-EZ|^i <= i L E|Z-EZ|^(i-1)`` for ``1 <= i <= i_max``."""
    if not L >= 0:
        raise DistributionError(f"L must be nonnegative, got {L}")
    if i_max < 1:
        raise DistributionError(f"i_max must be >= 1, got {i_max}")
    moments = [dist.central_abs_moment(i) for i in range(i_max + 1)]
    worst, worst_i = 0.0, 1
    for i in range(1, i_max + 1):
        lhs = moments[i]
        rhs = i * L * moments[i - 1]
        if rhs == 0:
            ratio = 0.0 if lhs == 0 else math.inf
        else:
            ratio = float(lhs / rhs) if _exact(lhs, rhs) else float(lhs) / float(rhs)
        if ratio > worst:
            worst, worst_i = ratio, i
    return CmbReport(L=float(L), i_max=i_max, worst_ratio=worst, worst_i=worst_i, passed=worst <= 1 + tol)


_KINDS = {
    "discrete": lambda d: Discrete(tuple(tuple(pt) for pt in d["support"])),
    "bernoulli": lambda d: Bernoulli(d["p"]),
    "rademacher": lambda d: Rademacher(),
    "uniform": lambda d: Uniform(d["a"], d["b"]),
    "gaussian": lambda d: Gaussian(d.get("mean", 0), d.get("sigma", 1)),
    "exponential": lambda d: Exponential(d.get("rate", 1)),
    "poisson": lambda d: Poisson(d["lambda"]),
    "geometric": lambda d: Geometric(d["p"]),
    "lognormal": lambda d: LogNormal(d.get("mu", 0), d.get("sigma", 1)),
}


def dist_from_dict(data: Mapping) -> Distribution:
    if not isinstance(data, Mapping) or "kind" not in data:
        raise DistributionError(f"distribution must be an object with 'kind', got {data!r}")
    kind = data["kind"]
    if kind not in _KINDS:
        raise DistributionError(f"unknown distribution kind {kind!r}")
    try:
        return _KINDS[kind](data)
    except KeyError as exc:
        raise DistributionError(f"{kind}: missing parameter {exc}") from None
    except (TypeError, ValueError) as exc:
        raise DistributionError(f"{kind}: {exc}") from None


def dist_to_dict(dist: Distribution) -> dict:
    return dist.to_dict()


def catalog() -> list[Distribution]:
    """The distributions exercised by the boundedness acceptance sweep."""
    return [
        Bernoulli(Fraction(1, 2)),
        Bernoulli(Fraction(3, 10)),
        Bernoulli(Fraction(9, 10)),
        Rademacher(),
        Discrete(((Fraction(-1), Fraction(1, 4)), (Fraction(0), Fraction(1, 4)), (Fraction(3), Fraction(1, 2)))),
        Uniform(0, 1),
        Uniform(-2, 5),
        Gaussian(0, 1),
        Gaussian(1.5, 0.5),
        Exponential(1),
        Exponential(2.5),
        Poisson(0.5),
        Poisson(1),
        Poisson(3),
        Geometric(0.2),
        Geometric(0.5),
        Geometric(0.8),
    ]


def as_distributions(items: Sequence) -> list[Distribution]:
    return [d if isinstance(d, Distribution) else dist_from_dict(d) for d in items]
