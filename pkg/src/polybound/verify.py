"""Property suites that check each implemented inequality against its oracle.

Suites: ``moments``, ``cmb``, ``ordering``, ``counting`` and ``all``.  Every
check draws from its own stream derived from ``(seed, check name)``, so a
check's cases do not depend on which other checks ran.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .bounds import BoundConstants, even_moment_bound, load_constants, varbound_check
from .combinatorics import LabeledHypergraph, canonical_orderings, counting_holds, counting_sweep, verify_ordering
from .corpus import load_corpus, random_instance, random_polynomial
from .distributions import Discrete, Gaussian, Rademacher, catalog, verify_cmb
from .model import MultilinearPolynomial, center, evaluate
from .moments import covariance, exact_central_even_moment, exact_variance, joint_bruteforce_moment
from .smoothness import mu, mu_bruteforce, profile

__all__ = ["DEFAULT_SEED", "SUITES", "CheckResult", "run_suite", "format_results"]

DEFAULT_SEED = 31337
SUITES = ("moments", "cmb", "ordering", "counting", "all")


@dataclass
class CheckResult:
    name: str
    title: str
    passed: bool
    cases: int
    failures: list = field(default_factory=list)
    detail: str = ""
    seconds: float = 0.0


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}/{name}")


def _result(name, title, cases, failures, detail="") -> CheckResult:
    return CheckResult(name, title, not failures, cases, failures[:5], detail)


# ---------------------------------------------------------------------------
# moments suite


def check_variance(seed: int, instances: int = 200) -> CheckResult:
    rng = _rng(seed, "variance")
    failures = []
    for i in range(instances):
        poly, dists = random_instance(rng, finite=True)
        fast = exact_variance(poly, dists)
        slow = joint_bruteforce_moment(poly, dists, 2, centered=True)
        ok = fast == slow if poly.is_exact else abs(fast - slow) <= 1e-12 * max(abs(slow), 1e-300)
        if not ok:
            failures.append(f"instance {i}: {fast} != {slow}")
    return _result("variance", "exact variance equals joint-outcome enumeration", instances, failures)


_ZERO_MEAN = (
    Rademacher(),
    Gaussian(0, 1),
    Gaussian(0, Fraction(3, 2)),
    Discrete(((-2, Fraction(1, 3)), (1, Fraction(2, 3)))),
    Discrete(((-1, Fraction(1, 4)), (0, Fraction(1, 2)), (1, Fraction(1, 4)))),
)


def check_orthogonality(seed: int, instances: int = 50) -> CheckResult:
    """Polynomials with disjoint edge sets are uncorrelated over zero-mean variables."""
    rng = _rng(seed, "orthogonality")
    failures = []
    for i in range(instances):
        n = rng.randint(2, 8)
        q = rng.randint(1, 3)
        poly = random_polynomial(rng, n, min(q, n), rng.randint(2, 8))
        edges = list(poly.edges.items())
        rng.shuffle(edges)
        cut = rng.randint(1, max(1, len(edges) - 1))
        g1 = MultilinearPolynomial.from_terms(n, edges[:cut], poly.power)
        g2 = MultilinearPolynomial.from_terms(n, edges[cut:], poly.power)
        dists = [rng.choice(_ZERO_MEAN) for _ in range(n)]
        value = covariance(g1, g2, dists)
        if value != 0:
            failures.append(f"instance {i}: covariance {value}")
    return _result("orthogonality", "disjoint edge sets are orthogonal", instances, failures)


def check_centering(seed: int, instances: int = 50, points: int = 100) -> CheckResult:
    rng = _rng(seed, "centering")
    np_rng = np.random.default_rng(rng.getrandbits(63))
    failures = []
    worst = 0.0
    for i in range(instances):
        poly, dists = random_instance(rng)
        means = [d.mean() for d in dists]
        shifted = center(poly, means)
        for _ in range(points):
            x = [float(d.sample(np_rng)) for d in dists]
            y = [xi - float(m) for xi, m in zip(x, means)]
            a = float(evaluate(poly, x))
            b = float(evaluate(shifted, y))
            err = abs(a - b) / max(abs(a), 1.0)
            worst = max(worst, err)
            if err > 1e-9:
                failures.append(f"instance {i}: {a} vs {b}")
                break
    return _result("centering", "centered expansion agrees pointwise", instances, failures,
                   f"worst relative error {worst:.2e}")


def check_smoothness(seed: int, instances: int = 200) -> CheckResult:
    rng = _rng(seed, "smoothness")
    failures = []
    for i in range(instances):
        poly, dists = random_instance(rng, n_max=10, max_edges=10)
        for r in range(poly.power + 1):
            a, b = mu(poly, dists, r), mu_bruteforce(poly, dists, r)
            exact = isinstance(a, Fraction) and isinstance(b, Fraction)
            if (a != b) if exact else abs(a - b) > 1e-12 * abs(b):
                failures.append(f"instance {i}, r={r}: {a} != {b}")
    return _result("smoothness", "mu_r equals the all-subsets maximum (exact, or 1e-12 relative for floats)", instances, failures)


def check_even_moment(seed: int, constants: BoundConstants, instances: int = 100,
                      orders=(2, 4, 6)) -> CheckResult:
    rng = _rng(seed, "even-moment")
    failures = []
    tightest = 0.0
    for i in range(instances):
        poly, dists = random_instance(rng)
        prof = profile(poly, dists)
        for k in orders:
            lhs = float(exact_central_even_moment(poly, dists, k))
            rhs = even_moment_bound(k, prof, constants)
            if rhs > 0:
                tightest = max(tightest, lhs / rhs)
            if lhs > rhs:
                failures.append(f"instance {i}, k={k}: {lhs} > {rhs}")
    return _result("even-moment", f"central even moments within the bound (R4={constants.R4:g})",
                   instances, failures, f"largest moment/bound ratio {tightest:.3g}")


def check_variance_comparison(problems) -> CheckResult:
    failures = []
    least = float("inf")
    for spec in problems:
        holds, slack = varbound_check(spec.profile())
        least = min(least, slack)
        if not holds:
            failures.append(f"{spec.name}: slack {slack}")
    return _result("variance-comparison", "variance against the mu-product bound on the corpus",
                   len(problems), failures, f"smallest slack {least:.3g}")


# ---------------------------------------------------------------------------
# other suites


def check_cmb() -> CheckResult:
    failures = []
    lines = []
    laws = catalog()
    for d in laws:
        L = d.cmb_parameter()
        rep = verify_cmb(d, L, i_max=20, tol=1e-9)
        lines.append(f"{d.to_dict()} L={float(L):.6g} worst ratio {rep.worst_ratio:.6f} at i={rep.worst_i}")
        if not rep.passed:
            failures.append(lines[-1])
    return _result("central-moment-bound", "catalog laws satisfy the boundedness recursion",
                   len(laws), failures, "\n".join(lines))


def random_min_degree_two(rng: random.Random, k_max: int = 8, q_max: int = 3) -> LabeledHypergraph:
    """Rejection-sampled labeled hypergraph whose vertices all have degree >= 2."""
    while True:
        q = rng.randint(1, q_max)
        k = rng.randint(2, k_max)
        l = rng.randint(q, max(q, q * k // 2))
        for _ in range(200):
            edges = [tuple(rng.sample(range(1, l + 1), q)) for _ in range(k)]
            g = LabeledHypergraph(l, edges)
            if min(g.degrees()) >= 2:
                return g


def check_ordering(seed: int, instances: int = 500) -> CheckResult:
    rng = _rng(seed, "ordering")
    failures = []
    for i in range(instances):
        g = random_min_degree_two(rng)
        co = canonical_orderings(g)
        if not verify_ordering(g, co):
            failures.append(f"instance {i}: {g.edges}")
    return _result("ordering", "canonical orderings keep the component count", instances, failures)


def check_counting(R0: float, max_qk: int = 8) -> CheckResult:
    rows = counting_sweep(max_qk)
    failures = []
    for row in rows:
        if row["count"] != row["count_recursive"]:
            failures.append(f"{row}: enumerators disagree")
        elif not counting_holds(row["l"], row["k"], row["q"], row["d"], row["c"], row["count"], R0):
            failures.append(f"{row}: exceeds R0={R0}")
    worst = max(r["R0_min"] for r in rows)
    return _result("counting", f"labeled sequence counts within the R0={R0:g} bound",
                   len(rows), failures, f"largest required R0 {worst:.4f}")


# ---------------------------------------------------------------------------


def _timed(fn: Callable[[], CheckResult]) -> CheckResult:
    start = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - start
    return res


def run_suite(suite: str, seed: int = DEFAULT_SEED, constants: Optional[BoundConstants] = None,
              corpus=None) -> list[CheckResult]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    constants = constants or load_constants()
    plan: list[Callable[[], CheckResult]] = []
    if suite in ("moments", "all"):
        problems = corpus if corpus is not None else load_corpus()
        plan += [
            lambda: check_variance(seed),
            lambda: check_orthogonality(seed),
            lambda: check_centering(seed),
            lambda: check_smoothness(seed),
            lambda: check_even_moment(seed, constants),
            lambda: check_variance_comparison(problems),
        ]
    if suite in ("cmb", "all"):
        plan.append(check_cmb)
    if suite in ("ordering", "all"):
        plan.append(lambda: check_ordering(seed))
    if suite in ("counting", "all"):
        plan.append(lambda: check_counting(constants.R0))
    return [_timed(fn) for fn in plan]


def format_results(results: list[CheckResult], verbose: bool = False) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<20} {r.cases:>5} cases  {r.seconds:6.2f}s  {r.title}")
        if r.detail and (verbose or r.name == "central-moment-bound" or "\n" not in r.detail):
            lines.extend("      " + ln for ln in r.detail.splitlines())
        lines.extend("      ! " + f for f in r.failures)
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
