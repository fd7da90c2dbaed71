"""Instance generators, the shipped corpus, and constant fitting over it."""
from __future__ import annotations

import hashlib
import json
import random
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .bounds import BoundConstants, MomentDatum, TailDatum, fit_constant
from .combinatorics import counting_sweep
from .distributions import (
    Bernoulli,
    Discrete,
    Distribution,
    Exponential,
    Gaussian,
    Geometric,
    Poisson,
    Rademacher,
    Uniform,
)
from .model import MultilinearPolynomial
from .moments import MomentCapError, exact_central_even_moment
from .montecarlo import empirical_tail
from .problem import ProblemSpec, load_problem

__all__ = [
    "FIT_SEED",
    "FIT_SAMPLES",
    "MOMENT_ORDERS",
    "random_polynomial",
    "random_finite_dist",
    "random_dist",
    "random_instance",
    "shipped_corpus_dir",
    "load_corpus",
    "corpus_hash",
    "moment_data",
    "tail_data",
    "fit_manifest",
    "write_manifest",
    "shipped_instances",
    "write_corpus",
]

FIT_SEED = 1009
FIT_SAMPLES = 10**6
MOMENT_ORDERS = (2, 4, 6)
MOMENT_N_MAX = 8
LEVEL = 0.99

_PROBS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]


def random_polynomial(
    rng: random.Random,
    n: int,
    q: int,
    edges: int,
    signed: bool = True,
    constant: bool = False,
) -> MultilinearPolynomial:
    """Rational-weighted polynomial on ``n`` variables with at least one edge of size ``q``."""
    terms = []
    for i in range(edges):
        size = q if i == 0 else rng.randint(1, q)
        verts = rng.sample(range(1, n + 1), size)
        num = rng.choice([x for x in range(-4, 5) if x]) if signed else rng.randint(1, 4)
        terms.append((verts, Fraction(num, rng.randint(1, 3))))
    if constant:
        terms.append(((), Fraction(rng.randint(-3, 3))))
    return MultilinearPolynomial.from_terms(n, terms, power=q)


def random_finite_dist(rng: random.Random) -> Distribution:
    r = rng.random()
    if r < 0.4:
        return Bernoulli(rng.choice(_PROBS))
    if r < 0.65:
        return Rademacher()
    size = rng.randint(2, 3)
    values = rng.sample(range(-3, 4), size)
    weights = [rng.randint(1, 4) for _ in range(size)]
    total = sum(weights)
    return Discrete(tuple((Fraction(v), Fraction(w, total)) for v, w in zip(values, weights)))


def random_dist(rng: random.Random) -> Distribution:
    """Any catalog law with rational parameters."""
    r = rng.random()
    if r < 0.45:
        return random_finite_dist(rng)
    if r < 0.55:
        a = Fraction(rng.randint(-2, 1))
        return Uniform(a, a + rng.randint(1, 3))
    if r < 0.7:
        return Gaussian(Fraction(rng.randint(-1, 1)), Fraction(rng.randint(1, 4), 2))
    if r < 0.8:
        return Exponential(Fraction(rng.randint(1, 4), 2))
    if r < 0.9:
        return Poisson(rng.choice([Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(3)]))
    return Geometric(rng.choice([Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)]))


def random_instance(
    rng: random.Random,
    n_max: int = 8,
    q_max: int = 3,
    max_edges: int = 6,
    finite: bool = False,
    signed: bool = True,
) -> tuple[MultilinearPolynomial, list[Distribution]]:
    q = rng.randint(1, q_max)
    n = rng.randint(max(q, 2), n_max)
    poly = random_polynomial(rng, n, q, rng.randint(1, max_edges), signed=signed)
    pick = random_finite_dist if finite else random_dist
    return poly, [pick(rng) for _ in range(n)]


# ---------------------------------------------------------------------------
# corpus files


def shipped_corpus_dir() -> Path:
    return Path(str(resources.files("polybound.data").joinpath("corpus")))


def load_corpus(directory=None) -> list[ProblemSpec]:
    directory = Path(directory) if directory is not None else shipped_corpus_dir()
    return [load_problem(p) for p in sorted(directory.glob("*.json"))]


def corpus_hash(directory=None) -> str:
    """SHA-256 over file names and canonicalized JSON contents."""
    directory = Path(directory) if directory is not None else shipped_corpus_dir()
    h = hashlib.sha256()
    for p in sorted(directory.glob("*.json")):
        h.update(p.name.encode())
        h.update(b"\0")
        h.update(json.dumps(json.loads(p.read_text()), sort_keys=True, separators=(",", ":")).encode())
        h.update(b"\0")
    return h.hexdigest()


def moment_data(problems: Iterable[ProblemSpec], orders: Sequence[int] = MOMENT_ORDERS) -> list[MomentDatum]:
    """Exact central moments per instance.

    Instances with more than ``MOMENT_N_MAX`` variables, or past the expansion
    cap, are skipped.
    """
    out = []
    for spec in problems:
        if spec.polynomial.n > MOMENT_N_MAX:
            continue
        prof = spec.profile()
        try:
            moments = {k: exact_central_even_moment(spec.polynomial, spec.variables, k) for k in orders}
        except MomentCapError:
            continue
        out.append(MomentDatum(prof, moments))
    return out


def _uses_only(spec: ProblemSpec, kinds: set) -> bool:
    used = {v for h in spec.polynomial.edges for v in h}
    return all(spec.variables[v - 1].kind in kinds for v in used)


def tail_data(
    problems: Iterable[ProblemSpec],
    samples: int = FIT_SAMPLES,
    seed: int = FIT_SEED,
    workers: int = 1,
) -> list[TailDatum]:
    """Upper Wilson limits of the empirical tails on each problem's lambda grid."""
    out = []
    for spec in problems:
        prof = spec.profile()
        if float(prof.variance) <= 0:
            continue
        lams = spec.lambdas(prof)
        est = empirical_tail(spec.polynomial, spec.variables, lams, samples, seed, LEVEL, workers)
        out.append(TailDatum(prof, tuple((e.lam, e.ci_high) for e in est)))
    return out


def hypercontractive(spec: ProblemSpec) -> bool:
    return _uses_only(spec, {"gaussian", "rademacher"})


def fit_manifest(
    directory=None,
    kinds: Sequence[str] = ("R", "R4", "R0", "R_hc"),
    base: Optional[BoundConstants] = None,
    samples: int = FIT_SAMPLES,
    seed: int = FIT_SEED,
    workers: int = 1,
) -> dict:
    """Fit the requested constants on a corpus; other constants come from ``base``."""
    problems = load_corpus(directory)
    if not problems:
        raise ValueError("corpus is empty")
    base = base or BoundConstants()
    values = {"R": base.R, "R4": base.R4, "R0": base.R0, "R_hc": base.R_hc}
    if "R4" in kinds:
        values["R4"] = fit_constant(moment_data(problems), "R4")
    if "R" in kinds or "R_hc" in kinds:
        tails = {id(s): tail_data([s], samples, seed, workers) for s in problems}
        if "R" in kinds:
            values["R"] = fit_constant([d for s in problems for d in tails[id(s)]], "R")
        if "R_hc" in kinds:
            hc = [d for s in problems if hypercontractive(s) for d in tails[id(s)]]
            if hc:
                values["R_hc"] = fit_constant(hc, "R_hc")
    extra = {}
    if "R0" in kinds:
        rows = counting_sweep(8)
        sweep_max = max(r["R0_min"] for r in rows)
        values["R0"] = max(1.0, sweep_max)
        extra["R0_sweep_max"] = sweep_max
    manifest = dict(values)
    manifest["corpus_hash"] = corpus_hash(directory)
    manifest["fit_samples"] = samples
    manifest["fit_seed"] = seed
    manifest.update(extra)
    return manifest


def write_manifest(manifest: dict, path) -> bool:
    """Write ``manifest`` with today's date unless an equal manifest is already there.

    Returns ``True`` when the file changed.
    """
    import datetime

    path = Path(path)
    if path.exists():
        old = json.loads(path.read_text())
        if {k: v for k, v in old.items() if k != "fit_date"} == manifest:
            return False
    out = dict(manifest)
    out["fit_date"] = datetime.date.today().isoformat()
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return True


# ---------------------------------------------------------------------------
# shipped corpus

CORPUS_SEED = 4242
CORPUS_RANDOM = 48


def _spec(name, n, terms, variables, power=None) -> ProblemSpec:
    poly = MultilinearPolynomial.from_terms(n, terms, power=power)
    return ProblemSpec(polynomial=poly, variables=list(variables), name=name)


def _hand_made() -> list[ProblemSpec]:
    half = Fraction(1, 2)
    tenth = Fraction(1, 10)
    out = [
        _spec("single_edge_rademacher", 2, [((1, 2), 1)], [Rademacher()] * 2),
        _spec("disjoint_pairs_bernoulli", 4, [((1, 2), 1), ((3, 4), 1)], [Bernoulli(half)] * 4),
        _spec("linear_bernoulli_sum", 8, [((i,), 1) for i in range(1, 9)], [Bernoulli(Fraction(1, 4))] * 8),
        _spec("linear_sparse_bernoulli", 8, [((i,), 1) for i in range(1, 9)], [Bernoulli(Fraction(1, 20))] * 8),
        _spec("linear_uniform_sum", 6, [((i,), 1) for i in range(1, 7)], [Uniform(0, 1)] * 6),
        _spec("triangle_sparse", 3, [((1, 2), 1), ((2, 3), 1), ((1, 3), 1)], [Bernoulli(tenth)] * 3),
        _spec("star_bernoulli", 6, [((1, v), 1) for v in range(2, 7)], [Bernoulli(Fraction(1, 5))] * 6),
        _spec("cubic_single_sparse", 3, [((1, 2, 3), 1)], [Bernoulli(tenth)] * 3),
        _spec("gaussian_chaos_2", 5,
              [((i, j), 1) for i in range(1, 6) for j in range(i + 1, 6)], [Gaussian(0, 1)] * 5),
        _spec("rademacher_chaos_3", 6,
              [((1, 2, 3), 1), ((2, 3, 4), -1), ((4, 5, 6), 1), ((1, 5, 6), 2)], [Rademacher()] * 6),
        _spec("gaussian_linear", 4, [((i,), i) for i in range(1, 5)], [Gaussian(0, 1)] * 4),
        _spec("mixed_rademacher_gaussian", 4,
              [((1, 2), 1), ((3, 4), 1), ((1, 3), half)], [Rademacher(), Gaussian(0, 1)] * 2),
        _spec("poisson_pairs", 4, [((1, 2), 1), ((3, 4), 1)], [Poisson(1), Poisson(half), Poisson(3), Poisson(1)]),
        _spec("geometric_linear", 3, [((1,), 1), ((2,), 1), ((3,), 1)],
              [Geometric(Fraction(1, 5)), Geometric(half), Geometric(Fraction(4, 5))]),
        _spec("exponential_product", 2, [((1, 2), 1)], [Exponential(1), Exponential(2)]),
        _spec("mixed_laws_cubic", 5, [((1, 2, 3), 1), ((3, 4), -2), ((5,), 1)],
              [Uniform(-1, 1), Exponential(1), Bernoulli(Fraction(1, 3)), Poisson(half), Geometric(half)]),
    ]
    # long linear sums: the only instances where the Gaussian term of the tail bound binds
    for label, law in (("gaussian", Gaussian(0, 1)), ("rademacher", Rademacher()),
                       ("bernoulli_half", Bernoulli(half)), ("bernoulli_quarter", Bernoulli(Fraction(1, 4)))):
        out.append(_spec(f"clt_{label}_64", 64, [((i,), 1) for i in range(1, 65)], [law] * 64))
    return out


def shipped_instances(seed: int = CORPUS_SEED, count: int = CORPUS_RANDOM) -> list[ProblemSpec]:
    """Hand-made instances followed by ``count`` seeded random ones (n <= 8, q <= 3)."""
    specs = _hand_made()
    rng = random.Random(seed)
    for i in range(count):
        poly, dists = random_instance(rng, finite=(i % 2 == 0))
        specs.append(ProblemSpec(polynomial=poly, variables=dists, name=f"random_{i:03d}"))
    return specs


def write_corpus(directory, specs: Optional[Sequence[ProblemSpec]] = None) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    specs = shipped_instances() if specs is None else specs
    paths = []
    for i, spec in enumerate(specs):
        path = directory / f"{i:03d}_{spec.name}.json"
        path.write_text(json.dumps(spec.to_dict(), indent=1) + "\n")
        paths.append(path)
    return paths
