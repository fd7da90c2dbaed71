"""Multilinear polynomials stored as weighted hypergraphs.

A polynomial ``f(x) = sum_h w_h prod_{v in h} x_v`` is kept as a mapping from
hyperedges (sorted tuples of 1-based vertex indices) to nonzero weights.
Weights built from ints or :class:`fractions.Fraction` stay exact; anything
else is carried as ``float``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Hyperedge = tuple  # sorted tuple of distinct 1-based vertex indices

__all__ = [
    "Hyperedge",
    "MultilinearPolynomial",
    "PolynomialError",
    "validate",
    "evaluate",
    "center",
    "split_by_sign_and_size",
    "poly_from_dict",
    "poly_to_dict",
]


class PolynomialError(ValueError):
    """Malformed polynomial input (duplicate vertex, bad dimension, ...)."""


def _normalize_weight(w):
    if isinstance(w, bool):
        raise PolynomialError(f"weight must be numeric, got {w!r}")
    if isinstance(w, Rational):
        return Fraction(w)
    return float(w)


def _is_zero(w) -> bool:
    return w == 0


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Weighted hypergraph on vertices ``1..n``.

    The plain constructor stores its arguments as given so that
    :func:`validate` can diagnose malformed data.  Use :meth:`from_terms`
    to build a normalized polynomial.
    """

    n: int
    edges: Mapping[tuple, object] = field(default_factory=dict)
    power: int | None = None

    def __post_init__(self):
        if self.power is None:
            q = max((len(h) for h in self.edges), default=0)
            object.__setattr__(self, "power", q)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable, power: int | None = None):
        """Build a normalized polynomial from ``(vertices, weight)`` pairs.

        Repeated vertex sets are merged, zero weights dropped.  A vertex listed
        twice inside one term raises :class:`PolynomialError`.
        """
        if isinstance(terms, Mapping):
            terms = terms.items()
        merged: dict[tuple, object] = {}
        for verts, w in terms:
            verts = tuple(int(v) for v in verts)
            if len(set(verts)) != len(verts):
                raise PolynomialError(f"duplicate vertex in edge {list(verts)}")
            for v in verts:
                if not 1 <= v <= n:
                    raise PolynomialError(f"vertex {v} of edge {list(verts)} outside [1, {n}]")
            key = tuple(sorted(verts))
            merged[key] = merged.get(key, 0) + _normalize_weight(w)
        edges = {h: w for h, w in sorted(merged.items(), key=_edge_sort_key) if not _is_zero(w)}
        q = max((len(h) for h in edges), default=0)
        if power is not None:
            if power < q:
                raise PolynomialError(f"declared power {power} below max edge size {q}")
            q = power
        return cls(n=n, edges=edges, power=q)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.edges.values())

    def weights(self):
        return list(self.edges.values())

    def without_empty(self) -> "MultilinearPolynomial":
        return MultilinearPolynomial(
            self.n, {h: w for h, w in self.edges.items() if h}, self.power
        )

    def constant_term(self):
        return self.edges.get((), 0)

    def __add__(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        if self.n != other.n:
            raise PolynomialError(f"dimension mismatch: {self.n} vs {other.n}")
        terms = list(self.edges.items()) + list(other.edges.items())
        return MultilinearPolynomial.from_terms(self.n, terms)

    def scale(self, c) -> "MultilinearPolynomial":
        return MultilinearPolynomial.from_terms(
            self.n, [(h, w * c) for h, w in self.edges.items()], self.power
        )


def _edge_sort_key(item):
    h = item[0]
    return (len(h), h)


def validate(poly: MultilinearPolynomial) -> list[str]:
    """Return human-readable invariant violations; empty when well formed."""
    problems = []
    if poly.n < 0:
        problems.append(f"n: negative variable count {poly.n}")
    if poly.power is None or poly.power < 0:
        problems.append(f"power: invalid value {poly.power}")
    seen = set()
    for h, w in poly.edges.items():
        verts = list(h)
        if len(set(verts)) != len(verts):
            problems.append(f"edge {verts}: duplicate vertex")
        if verts != sorted(verts):
            problems.append(f"edge {verts}: vertices not in sorted order")
        bad = [v for v in verts if not 1 <= v <= poly.n]
        if bad:
            problems.append(f"edge {verts}: vertices {bad} outside [1, {poly.n}]")
        if poly.power is not None and len(verts) > poly.power:
            problems.append(f"edge {verts}: power exceeded ({len(verts)} > {poly.power})")
        if _is_zero(w):
            problems.append(f"edge {verts}: zero weight stored")
        key = frozenset(verts)
        if key in seen:
            problems.append(f"edge {verts}: duplicate hyperedge")
        seen.add(key)
    return problems


def _check_length(poly: MultilinearPolynomial, values: Sequence) -> None:
    if len(values) != poly.n:
        raise PolynomialError(f"dimension mismatch: polynomial has n={poly.n}, got {len(values)} values")


def evaluate(poly: MultilinearPolynomial, x: Sequence) -> object:
    """Evaluate ``f(x)``; ``x[0]`` is the value of vertex 1."""
    _check_length(poly, x)
    total = 0
    for h, w in poly.edges.items():
        term = w
        for v in h:
            term = term * x[v - 1]
        total = total + term
    return total


def evaluate_batch(poly: MultilinearPolynomial, X):
    """Vectorized evaluation over the rows of an ``(m, n)`` float array."""
    import numpy as np

    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != poly.n:
        raise PolynomialError(f"dimension mismatch: expected (m, {poly.n}), got {X.shape}")
    out = np.zeros(X.shape[0])
    for h, w in poly.edges.items():
        term = np.full(X.shape[0], float(w))
        for v in h:
            term *= X[:, v - 1]
        out += term
    return out


def center(poly: MultilinearPolynomial, means: Sequence) -> MultilinearPolynomial:
    """Re-express ``f`` in the shifted variables ``x - means``.

    Each edge ``h`` spreads ``w_h * prod_{v in h minus h'} means[v]`` onto every
    sub-edge ``h'``; the empty edge collects the value at the means.
    """
    _check_length(poly, means)
    acc: dict[tuple, object] = {}
    for h, w in poly.edges.items():
        for size in range(len(h) + 1):
            for sub in itertools.combinations(h, size):
                coef = w
                for v in h:
                    if v not in sub:
                        coef = coef * means[v - 1]
                acc[sub] = acc.get(sub, 0) + coef
    return MultilinearPolynomial.from_terms(poly.n, acc.items(), poly.power)


def split_by_sign_and_size(poly: MultilinearPolynomial) -> list[tuple[MultilinearPolynomial, int, int]]:
    """Group non-constant monomials by ``(cardinality, sign)``.

    Returns ``(part, size, sign)`` triples with ``sign`` in ``{+1, -1}``.  The
    parts plus ``poly.constant_term()`` sum back to ``poly``.
    """
    groups: dict[tuple[int, int], dict] = {}
    for h, w in poly.edges.items():
        if not h:
            continue
        sign = 1 if w > 0 else -1
        groups.setdefault((len(h), -sign), {})[h] = w
    out = []
    for (size, neg_sign), edges in sorted(groups.items()):
        out.append((MultilinearPolynomial(poly.n, edges, size), size, -neg_sign))
    return out


def _weight_from_json(w):
    if isinstance(w, bool):
        raise PolynomialError(f"weight must be numeric, got {w!r}")
    if isinstance(w, int):
        return Fraction(w)
    if isinstance(w, str):
        return Fraction(w)
    if isinstance(w, float):
        return w
    raise PolynomialError(f"weight must be numeric, got {w!r}")


def _weight_to_json(w):
    if isinstance(w, Fraction):
        return int(w) if w.denominator == 1 else str(w)
    return float(w)


def poly_from_dict(data: Mapping) -> MultilinearPolynomial:
    """Load the problem-file polynomial schema.

    Weights may be JSON numbers or rational strings such as ``"1/3"``.
    """
    try:
        n = data["n"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise PolynomialError(f"polynomial: missing field {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise PolynomialError(f"polynomial.n: expected nonnegative integer, got {n!r}")
    power = data.get("power")
    if power is not None and (not isinstance(power, int) or isinstance(power, bool)):
        raise PolynomialError(f"polynomial.power: expected integer, got {power!r}")
    terms = []
    for i, e in enumerate(edges):
        if not isinstance(e, Mapping) or "vertices" not in e or "weight" not in e:
            raise PolynomialError(f"edges[{i}]: expected object with 'vertices' and 'weight'")
        verts = e["vertices"]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in verts):
            raise PolynomialError(f"edges[{i}]: vertices must be integers, got {verts!r}")
        if len(set(verts)) != len(verts):
            raise PolynomialError(f"edges[{i}]: duplicate vertex in edge {list(verts)}")
        try:
            terms.append((verts, _weight_from_json(e["weight"])))
        except (ValueError, ZeroDivisionError) as exc:
            raise PolynomialError(f"edges[{i}]: bad weight {e['weight']!r} ({exc})") from None
    try:
        return MultilinearPolynomial.from_terms(n, terms, power)
    except PolynomialError as exc:
        raise PolynomialError(f"polynomial: {exc}") from None


def poly_to_dict(poly: MultilinearPolynomial) -> dict:
    return {
        "n": poly.n,
        "power": poly.power,
        "edges": [{"vertices": list(h), "weight": _weight_to_json(w)} for h, w in poly.edges.items()],
    }


def load_polynomial(path) -> MultilinearPolynomial:
    with open(path) as fh:
        return poly_from_dict(json.load(fh))
