import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from polybound.corpus import random_instance
from polybound.model import MultilinearPolynomial

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

weights = st.fractions(min_value=-4, max_value=4, max_denominator=6).filter(lambda w: w != 0)


@st.composite
def polynomials(draw, n_max=8, q_max=3, max_edges=8, exact=True):
    n = draw(st.integers(1, n_max))
    q = draw(st.integers(1, min(q_max, n)))
    edge = st.lists(st.integers(1, n), min_size=0, max_size=q, unique=True)
    w = weights if exact else st.floats(-4, 4, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
    terms = draw(st.lists(st.tuples(edge, w), max_size=max_edges))
    return MultilinearPolynomial.from_terms(n, terms, power=q)


@st.composite
def instances(draw, finite=False, **kw):
    """(polynomial, laws) pairs from the seeded corpus generator."""
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(random.Random(seed), finite=finite, **kw)


@pytest.fixture
def half():
    return Fraction(1, 2)


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one acceptance line; the lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
