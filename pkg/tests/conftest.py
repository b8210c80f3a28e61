import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gzskew.arith import FactoredRationalFunction, Polynomial, VariableLayout
from gzskew.groups import B2, typeA_product

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polynomials(nvars=2, max_degree=3, max_terms=4):
    """Hypothesis strategy for small polynomials in ``nvars`` variables."""
    layout = VariableLayout((nvars,))
    exps = st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars).map(tuple)
    terms = st.dictionaries(exps, small_fractions, max_size=max_terms)
    return terms.map(lambda t: Polynomial(layout, t))


def linear_forms(nvars=2):
    layout = VariableLayout((nvars,))
    coeffs = st.lists(st.integers(-2, 2), min_size=nvars, max_size=nvars).filter(any)
    return st.tuples(coeffs, st.integers(-3, 3)).map(lambda c: Polynomial.linear(layout, c[0], c[1]))


def rational_functions(nvars=2):
    """Polynomial over a product of at most two linear forms."""
    return st.tuples(polynomials(nvars, 2, 3), st.lists(linear_forms(nvars), max_size=2)).map(
        lambda t: FactoredRationalFunction.from_factors(t[0], t[1]))


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def S2():
    return typeA_product([2])


@pytest.fixture(scope="session")
def S3():
    return typeA_product([3])


@pytest.fixture(scope="session")
def S2xS2():
    return typeA_product([2, 2])


@pytest.fixture(scope="session")
def B2group():
    return B2()


def frac_vec(*xs):
    return tuple(Fraction(x) for x in xs)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
