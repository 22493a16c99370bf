import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from unicrit.numdom import CyclotomicElement, FieldContext, Poly, RationalFunction

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_ints = st.integers(min_value=-30, max_value=30)
rationals = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=12))
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def polys(draw, max_degree=3):
    coeffs = draw(st.lists(rationals, min_size=1, max_size=max_degree + 1))
    return Poly(coeffs)


@st.composite
def ratfuncs(draw):
    num = draw(polys())
    den = draw(polys().filter(lambda p: not p.is_zero()))
    return RationalFunction(num, den)


def cyclotomics(n):
    from unicrit.numdom import euler_phi

    return st.lists(rationals, min_size=euler_phi(n), max_size=euler_phi(n)).map(
        lambda cs: CyclotomicElement(n, Poly(cs))
    )


@pytest.fixture
def QQ():
    return FieldContext.rationals()


@pytest.fixture
def QT():
    return FieldContext.function_field()


@pytest.fixture
def cyc():
    return FieldContext.cyclotomic


_CRITERIA_LINES = []


@pytest.fixture
def criterion():
    """Context manager that times a block and records one PASS/FAIL line for it."""

    @contextmanager
    def run(title, seconds=None):
        start = time.perf_counter()
        ok = False
        try:
            yield
            elapsed = time.perf_counter() - start
            assert seconds is None or elapsed < seconds, f"took {elapsed:.1f}s, limit {seconds}s"
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            line = f"{'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f}s)"
            _CRITERIA_LINES.append(line)
            print(line)

    return run


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA_LINES:
            terminalreporter.write_line(line)
