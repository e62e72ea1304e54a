import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fcatreal.exactla import Mat, Subspace
from fcatreal.quiverrep import Quiver, Rep, SubRep, TorsionPair, projective
from fcatreal.complexes import Complex
from fcatreal.fcat import FilteredComplex
from fcatreal.tstruct import TStructureSpec

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (description, list of outcomes) for the acceptance summary
CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, text = mark.args
    CRITERIA.setdefault(n, (text, []))[1].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        text, outcomes = CRITERIA[n]
        verdict = "PASS" if outcomes and all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {text}")

A2 = Quiver.linear(2)
A3 = Quiver.linear(3)
S1 = Rep.simple(A2, "1")
S2 = Rep.simple(A2, "2")
P1 = projective(A2, "1")
P2 = projective(A2, "2")

POS = TStructureSpec.tilt(TorsionPair((S1, P1), "TILT_POS"))
NEG = TStructureSpec.tilt(TorsionPair((S2,), "TILT_NEG"))
STD = TStructureSpec.standard()


def at(m, degree=0):
    """``m`` as a complex concentrated in ``degree``."""
    return Complex.concentrated(m, degree)


def x_filt():
    """P1 in degree 0 filtered by its socle: F^1 = (0, Q)."""
    sub = SubRep(P1, (Subspace.zero(1), Subspace.full(1)))
    return FilteredComplex.from_steps(at(P1), 0, [{0: sub}])


# -- hypothesis strategies ---------------------------------------------------------------

scalars = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, rows=None, cols=None):
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    data = [[draw(scalars) for _ in range(c)] for _ in range(r)]
    return Mat(data, ncols=c) if r else Mat.zeros(0, c)


@st.composite
def reps(draw, quiver=A2, max_dim=2):
    dims = tuple(draw(st.integers(0, max_dim)) for _ in quiver.vertices)
    maps = {}
    for l, s, t in quiver.arrows:
        maps[l] = draw(matrices(rows=dims[quiver.index(t)], cols=dims[quiver.index(s)]))
    return Rep(quiver, dims, maps)


def quivers():
    return st.sampled_from([A2, A3])
