import pytest

from ncdirac.potential import FieldParams, PotentialParams
from ncdirac.spectrum import solve_state

# Reference well: repulsive in the closed-form reading, physical bound states exist.
P0 = PotentialParams(V0=1.0, a=-4.0, b=1.0, g=0.0, alpha=1.0, r_c=0.5, M=1.0)
# Mirror well used as the working canonical case.
PM = PotentialParams(V0=1.0, a=10.0, b=1.0, g=0.0, alpha=0.4, r_c=0.5, M=1.0)

PM_ENERGIES = {
    (0, 0): -0.46634991577287505,
    (1, 0): 0.63588989435406729,
    (0, 1): -0.71715610794169093,
    (1, 1): 0.321923632,
}


@pytest.fixture(scope="session")
def p0():
    return P0


@pytest.fixture(scope="session")
def pm():
    return PM


@pytest.fixture(scope="session")
def field():
    return FieldParams(e_charge=1.0, k_const=1.0, q_source=0.01)


@pytest.fixture(scope="session")
def pm_states():
    return {key: solve_state(key[0], key[1], PM) for key in [(0, 0), (1, 0), (0, 1)]}


# -- acceptance bookkeeping: one line per criterion in the terminal summary --

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name, part): acceptance criterion tag")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    name, part = mark.args
    if hasattr(item, "callspec"):
        part = f"{part}[{item.callspec.id}]"
    ok = call.excinfo is None
    _CRITERIA.setdefault(name, []).append((part, ok))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        parts = _CRITERIA[name]
        verdict = "PASS" if all(ok for _, ok in parts) else "FAIL"
        detail = ", ".join(f"{p}: {'pass' if ok else 'fail'}" for p, ok in parts)
        terminalreporter.write_line(f"{name} {verdict}  ({detail})")
