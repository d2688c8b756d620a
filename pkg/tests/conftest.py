import numpy as np
import pytest

from paulitwirl import NoiseChannel, PauliString, PauliSum

_ACCEPTANCE = []


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def two_qubit_noise():
    """M ∝ IX + IZ + YX + ZX/√2 + YY, normalised so the twirled channel is a distribution."""
    m = PauliSum.from_list([(1, "IX"), (1, "IZ"), (1, "YX"), (2**-0.5, "ZX"), (1, "YY")])
    return m.normalised()


@pytest.fixture
def global_field_noise():
    """M ∝ Z1 + ... + Z8."""
    return PauliSum.from_list([(1, f"Z{k}") for k in range(1, 9)], 8).normalised()


def P(label):
    return PauliString.from_label(label)


def random_pauli_sum(rng, n, terms):
    count = min(terms, 4**n)
    picks = rng.choice(4**n, size=count, replace=False)
    size = 1 << n
    return PauliSum(
        n,
        {
            PauliString(n, int(k) % size, int(k) // size): complex(rng.normal(), rng.normal())
            for k in picks
        },
    )


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for name, args in getattr(report, "acceptance", []):
        _ACCEPTANCE.append((args, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    rep.acceptance = [("acceptance", marker.args)] if marker else []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_ACCEPTANCE, key=lambda r: r[0][0]):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
