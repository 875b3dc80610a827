import math

import pytest

from casimir_torque import (
    CavityConfig,
    LorentzResonance,
    LossyPolarizer,
    PerfectPolarizer,
    SemiInfiniteLorentz,
)

_ACCEPTANCE = {}


@pytest.fixture
def dichroic():
    """Fig. 4 mirror: resonances at omega_p and sqrt(2) omega_p, strengths omega_p."""
    return SemiInfiniteLorentz(LorentzResonance(1.0, 1.0), LorentzResonance(math.sqrt(2.0), 1.0))


@pytest.fixture
def perfect_cavity():
    return CavityConfig(1.0, math.pi / 4, PerfectPolarizer(), PerfectPolarizer())


@pytest.fixture
def lossy_cavity():
    return CavityConfig(1.0, math.pi / 4, LossyPolarizer(0.6), LossyPolarizer(0.6))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _ACCEPTANCE[(str(number), item.name)] = (title, report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, _), (title, outcome, detail) in sorted(_ACCEPTANCE.items(), key=lambda kv: str(kv[0][0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{verdict}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
