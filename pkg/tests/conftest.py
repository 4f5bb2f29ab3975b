import pytest

from hybridrelay.channel import ChannelRealization, NetworkConfig


@pytest.fixture
def paper_config():
    """Simulation setup of the evaluation section at P_avg = 1 W, mu = 0.5."""
    return NetworkConfig(d_AS=10.0, d_SR=5.0, alpha=2.0, eta=0.5, n0_dbm=-80.0,
                         p_a_max=2.0, p_r_max=2.0, mu=0.5)


@pytest.fixture
def unit_config():
    """Peaks of 1 W and mu = 1 so no average constraint binds below tau1 = 1."""
    return NetworkConfig(p_a_max=1.0, p_r_max=1.0, mu=1.0)


@pytest.fixture
def flat_channel():
    return ChannelRealization(1e-5, 1e-5, 1e-5, 1e-5, 1e-5)


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collects one PASS/FAIL line per acceptance criterion for the run summary."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
