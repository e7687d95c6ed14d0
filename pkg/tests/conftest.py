import pytest

from d2dshare import game
from d2dshare.model import default_scenario


@pytest.fixture(scope="session")
def symmetric():
    return default_scenario()


@pytest.fixture(scope="session")
def asymmetric():
    return default_scenario(lambda2d_ratio=0.8)


@pytest.fixture(scope="session")
def symmetric_players(symmetric):
    return game.build_players(symmetric)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance" in report.nodeid and report.when == "call":
        detail = "; ".join(v for k, v in report.user_properties if k == "detail")
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _ACCEPTANCE:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {name}: {verdict}  {detail}".rstrip())


MC_TRIALS = 10_000
MC_SEED = 7
MC_BETA = 0.5
MC_GAMMAS = (0.1, 1.0, 10.0)


@pytest.fixture(scope="session")
def shared_band_mc(symmetric):
    """One 10^4-trial shared-band simulation, reused by several tests."""
    import time

    from d2dshare.montecarlo import estimate_coverage

    start = time.perf_counter()
    est = estimate_coverage(symmetric, MC_BETA, MC_GAMMAS, MC_TRIALS, MC_SEED)
    return est, time.perf_counter() - start
