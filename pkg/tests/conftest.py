import pytest

from gponqkd.keyrate import DecoyParams
from gponqkd.noise import DetectorSpec, default_sources
from gponqkd.scenario import config_from_dict


@pytest.fixture
def detector():
    return DetectorSpec()


@pytest.fixture
def sources():
    return default_sources()


@pytest.fixture
def decoy():
    return DecoyParams()


@pytest.fixture(scope="session")
def default_cfg():
    return config_from_dict({})


_CRITERIA: dict[str, str] = {}


@pytest.fixture
def criterion(request):
    """Register an acceptance criterion; the outcome is filled in after the test runs."""
    def register(label):
        request.node.criterion_label = label
        _CRITERIA.setdefault(label, "FAIL")
    return register


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    label = getattr(item, "criterion_label", None)
    if label is None or report.when == "setup":
        return
    if report.failed:
        _CRITERIA[label] = "FAIL"
    elif report.when == "call":
        _CRITERIA[label] = "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_CRITERIA[label]}  criterion {label}")
