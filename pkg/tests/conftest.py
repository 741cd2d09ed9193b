import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stage_effort import STAGES, Dataset, ProjectRecord, build_universe, partition  # noqa: E402
from stage_effort.discretize import Explicit  # noqa: E402
from stage_effort.synthetic import generate_dataset  # noqa: E402

HEADER = "project_id,EP,ES,ED,EB,ET,EI\n"


@pytest.fixture
def worked_scheme():
    """Specification-stage scheme of the worked example: [10, 170] in four."""
    return partition(build_universe([22.0, 80.0, 162.0], Explicit(12, 8)), 4)


@pytest.fixture(scope="session")
def synthetic34():
    return generate_dataset(34, seed=2009)


def make_dataset(rows, unit=""):
    return Dataset(tuple(ProjectRecord(f"p{k}", tuple(float(v) for v in row)) for k, row in enumerate(rows)), unit)


def identical_dataset(n=6, value=50.0):
    return make_dataset([[value] * len(STAGES)] * n)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    failed = report.failed
    if report.when == "call" or failed:
        title, previous = _CRITERIA.get(number, (title, True))
        _CRITERIA[number] = (title, previous and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  AC{number:>2}  {title}")
