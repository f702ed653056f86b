import pytest

from spamlab import corpus as corpus_mod
from spamlab import presets
from spamlab.fixtures import fixture_text


@pytest.fixture(scope="session")
def sample10() -> corpus_mod.Corpus:
    return corpus_mod.load_csv(fixture_text("sample10.csv").encode(), name="sample10")


@pytest.fixture(scope="session")
def preset_defs():
    return presets.preset_list()


# One visible PASS/FAIL line per acceptance criterion (tests in
# test_acceptance.py carry an `acceptance` marker with the criterion id).

def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(id, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    marker = getattr(report, "_acceptance", None)
    if marker is None:
        return
    cid, title = marker
    status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIPPED"}[report.outcome]
    print(f"\nACCEPTANCE {cid:>2} [{status}] {title}", flush=True)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report._acceptance = (marker.args[0], marker.args[1])
