import os

# both evaluation routes are compared on every divergence computed under test
os.environ.setdefault("INFODIV_CROSS_CHECK", "1")

import numpy as np
import pytest

from infodiv._kernels import AVAILABLE, get_backend

_CRITERIA = pytest.StashKey[dict]()


@pytest.fixture(params=AVAILABLE)
def backend(request):
    return get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    number, title = marker.args
    entry = item.config.stash[_CRITERIA].setdefault(number, {"title": title, "passed": 0, "failed": [], "skipped": 0})
    if rep.failed:
        entry["failed"].append(item.name)
    elif rep.skipped:
        entry["skipped"] += 1
    elif rep.when == "call":
        entry["passed"] += 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_CRITERIA]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        r = results[number]
        ok = not r["failed"] and r["passed"] > 0
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {r['title']}  ({r['passed']} passed, {len(r['failed'])} failed)"
        terminalreporter.write_line(line)
        for name in r["failed"]:
            terminalreporter.write_line(f"    failed: {name}")
