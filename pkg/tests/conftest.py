import os

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

_CRITERIA: dict[str, list[tuple[str, str]]] = {}


def pytest_collection_modifyitems(config, items):
    if os.environ.get("RINGCONC_EXTENDED", "") in ("", "0"):
        skip = pytest.mark.skip(reason="extended run; set RINGCONC_EXTENDED=1")
        for item in items:
            if "extended" in item.keywords:
                item.add_marker(skip)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        if hasattr(rep, "wasxfail"):
            status = "XFAIL" if rep.skipped else "XPASS"
        else:
            status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _CRITERIA.setdefault(str(mark.args[0]), []).append((status, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (len(k), k)):
        for status, name in _CRITERIA[key]:
            tr.write_line(f"criterion {key:>3}: {status:<5} {name}")
