import re

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome == "failed":
        _ACCEPTANCE[key] = _ACCEPTANCE.get(key, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (n, name), ok in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {name}")
