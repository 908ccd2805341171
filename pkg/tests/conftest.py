import re

_CRITERIA: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    _CRITERIA.setdefault(int(m.group(1)), []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok = all(o == "passed" for o in _CRITERIA[num])
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}")
