import pytest

# criterion number -> (passed, detail), filled by tests/test_acceptance.py
CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    number = getattr(item.function, "criterion", None)
    if number is not None and report.when == "call":
        detail = f"{report.duration:.1f}s"
        CRITERIA[number] = (report.passed, detail, item.function.__doc__ or "")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail, doc = CRITERIA[number]
        title = doc.strip().splitlines()[0] if doc.strip() else ""
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  ({detail})  {title}")
