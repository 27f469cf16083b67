import pytest

_REPORT: list[str] = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion, printed at session end."""
    lines: list[str] = []

    def note(text: str) -> None:
        lines.append(text)

    yield note
    failed = getattr(request.node, "rep_call", None) is None or not request.node.rep_call.passed
    title = request.node.get_closest_marker("criterion").args[0]
    detail = "; ".join(lines)
    line = f"[{'FAIL' if failed else 'PASS'}] {title}" + (f" :: {detail}" if detail else "")
    print("\n" + line)
    _REPORT.append(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(title): acceptance criterion reported in the summary")
