import contextlib

import pytest

# acceptance results, printed as one line per criterion at the end of the run
_CRITERIA: dict[int, str] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    """Record PASS/FAIL for an acceptance criterion; ``detail`` collects measured values."""
    detail: dict = {}
    try:
        yield detail
    except BaseException as exc:
        detail["error"] = f"{type(exc).__name__}: {exc}".splitlines()[0][:200]
        _record(number, title, False, detail)
        raise
    _record(number, title, True, detail)


def _record(number, title, ok, detail):
    extras = " ".join(f"{k}={v}" for k, v in detail.items())
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {title}" + (f" | {extras}" if extras else "")
    _CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])


@pytest.fixture
def record_criterion():
    return criterion
