import pytest

_RESULTS: dict[int, tuple[bool, str, str]] = {}


class _Criterion:
    """Context manager that records PASS/FAIL for one acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            _RESULTS[self.number] = (True, self.title, self.detail)
        else:
            reason = str(exc).splitlines()[0] if str(exc) else exc_type.__name__
            _RESULTS[self.number] = (False, self.title, reason)
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, title, detail = _RESULTS[n]
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({detail})" if detail else ""))
