import pytest

from randcantor import kernels
from randcantor.kernels import _pycore

BACKENDS = [_pycore]
try:
    from randcantor.kernels import _ccore
    BACKENDS.append(_ccore)
except ImportError:  # extension not built
    _ccore = None


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


def pytest_report_header(config):
    return f"randcantor kernel backend: {kernels.BACKEND}"


# acceptance lines, filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
