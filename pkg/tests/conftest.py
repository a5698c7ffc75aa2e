import pytest

from starkchain import _kernels


@pytest.fixture(params=_kernels.available_backends())
def kernels(request):
    """Run a test once per available kernel backend (pure, compiled)."""
    return _kernels.get_backend(request.param)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion, printed after every full run."""
    import sys

    module = next(
        (m for name, m in sys.modules.items() if name.endswith("test_acceptance") and m),
        None,
    )
    results = getattr(module, "RESULTS", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key, passed, detail in sorted(results):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {status}  {detail}")
