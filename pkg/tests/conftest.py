from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> list of (test id, passed)
_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA.setdefault(marker.args[0], []).append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        parts = _CRITERIA[n]
        failed = [name for name, ok in parts if not ok]
        status = "FAIL" if failed else "PASS"
        detail = f" ({len(failed)}/{len(parts)} parts failed: {', '.join(failed)})" if failed else f" ({len(parts)} parts)"
        terminalreporter.write_line(f"criterion {n:2d}: {status}{detail}")
