import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance check, in file order."""
    reports = []
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) == "call" and "test_acceptance.py" in rep.nodeid:
                reports.append(rep)
    if not reports:
        return
    from tests.test_acceptance import ACCEPTANCE_ORDER
    by_name = {r.nodeid.split("::")[-1]: r for r in reports}
    terminalreporter.section("acceptance summary")
    for number, (name, label) in enumerate(ACCEPTANCE_ORDER, 1):
        rep = by_name.get(name)
        status = "NOT RUN" if rep is None else ("PASS" if rep.passed else "FAIL")
        terminalreporter.write_line(f"[{status:>7}] {number:2d}. {label}")
        measured = dict(rep.user_properties).get("measured") if rep is not None else None
        if measured:
            terminalreporter.write_line(f"            {measured}")
