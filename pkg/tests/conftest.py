from __future__ import annotations

import sys
import time

import pytest

from torusmirror.specfile import BUILTIN, load_spec


@pytest.fixture(params=BUILTIN)
def builtin_spec(request):
    return load_spec(request.param)


@pytest.fixture
def hesse():
    return load_spec("hesse")


@pytest.fixture
def kummer():
    return load_spec("kummer-degenerate")


_SESSION_START = time.perf_counter()
SUITE_BUDGET = 180.0


def pytest_terminal_summary(terminalreporter):
    module = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        passed, detail = results[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
    elapsed = time.perf_counter() - _SESSION_START
    verdict = "PASS" if elapsed < SUITE_BUDGET else "FAIL"
    terminalreporter.write_line(f"[{verdict}] criterion 7 runtime: this pytest session took "
                                f"{elapsed:.1f} s (< {SUITE_BUDGET:.0f} s)")
