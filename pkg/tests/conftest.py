from __future__ import annotations

import time

import pytest

from balancing_cert.pipeline import full_certificate

# acceptance criterion -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def certificate():
    t = time.perf_counter()
    cert = full_certificate()
    cert.elapsed = time.perf_counter() - t
    return cert


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
