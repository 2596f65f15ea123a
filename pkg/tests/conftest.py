from __future__ import annotations

import pytest


@pytest.fixture
def verdict(capsys):
    """Print one PASS/FAIL line (visible in the pytest log) and return the flag."""

    def emit(name: str, ok: bool, detail: str) -> bool:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return emit
