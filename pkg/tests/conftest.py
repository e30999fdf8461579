import pytest

from copface import build_lift, circulant_minimal_zeros, zero_graph


@pytest.fixture(scope="session")
def circulant():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = circulant_minimal_zeros(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def lifted(circulant):
    """``lifted(n, I)`` with 0-based ``I``; returns (LiftResult, CliqueCover)."""
    cache = {}

    def get(n, I):
        key = (n, tuple(I))
        if key not in cache:
            base = circulant(n)
            lift = build_lift(base.matrix, base, I)
            cache[key] = (lift, zero_graph(lift.lifted_catalog))
        return cache[key]

    return get


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
