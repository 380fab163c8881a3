import pytest

from abcprop.model import Instance


def ballots(*sets):
    """Ballots written with 1-based candidate numbers: c1 is index 0."""
    return tuple(frozenset(c - 1 for c in s) for s in sets)


def make(m, k, *sets):
    return Instance(m, k, ballots(*sets))


@pytest.fixture
def fig3():
    return make(7, 6, {1, 2, 3}, {1, 2}, {4, 5, 6, 7}, {4, 5, 6, 7})


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request, capsys):
    """Record one pass/fail line per acceptance criterion and echo it immediately."""
    store = request.config.__dict__.setdefault("_acceptance_lines", [])

    def report(number: int, ok: bool, summary: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {summary}"
        store.append(line)
        with capsys.disabled():
            print("\n" + line)

    return report
