import pytest

from spansub.instances import gen_random_semidegree


@pytest.fixture(scope="session")
def dense100():
    return gen_random_semidegree(100, 0.1, seed=11)


@pytest.fixture(scope="session")
def dense200():
    return gen_random_semidegree(200, 0.15, seed=21)


@pytest.fixture(scope="session")
def dense300():
    return gen_random_semidegree(300, 0.15, seed=31)


_LINES = pytest.StashKey[list]()


@pytest.fixture
def record_criterion(request):
    """Log a one-line PASS/FAIL verdict, echoed again in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        lines.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
