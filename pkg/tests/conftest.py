import pytest

from coxcoh.corpus import get


@pytest.fixture(scope="session")
def S3():
    return get("S3").system()


@pytest.fixture(scope="session")
def A3():
    return get("A3").system()


@pytest.fixture(scope="session")
def Dinf():
    return get("Dinf").system()


@pytest.fixture(scope="session")
def tripod():
    return get("tripod").system()


@pytest.fixture(scope="session")
def Z2():
    return get("Z2").system()


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_lines(request):
    return request.config.stash.setdefault(ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda text: int(text.split("criterion ")[1].split()[0])):
            terminalreporter.write_line(line)
