import numpy as np
import pytest

from twistspec.graph import cycle_graph, k4, random_graph, theta_graph

ACCEPTANCE_LINES: list[str] = []


def corpus(seed: int = 2024, count: int = 20, n_max: int = 7, m_max: int = 11):
    """The shared random corpus: connected, genus 1..4."""
    rng = np.random.default_rng(seed)
    return [random_graph(rng, n_max, m_max, min_genus=1, max_genus=4) for _ in range(count)]


@pytest.fixture(scope="session")
def random_corpus():
    return corpus()


@pytest.fixture
def K4():
    return k4()


@pytest.fixture
def G1():
    return theta_graph(1, 2, 3)


@pytest.fixture
def G2():
    return theta_graph(1, 3, 5)


@pytest.fixture
def G3():
    return theta_graph(2, 2, 4)


@pytest.fixture
def C3():
    return cycle_graph(3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
