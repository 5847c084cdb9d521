import numpy as np
import pytest

from lpfc.codes import hamming74, sample_regular


@pytest.fixture(scope="session")
def hamming():
    return hamming74()


@pytest.fixture(scope="session")
def small_34():
    return sample_regular(20, 3, 4, seed=5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
