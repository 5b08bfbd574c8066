import numpy as np
import pytest

from symproj.models import total_spin_operators

# Hand-written 4x4 matrices for two spins, basis (uu, ud, du, dd), site 0 = last factor.
SZ2 = np.diag([1.0, 0.0, 0.0, -1.0])
S2_2 = np.array(
    [
        [2, 0, 0, 0],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 2],
    ],
    dtype=float,
)
SINGLET = np.array([0, 1, -1, 0]) / np.sqrt(2)
TRIPLET0 = np.array([0, 1, 1, 0]) / np.sqrt(2)


def spin_ops(n):
    return [np.asarray(x) for x in total_spin_operators(n)]


@pytest.fixture(scope="session")
def two_spins():
    return spin_ops(2)


@pytest.fixture(scope="session")
def four_spins():
    return spin_ops(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
