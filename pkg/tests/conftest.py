import numpy as np
import pytest

from qsys.category import builtin


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope='session')
def fib():
    return builtin('Fib')


@pytest.fixture(scope='session')
def ising():
    return builtin('Ising')


@pytest.fixture(scope='session')
def repz2():
    return builtin('RepZ2')


def random_hermitian(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return G + G.conj().T


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
