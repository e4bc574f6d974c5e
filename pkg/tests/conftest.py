import numpy as np
import pytest

from harmonia import fixtures as fx
from harmonia.poly import ComplexPoly

Z = ComplexPoly.monomial(1)
ONE = ComplexPoly.constant(1)


def poly(*coeffs) -> ComplexPoly:
    return ComplexPoly(coeffs)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def graph():
    return fx.harmonic_graph()


@pytest.fixture(scope="session")
def enneper():
    return fx.enneper()


@pytest.fixture(scope="session")
def flat():
    return fx.flat_plane()


@pytest.fixture(scope="session")
def line():
    return fx.line_fixture()
