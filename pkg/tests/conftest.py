import numpy as np
import pytest

from toeplitz_embed import Symbol, fixtures


@pytest.fixture(scope="session")
def sym_z():
    return Symbol.from_coeffs({1: 1.0}, name="z")


@pytest.fixture(scope="session")
def sym_recip_z():
    return Symbol.from_coeffs({-1: 1.0}, name="1/z")


@pytest.fixture(scope="session")
def sym_z_plus_2():
    return Symbol.from_coeffs({0: 2.0, 1: 1.0}, name="z+2")


@pytest.fixture(scope="session")
def two_lap():
    return fixtures.two_lap_eight()


@pytest.fixture(scope="session")
def fig6():
    return fixtures.nested_tangent_circles()


@pytest.fixture(scope="session")
def fig5():
    return fixtures.figure_eight_in_loop()


@pytest.fixture(scope="session")
def cusp():
    return fixtures.root_cusp()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240811)
