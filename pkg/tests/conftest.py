import pytest

from floquet_well.model import WellParams
from floquet_well.staticwell import solve_static

# the well used throughout: a=1, b=2, v0=15, v0_prime=v0/2, atomic units
V0 = 15.0


@pytest.fixture(scope="session")
def well() -> WellParams:
    return WellParams(a=1.0, b=2.0, v0=V0, v0_prime=V0 / 2)


@pytest.fixture(scope="session")
def static_spectrum(well):
    return solve_static(well)


@pytest.fixture(scope="session")
def e0(static_spectrum) -> float:
    return static_spectrum.bound[0]


@pytest.fixture(scope="session")
def e1(static_spectrum) -> complex:
    return static_spectrum.resonances[0]
