import numpy as np
import pytest

from floquet_well.channels import build_channels
from floquet_well.model import WellParams


@pytest.fixture
def driven(well):
    return well.with_(v1=1.5, omega=3.0)


def test_threshold_channels(well):
    ch = build_channels(well, complex(well.v0_prime), 0)
    assert ch.kprime[ch.index(0)] == 0.0
    ch0 = build_channels(well, 0.0 + 0j, 0)
    assert ch0.k[ch0.index(0)] == 0.0


def test_reference_static_channels(well):
    # eps = 0.232123 * v0 for the reference well; frozen arithmetic
    ch = build_channels(well, complex(0.232123 * 15.0), 0)
    i = ch.index(0)
    assert ch.k[i] == pytest.approx(2.6388804444309333, abs=1e-12)
    assert ch.q[i] == pytest.approx(4.799615609608753, abs=1e-12)
    assert ch.kprime[i] == pytest.approx(2.8348386197453994j, abs=1e-12)
    assert ch.alpha == 0.0


def test_defining_relations(driven):
    rng = np.random.default_rng(3)
    for _ in range(20):
        eps = complex(rng.uniform(-5, 20), rng.uniform(-1, 0))
        ch = build_channels(driven, eps, 3)
        for n in range(-3, 4):
            i = ch.index(n)
            shift = n * driven.omega
            assert ch.k[i] ** 2 == pytest.approx(2 * (eps + shift), rel=1e-12)
            assert ch.q[i] ** 2 == pytest.approx(2 * (driven.v0 - eps - shift), rel=1e-12)
            assert ch.kprime[i] ** 2 == pytest.approx(
                2 * (eps + shift - driven.v0_prime), rel=1e-12
            )


def test_shift_property(driven):
    # channels at eps + omega are the channels at eps shifted by one sideband
    eps = 3.1 - 0.02j
    ch = build_channels(driven, eps, 3)
    ch_up = build_channels(driven, eps + driven.omega, 3)
    for n in range(-3, 3):
        assert ch_up.k[ch_up.index(n)] == pytest.approx(ch.k[ch.index(n + 1)], rel=1e-12)
        assert ch_up.q[ch_up.index(n)] == pytest.approx(ch.q[ch.index(n + 1)], rel=1e-12)
        assert ch_up.kprime[ch_up.index(n)] == pytest.approx(
            ch.kprime[ch.index(n + 1)], rel=1e-12
        )


def test_mass_enters_all_channels():
    heavy = WellParams(a=1, b=2, v0=15, v0_prime=7.5, mass=2.0)
    ch = build_channels(heavy, 3.0 + 0j, 0)
    assert ch.k[0] == pytest.approx(np.sqrt(2 * 2.0 * 3.0), rel=1e-12)


def test_truncation_validated(driven):
    strong = driven.with_(omega=0.4)  # alpha = 3.75
    with pytest.raises(ValueError):
        build_channels(strong, 3.0 + 0j, 2)
