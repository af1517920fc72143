import numpy as np
import pytest

from floquet_well.matching import (
    NotARootError,
    Variant,
    assemble,
    determinant,
    null_state,
    quasienergy_det,
    singular_residual,
)
from floquet_well.rootfind import polish
from floquet_well.sweep import seed_driven_root


def test_static_matrix_is_two_by_two(well):
    m = assemble(well, 3.0 + 0j, 0)
    assert m.entries.shape == (2, 2)


def test_driven_matrix_size(well):
    driven = well.with_(v1=1.5, omega=0.4 * 15)
    m = assemble(driven, 3.0 + 0j, 2)
    assert m.entries.shape == (10, 10)


def test_determinant_vanishes_at_static_energies(well, e0, e1):
    det = quasienergy_det(well, 0)
    # scale against values in the spectral gap
    gap_scale = abs(det(complex(0.5 * well.v0)))
    assert abs(det(complex(e0))) < 1e-9 * gap_scale
    assert abs(det(e1)) < 1e-9 * gap_scale


def test_determinant_bounded_away_in_gap(well):
    det = quasienergy_det(well, 0)
    # coarse real-axis scan between the two levels: no zero hides there
    values = [abs(det(complex(0.35 * well.v0 + f * 0.4 * well.v0))) for f in np.linspace(0, 1, 40)]
    assert min(values) > 1e-3 * max(values)


def test_static_sidebands_decouple(well, e0, e1):
    """At v1 = 0 the N = 2 determinant factors into shifted static conditions."""
    omega = 0.7 * well.v0
    p = well.with_(v1=0.0, omega=omega)
    det = quasienergy_det(p, 2)
    for base in (complex(e0), e1):
        for n in (-2, -1, 0, 1, 2):
            r = polish(det, base + n * omega)
            assert r.converged
            assert abs(r.eps - (base + n * omega)) < 1e-10
            assert singular_residual(p, r.eps, 2) < 1e-12


def test_zero_set_invariant_under_row_column_scaling(well, e1):
    """Rescaling rows/columns of the matrix moves no determinant zeros."""
    rng = np.random.default_rng(5)
    rs = rng.uniform(0.2, 5.0, size=2) * np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
    cs = rng.uniform(0.2, 5.0, size=2) * np.exp(1j * rng.uniform(0, 2 * np.pi, 2))

    def scaled_det(eps):
        m = assemble(well, eps, 0).entries
        return complex(np.linalg.det(m * rs[:, None] * cs[None, :]))

    r = polish(scaled_det, e1 + 0.01 - 0.01j)
    assert r.converged
    assert abs(r.eps - e1) < 1e-9


def test_driven_root_near_reference_branches(well, e0, e1):
    # v1 = 0.1 v0, omega = 0.4 v0: branch representatives stay near the
    # static energies they emanate from
    p = well.with_(v1=0.1 * well.v0, omega=0.4 * well.v0)
    for seed, target in ((complex(e0), 0.232123), (e1, 0.864945)):
        eps = seed_driven_root(p, seed)
        m = assemble(p, eps, 2).entries
        row_scale = np.prod(np.abs(m).max(axis=1))
        assert abs(determinant(assemble(p, eps, 2))) < 1e-9 * row_scale
        assert eps.real / well.v0 == pytest.approx(target, abs=0.02)


def test_null_state_static_decoupled(well, e1):
    omega = 0.7 * well.v0
    p = well.with_(v1=0.0, omega=omega)
    st = null_state(p, e1, 2)
    center = st.center
    amps = np.abs(st.A)
    assert amps[center] == pytest.approx(1.0, abs=1e-10)
    off = np.delete(amps, center)
    assert np.all(off < 1e-10)
    assert np.sum(amps**2) == pytest.approx(1.0, rel=1e-12)


def test_null_vector_annihilated_by_matrix(well, e1):
    p = well.with_(v1=0.1 * well.v0, omega=0.7 * well.v0)
    eps = seed_driven_root(p, e1)
    st = null_state(p, eps, 2)
    m = assemble(p, eps, 2).entries
    size = 2 * st.n_sidebands + 1
    vec = np.concatenate([st.u, st.v])
    residual = np.linalg.norm(m @ vec) / (np.linalg.norm(m, np.inf) * np.linalg.norm(vec))
    assert residual < 1e-8


def test_null_state_open_channel_carries_flux(well, e1):
    # decaying driven state: the central outgoing amplitude must be populated
    p = well.with_(v1=0.1 * well.v0, omega=0.7 * well.v0)
    eps = seed_driven_root(p, e1)
    assert eps.imag < 0
    st = null_state(p, eps, 2)
    assert abs(st.t[st.center]) > 1e-6


def test_null_state_rejects_non_root(well):
    with pytest.raises(NotARootError):
        null_state(well, complex(0.5 * well.v0), 0)


def test_bottom_variant_matches_barrier_spectrum(well, e0, e1):
    """Both drive variants share the determinant zero set."""
    for w_over, v_over in ((0.3, 0.1), (0.7, 0.1)):
        p = well.with_(v1=v_over * well.v0, omega=w_over * well.v0)
        for seed in (complex(e0), e1):
            rb = polish(quasienergy_det(p, 3, Variant.BARRIER_DRIVEN), seed)
            rt = polish(quasienergy_det(p, 3, Variant.BOTTOM_DRIVEN), seed)
            assert rb.converged and rt.converged
            assert abs(rb.eps - rt.eps) < 1e-10 * well.v0


def test_bottom_variant_null_state_consistent(well, e1):
    p = well.with_(v1=0.1 * well.v0, omega=0.7 * well.v0)
    eps = seed_driven_root(p, e1)
    rb = polish(quasienergy_det(p, 2, Variant.BOTTOM_DRIVEN), eps)
    st = null_state(p, rb.eps, 2, Variant.BOTTOM_DRIVEN)
    assert st.residual < 1e-8
    assert np.sum(np.abs(st.A) ** 2) == pytest.approx(1.0, rel=1e-10)
    assert abs(st.t[st.center]) > 1e-6
