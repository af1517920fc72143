"""Time-dependent density and the non-decay probability of a Floquet state.

P(t) is the probability of still finding the particle inside [0, b],
normalized to P(0) = 1.  Writing the state as exp(-i eps t) Phi(x, t) with
Phi periodic, P(t) = exp(2 Im(eps) t) h(t) where h is the periodic ratio of
the Phi norms; the coarse-grained Pbar(t) replaces h by its one-period
average, isolating the exponential envelope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import build_channels
from .matching import FloquetState, Variant
from .model import WellParams
from .special import cosh_qd, sin_over_k, sinh_over_q

GAUSS_NODES = 64
H_AVERAGE_SAMPLES = 128


@dataclass(frozen=True)
class SurvivalSeries:
    times: np.ndarray
    P: np.ndarray
    h: np.ndarray
    Pbar: np.ndarray
    h_mean: float
    period: float


def _phi_components(state: FloquetState, params: WellParams, x: np.ndarray) -> np.ndarray:
    """phi[n, j]: sideband-n spatial amplitude of Phi at positions x[j].

    Positions must all lie in one region ([0, a) or [a, b]); the caller
    splits at x = a.
    """
    ch = build_channels(params, state.eps, state.n_sidebands)
    size = 2 * state.n_sidebands + 1
    in_well = x < params.a
    if np.any(in_well) and not np.all(in_well):
        raise ValueError("positions must not straddle x = a")
    from .special import bessel_coupling_matrix
    from .model import drive_argument

    jm = bessel_coupling_matrix(size, drive_argument(params))
    if np.all(in_well):
        basis = np.array([[sin_over_k(k, xi) for xi in x] for k in ch.k])
        if state.variant is Variant.BARRIER_DRIVEN:
            return state.A_entire[:, None] * basis
        # bottom-driven: the well block carries the Bessel dressing
        return jm @ (state.A_entire[:, None] * basis)
    rel = x - params.a
    w = np.array(
        [
            [u * cosh_qd(q, d) + v * sinh_over_q(q, d) for d in rel]
            for u, v, q in zip(state.u, state.v, ch.q)
        ]
    )
    if state.variant is Variant.BARRIER_DRIVEN:
        return jm @ w
    return w


def wavefunction_density(
    state: FloquetState, params: WellParams, x: float, t: float
) -> float:
    """|Psi(x, t)|^2 inside the trapping region [0, b]."""
    if not 0.0 <= x <= params.b:
        raise ValueError(f"x={x} outside the trapping region [0, {params.b}]")
    xs = np.array([x])
    phi = _phi_components(state, params, xs)[:, 0]
    ns = np.arange(-state.n_sidebands, state.n_sidebands + 1)
    total = np.sum(phi * np.exp(-1j * ns * params.omega * t))
    envelope = np.exp(-1j * state.eps * t)
    return float(abs(envelope * total) ** 2)


def _phi_norm_factory(state: FloquetState, params: WellParams):
    """Callable t -> integral of |Phi(x, t)|^2 over [0, b] by fixed-order
    Gauss-Legendre per region (the integrand is a low-order trig/hyperbolic
    polynomial, so this is effectively exact)."""
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)

    def region(lo: float, hi: float):
        half = 0.5 * (hi - lo)
        xs = lo + half * (nodes + 1.0)
        ws = weights * half
        return xs, ws

    x1, w1 = region(0.0, params.a)
    x2, w2 = region(params.a, params.b)
    phi1 = _phi_components(state, params, x1)
    phi2 = _phi_components(state, params, x2)
    ns = np.arange(-state.n_sidebands, state.n_sidebands + 1)

    def norm_at(t: float) -> float:
        phases = np.exp(-1j * ns * params.omega * t)
        f1 = phases @ phi1
        f2 = phases @ phi2
        return float(w1 @ (np.abs(f1) ** 2) + w2 @ (np.abs(f2) ** 2))

    return norm_at


def survival(state: FloquetState, params: WellParams, t_grid: np.ndarray) -> SurvivalSeries:
    """Non-decay probability P, periodic factor h and coarse-grained Pbar.

    h_mean is a 128-sample trapezoid average of h over one period; h is a
    finite sideband sum, hence band-limited, so this is spectrally accurate.
    """
    if params.omega <= 0.0:
        raise ValueError("survival needs omega > 0 (any value works for a static state)")
    t_grid = np.asarray(t_grid, dtype=float)
    norm_at = _phi_norm_factory(state, params)
    n0 = norm_at(0.0)
    if n0 <= 0.0:
        raise ValueError("state has zero norm on [0, b]")
    h = np.array([norm_at(t) / n0 for t in t_grid])
    decay = np.exp(2.0 * state.eps.imag * t_grid)
    period = 2.0 * np.pi / params.omega
    ts = np.linspace(0.0, period, H_AVERAGE_SAMPLES + 1)
    h_period = np.array([norm_at(t) / n0 for t in ts])
    h_mean = float(np.trapezoid(h_period, ts) / period)
    return SurvivalSeries(
        times=t_grid,
        P=decay * h,
        h=h,
        Pbar=decay * h_mean,
        h_mean=h_mean,
        period=period,
    )
