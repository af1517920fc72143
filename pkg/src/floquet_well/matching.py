"""Boundary-matching linear system whose determinant zeros are quasi-energies.

The wavefunction ansatz (standing waves in the well, exponentials under the
barrier, outgoing waves outside, sidebands coupled by a Bessel dressing) is
matched in value and slope at x = a and x = b.  Eliminating the well and
outgoing amplitudes row by row halves the system to size 2(2N+1).

Matrix entries use bases that are entire in the energy except for the outer
channel factor i*k'_n:

* region I:   s(k, x) = sin(kx)/k with derivative cos(kx),
* region II:  cosh(q(x-a)) and sinh(q(x-a))/q anchored at the inner barrier
  face, so entries grow at most like exp(Re q (b-a)).

This keeps the determinant analytic across the k = 0 and q = 0 thresholds
(no spurious zeros or poles there) and makes contour-based root counting
legitimate away from the k' branch points at eps = v0_prime - n*omega.

Two drive variants are assembled:

* BARRIER_DRIVEN: the barrier top oscillates; the Bessel dressing sits on
  the barrier columns, the unknowns are the barrier-basis coefficient pair
  per sideband.
* BOTTOM_DRIVEN: the floor of the well and of the outer shelf ride the
  drive while the barrier is static; the dressing moves onto the well and
  outgoing blocks and the unknowns are the well and outgoing amplitudes.
  The two variants have identical determinant zero sets.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .channels import ChannelSet, build_channels
from .model import ComplexEnergy, WellParams, drive_argument
from .special import bessel_coupling_matrix, cosh_qd, sin_over_k, sinh_over_q


class Variant(enum.Enum):
    BARRIER_DRIVEN = "barrier"
    BOTTOM_DRIVEN = "bottom"


class NotARootError(ValueError):
    """Coefficient extraction was requested at a point that is not a root."""


class DegenerateRootError(ValueError):
    """The null space at the root has dimension > 1; not resolved silently."""


@dataclass(frozen=True)
class MatchingMatrix:
    """Dense matching matrix of size 2(2N+1) x 2(2N+1).

    Column blocks (size 2N+1 each):
      BARRIER_DRIVEN: barrier value coefficients u_l = w_l(a), then slope
        coefficients v_l = w_l'(a), where w_l(x) = u_l cosh(q_l(x-a))
        + v_l sinh(q_l(x-a))/q_l is the sideband-l barrier wave.
      BOTTOM_DRIVEN: well amplitudes A'_l (region-I wave A'_l sin(k_l x)/k_l),
        then balanced outgoing amplitudes ttilde_l = t_l exp(i k'_l b).

    Row blocks: the matching conditions at x = a with the well amplitude
    eliminated (cos(k_n a)*[value] - sin(k_n a)/k_n*[slope]), then the
    conditions at x = b with the outgoing amplitude eliminated
    (i k'_n*[value] - [slope]); for BOTTOM_DRIVEN the interface-a relations
    are substituted instead, leaving value/slope matching at x = b.
    """

    entries: np.ndarray
    variant: Variant
    eps: ComplexEnergy
    n_sidebands: int


def _region_tables(params: WellParams, ch: ChannelSet):
    width = params.b - params.a
    c = np.cos(ch.k * params.a)
    s = np.array([sin_over_k(k, params.a) for k in ch.k])
    cb = np.array([cosh_qd(q, width) for q in ch.q])
    sb = np.array([sinh_over_q(q, width) for q in ch.q])
    return c, s, cb, sb


def assemble(
    params: WellParams,
    eps: ComplexEnergy,
    n_sidebands: int,
    variant: Variant = Variant.BARRIER_DRIVEN,
) -> MatchingMatrix:
    """Build the matching matrix at a candidate quasi-energy."""
    ch = build_channels(params, eps, n_sidebands)
    size = 2 * n_sidebands + 1
    c, s, cb, sb = _region_tables(params, ch)
    q2 = ch.q * ch.q
    ikp = 1j * ch.kprime
    jm = bessel_coupling_matrix(size, drive_argument(params))

    m = np.zeros((2 * size, 2 * size), dtype=complex)
    if variant is Variant.BARRIER_DRIVEN:
        # rows n at x=a: sum_l J_{n-l} (c_n u_l - s_n v_l) = 0
        m[:size, :size] = jm * c[:, None]
        m[:size, size:] = -jm * s[:, None]
        # rows n at x=b: sum_l J_{n-l} [ (ik'_n cb_l - q_l^2 sb_l) u_l
        #                               + (ik'_n sb_l - cb_l) v_l ] = 0
        m[size:, :size] = jm * (ikp[:, None] * cb[None, :] - (q2 * sb)[None, :])
        m[size:, size:] = jm * (ikp[:, None] * sb[None, :] - cb[None, :])
    else:
        # interface a gives u_n = sum_l A'_l s_l J_{n-l}, v_n = sum_l A'_l c_l J_{n-l};
        # substitute into value/slope matching at x=b against the dressed
        # outgoing sum over ttilde_l.
        m[:size, :size] = -jm * (s[None, :] * cb[:, None] + c[None, :] * sb[:, None])
        m[:size, size:] = jm
        m[size:, :size] = -jm * (s[None, :] * (q2 * sb)[:, None] + c[None, :] * cb[:, None])
        m[size:, size:] = jm * ikp[None, :]
    return MatchingMatrix(entries=m, variant=variant, eps=complex(eps), n_sidebands=n_sidebands)


def determinant(matrix: MatchingMatrix) -> complex:
    """Determinant via pivoted LU; only zeros and phase winding are consumed."""
    return complex(np.linalg.det(matrix.entries))


def quasienergy_det(
    params: WellParams, n_sidebands: int, variant: Variant = Variant.BARRIER_DRIVEN
):
    """Closure eps -> det M(eps), the function whose zeros are quasi-energies."""

    def f(eps: ComplexEnergy) -> complex:
        return determinant(assemble(params, eps, n_sidebands, variant))

    return f


def _equilibrated(entries: np.ndarray) -> np.ndarray:
    # positive row scalings leave the zero set (and the null vector at an
    # exact root) unchanged while making the singular-value ratio usable
    # across wildly different row magnitudes
    scale = np.abs(entries).max(axis=1)
    scale[scale == 0.0] = 1.0
    return entries / scale[:, None]


def singular_residual(
    params: WellParams,
    eps: ComplexEnergy,
    n_sidebands: int,
    variant: Variant = Variant.BARRIER_DRIVEN,
) -> float:
    """smallest/largest singular value of the row-equilibrated matrix.

    This is the root-acceptance residual: the determinant itself swings over
    many orders of magnitude along a sweep, the singular-value ratio does not.
    """
    m = _equilibrated(assemble(params, eps, n_sidebands, variant).entries)
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[-1] / sv[0])


RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class FloquetState:
    """A converged quasi-energy root with its coefficient vectors.

    ``A`` are the well amplitudes of the sin(k_n x) expansion (normalized to
    sum |A_n|^2 = 1 with the dominant entry rotated to be real positive);
    ``a_coeff``/``b_coeff`` the barrier exponential coefficients of
    exp(+q_l x)/exp(-q_l x); ``t`` the outgoing amplitudes.  ``A_entire``
    stores k_n * A_n, the coefficient of the threshold-safe basis
    sin(k_n x)/k_n actually used for evaluation; ``u``/``v`` the barrier
    value/slope pair at x = a.
    """

    eps: ComplexEnergy
    n_sidebands: int
    A: np.ndarray
    a_coeff: np.ndarray
    b_coeff: np.ndarray
    t: np.ndarray
    residual: float
    variant: Variant
    A_entire: np.ndarray
    u: np.ndarray
    v: np.ndarray

    @property
    def center(self) -> int:
        return self.n_sidebands


def null_state(
    params: WellParams,
    eps: ComplexEnergy,
    n_sidebands: int,
    variant: Variant = Variant.BARRIER_DRIVEN,
    residual_tol: float = RESIDUAL_TOL,
) -> FloquetState:
    """Extract the coefficient null-vector at a converged root."""
    matrix = assemble(params, eps, n_sidebands, variant)
    ch = build_channels(params, eps, n_sidebands)
    size = 2 * n_sidebands + 1
    c, s, cb, sb = _region_tables(params, ch)
    jm = bessel_coupling_matrix(size, drive_argument(params))

    eq = _equilibrated(matrix.entries)
    _, sv, vh = np.linalg.svd(eq)
    ratio = sv[-1] / sv[0]
    if ratio > residual_tol:
        raise NotARootError(
            f"singular residual {ratio:.3e} above tolerance {residual_tol:.1e} at eps={eps}"
        )
    if size > 0 and len(sv) > 1 and sv[-2] / sv[0] < residual_tol:
        raise DegenerateRootError(
            f"null space dimension > 1 at eps={eps}: "
            f"two smallest singular ratios {sv[-1] / sv[0]:.3e}, {sv[-2] / sv[0]:.3e}"
        )
    x = vh[-1].conj()

    if variant is Variant.BARRIER_DRIVEN:
        u, v = x[:size], x[size:]
        # well amplitudes from the interface-a pair, least squares of
        # A' s_n = (J u)_n and A' c_n = (J v)_n (finite even at k_n = 0)
        r1 = jm @ u
        r2 = jm @ v
        a_entire = (np.conj(s) * r1 + np.conj(c) * r2) / (np.abs(s) ** 2 + np.abs(c) ** 2)
        ttilde = jm @ (u * cb + v * sb)
    else:
        a_entire, ttilde = x[:size], x[size:]
        u = jm @ (a_entire * s)
        v = jm @ (a_entire * c)

    # unbalance the barrier pair back to exponential coefficients
    qa = ch.q * params.a
    half_sum = 0.5 * u
    with np.errstate(divide="ignore", invalid="ignore"):
        half_diff = np.where(np.abs(ch.q) > 1e-12, 0.5 * v / ch.q, 0.0)
    a_coeff = (half_sum + half_diff) * np.exp(-qa)
    b_coeff = (half_sum - half_diff) * np.exp(qa)
    t = ttilde * np.exp(-1j * ch.kprime * params.b)

    with np.errstate(divide="ignore", invalid="ignore"):
        big_a = np.where(np.abs(ch.k) > 1e-12, a_entire / ch.k, np.inf)

    # gauge: sum |A|^2 = 1 with the dominant well amplitude real positive
    finite = np.isfinite(big_a)
    norm = float(np.sqrt(np.sum(np.abs(big_a[finite]) ** 2)))
    if norm == 0.0 or not np.any(finite):
        raise NotARootError(f"null vector has no well amplitude content at eps={eps}")
    j = int(np.argmax(np.where(finite, np.abs(big_a), -1.0)))
    phase = big_a[j] / abs(big_a[j])
    gauge = 1.0 / (norm * phase)
    return FloquetState(
        eps=complex(eps),
        n_sidebands=n_sidebands,
        A=big_a * gauge,
        a_coeff=a_coeff * gauge,
        b_coeff=b_coeff * gauge,
        t=t * gauge,
        residual=float(ratio),
        variant=variant,
        A_entire=a_entire * gauge,
        u=u * gauge,
        v=v * gauge,
    )
