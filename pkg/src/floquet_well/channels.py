"""Per-sideband wavenumber tables for a candidate quasi-energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ComplexEnergy, WellParams, drive_argument, validate_sidebands
from .special import BranchPolicy, branch_sqrt_array


@dataclass(frozen=True)
class ChannelSet:
    """Wavenumbers of the three spatial regions for sidebands n in [-N, N].

    k[i]      region-I wavenumber,   k_n^2      = 2m(eps + n*omega)
    q[i]      barrier decay constant, q_n^2     = 2m(v0 - eps - n*omega)
    kprime[i] outer wavenumber,      k'_n^2     = 2m(eps + n*omega - v0_prime)

    with i = n + N.  k and kprime are on the outgoing-right branch, q on the
    principal branch (the matching matrix only ever uses q^2, cosh(q d) and
    sinh(q d)/q, so the q sign never matters).
    """

    eps: ComplexEnergy
    n_sidebands: int
    k: np.ndarray
    q: np.ndarray
    kprime: np.ndarray
    alpha: float

    def index(self, n: int) -> int:
        return n + self.n_sidebands

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.n_sidebands, self.n_sidebands + 1)


def build_channels(params: WellParams, eps: ComplexEnergy, n_sidebands: int) -> ChannelSet:
    """Evaluate all channel wavenumbers at ``eps``; no caching, pure function."""
    validate_sidebands(n_sidebands, params)
    eps = complex(eps)
    two_m = 2.0 * params.mass
    shifts = np.arange(-n_sidebands, n_sidebands + 1) * params.omega
    k = branch_sqrt_array(two_m * (eps + shifts), BranchPolicy.OUTGOING_RIGHT)
    q = branch_sqrt_array(two_m * (params.v0 - eps - shifts), BranchPolicy.PRINCIPAL)
    kprime = branch_sqrt_array(
        two_m * (eps + shifts - params.v0_prime), BranchPolicy.OUTGOING_RIGHT
    )
    return ChannelSet(
        eps=eps,
        n_sidebands=n_sidebands,
        k=k,
        q=q,
        kprime=kprime,
        alpha=drive_argument(params),
    )
