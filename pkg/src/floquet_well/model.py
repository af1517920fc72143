"""Physical parameters, sideband bookkeeping and Floquet-zone arithmetic.

Everything is expressed in atomic units (e = m_e = hbar = 1): energies in
hartree, lengths in bohr, frequencies in hartree/hbar.  The mass is kept as
an explicit parameter (default 1) so the 2m factors stay visible in the
channel formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

ComplexEnergy = complex


class StaticDrivingError(ValueError):
    """Raised when a driven-only quantity is requested for omega = 0."""


@dataclass(frozen=True)
class WellParams:
    """Geometry and energetics of the driven well.

    The potential is an infinite wall at x = 0, a flat well bottom on
    [0, a), a rectangular barrier of height v0 on [a, b] whose height
    oscillates as v0 + v1*cos(omega*t), and a flat shelf v0_prime for
    x > b.  The barrier must stay above the outer shelf at all times,
    which bounds the drive amplitude by v0 - v0_prime.
    """

    a: float
    b: float
    v0: float
    v0_prime: float
    v1: float = 0.0
    omega: float = 0.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.a < self.b:
            raise ValueError(f"need 0 < a < b, got a={self.a}, b={self.b}")
        if not self.v0_prime < self.v0:
            raise ValueError(
                f"need v0_prime < v0, got v0_prime={self.v0_prime}, v0={self.v0}"
            )
        if not 0.0 <= self.v1 < self.v0 - self.v0_prime:
            raise ValueError(
                f"need 0 <= v1 < v0 - v0_prime = {self.v0 - self.v0_prime}, "
                f"got v1={self.v1}"
            )
        if self.v1 > 0.0 and self.omega <= 0.0:
            raise ValueError(f"driven problem (v1={self.v1}) needs omega > 0")
        if self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.mass <= 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")

    def static(self) -> "WellParams":
        """The same well with the drive switched off."""
        return replace(self, v1=0.0)

    def with_(self, **kwargs) -> "WellParams":
        return replace(self, **kwargs)


def alpha(params: WellParams) -> float:
    """Drive strength v1/omega (hbar = 1), the argument of the Bessel dressing."""
    if params.omega <= 0.0:
        raise StaticDrivingError("alpha undefined at omega = 0: static problem, no driving")
    return params.v1 / params.omega


def drive_argument(params: WellParams) -> float:
    """Like :func:`alpha` but defined (as 0) in the static limit v1 = 0."""
    if params.v1 == 0.0:
        return 0.0
    return alpha(params)


def reduce_to_first_zone(eps: ComplexEnergy, omega: float) -> tuple[ComplexEnergy, int]:
    """Map a quasi-energy to its zone representative.

    Returns (eps0, n) with Re(eps0) in [0, omega), Im(eps0) = Im(eps) and
    Re(eps) = Re(eps0) + n*omega.  Only the real part is wrapped; the
    imaginary part is shared by all ladder replicas of a state.
    """
    if omega <= 0.0:
        raise StaticDrivingError("zone reduction needs omega > 0")
    eps = complex(eps)
    n = math.floor(eps.real / omega)
    re0 = eps.real - n * omega
    # float edges: re0 may land exactly on omega or just below 0
    if re0 >= omega:
        n += 1
        re0 -= omega
    if re0 < 0.0:
        n -= 1
        re0 += omega
    return complex(re0, eps.imag), n


def required_sidebands(params: WellParams) -> int:
    """Smallest admissible cutoff, ceil(v1/omega)."""
    return math.ceil(drive_argument(params))


def default_sidebands(params: WellParams) -> int:
    """Default cutoff: the admissible minimum plus one guard sideband, never below 2."""
    return max(2, required_sidebands(params) + 1)


def validate_sidebands(n: int, params: WellParams) -> int:
    if n < 0:
        raise ValueError(f"sideband cutoff must be >= 0, got {n}")
    if n < required_sidebands(params):
        raise ValueError(
            f"sideband cutoff {n} below ceil(v1/omega) = {required_sidebands(params)}"
        )
    return n
