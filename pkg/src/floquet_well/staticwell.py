"""The undriven well: real bound states and complex Gamow resonances.

Serves two roles: root seeds for the driven solver (branches emanate from
the static energies) and the independent static-limit oracle.  Bound states
come from sign-change bisection of the real-valued static matching
condition on (0, v0_prime); resonances from winding-count location plus
polish in the lower half plane between v0_prime and v0.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi

from .matching import Variant, quasienergy_det, singular_residual, RESIDUAL_TOL
from .model import WellParams
from .rootfind import Box, count_roots_in_box, find_all_in_box, polish

BOUND_GRID_POINTS = 2000
BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class StaticSpectrum:
    bound: list[float]           # strictly increasing, each < v0_prime
    resonances: list[complex]    # Re in (v0_prime, v0), Im < 0

    @property
    def energies(self) -> list[complex]:
        return [complex(e) for e in self.bound] + list(self.resonances)


def default_resonance_box(params: WellParams) -> Box:
    scale = params.v0
    return Box(
        params.v0_prime + 1e-6 * scale,
        params.v0 * (1.0 - 1e-9),
        -0.05 * scale,
        -1e-8 * scale,
    )


def _bisect(f, lo: float, hi: float, flo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < BISECTION_TOL:
            break
    return 0.5 * (lo + hi)


def bound_states(params: WellParams) -> list[float]:
    """Real bound energies on (0, v0_prime) by grid scan + bisection.

    Under the chosen branches the static condition is real-valued on this
    interval, so sign-change detection is valid.
    """
    sp = params.static()
    det = quasienergy_det(sp, 0, Variant.BARRIER_DRIVEN)

    def f(e: float) -> float:
        return det(complex(e, 0.0)).real

    scale = params.v0
    lo = 1e-9 * scale
    hi = params.v0_prime - 1e-9 * scale
    xs = [lo + (hi - lo) * i / (BOUND_GRID_POINTS - 1) for i in range(BOUND_GRID_POINTS)]
    vals = [f(x) for x in xs]
    found: list[float] = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            found.append(xs[i])
        elif vals[i] * vals[i + 1] < 0.0:
            found.append(_bisect(f, xs[i], xs[i + 1], vals[i]))
    # complex polish must return a real root to machine precision
    polished: list[float] = []
    for e in found:
        r = polish(det, complex(e, 0.0))
        if not r.converged:
            polished.append(e)
            continue
        if abs(r.eps.imag) > 1e-12:
            raise RuntimeError(f"bound-state candidate {r.eps} polished off the real axis")
        polished.append(r.eps.real)
    return sorted(polished)


def _infinite_well_seeds(params: WellParams) -> list[float]:
    seeds = []
    n = 1
    while True:
        e = (n * pi) ** 2 / (2.0 * params.mass * params.a**2)
        if e > 1.5 * params.v0:
            break
        if params.v0_prime < e < params.v0:
            seeds.append(e)
        n += 1
    return seeds


def resonances(params: WellParams, search_box: Box | None = None) -> list[complex]:
    """Decaying Gamow roots (Im < 0) in the window between v0_prime and v0.

    Infinite-well estimates feed a fast polish pass; the winding count over
    the search box guards against misses and triggers a full quadrisection
    search when the fast pass comes up short.
    """
    sp = params.static()
    det = quasienergy_det(sp, 0, Variant.BARRIER_DRIVEN)
    box = search_box if search_box is not None else default_resonance_box(params)
    # the only outer-channel branch point of the static problem
    branch_points = [complex(params.v0_prime, 0.0)]

    found: list[complex] = []
    for seed in _infinite_well_seeds(params):
        r = polish(det, complex(seed, -1e-4 * params.v0), within=box)
        if (
            r.converged
            and box.contains(r.eps)
            and singular_residual(sp, r.eps, 0) < RESIDUAL_TOL
            and all(abs(r.eps - other) > 1e-8 for other in found)
        ):
            found.append(r.eps)

    expected = count_roots_in_box(det, box, branch_points=branch_points)
    if expected != len(found):
        results = find_all_in_box(det, box, branch_points=branch_points)
        found = [r.eps for r in results]
    return sorted(found, key=lambda z: z.real)


def solve_static(params: WellParams, search_box: Box | None = None) -> StaticSpectrum:
    """Full static spectrum: bound states plus resonances.

    ``params.v1`` is ignored (treated as 0); an empty spectrum is a valid
    result, not an error.
    """
    return StaticSpectrum(
        bound=bound_states(params),
        resonances=resonances(params, search_box),
    )
