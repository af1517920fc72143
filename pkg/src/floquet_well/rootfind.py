"""Complex root finding on analytic functions: local polish, winding-number
counting over rectangles, and exhaustive location by quadrisection.

The polish is Muller's method (derivative-free, robust when zeros crowd
together near an avoided crossing) finished with a few central-difference
Newton steps.  Box counting accumulates the boundary phase with adaptive
edge refinement so each increment stays below pi/2; callers are responsible
for keeping branch points of f out of the box (pass them via
``branch_points`` to get a hard check).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

ComplexFn = Callable[[complex], complex]

STEP_TOL = 1e-10
MAX_ITERATIONS = 100
DEDUPE_DISTANCE = 1e-8
_BOUNDARY_FLOOR = 1e-13
_MAX_PHASE_DEPTH = 48


class BranchPointInBoxError(ValueError):
    """A listed branch point lies inside the box; split the box first."""


class BoundaryRootError(RuntimeError):
    """A root sits on (or hugs) the box boundary and inflation did not clear it."""


class RootCountError(RuntimeError):
    """Winding count and polished roots disagree; reports the offending box."""


@dataclass(frozen=True)
class RootResult:
    eps: complex
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class Box:
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate box {self}")

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    @property
    def diameter(self) -> float:
        return math.hypot(self.re_max - self.re_min, self.im_max - self.im_min)

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )

    def inflate(self, factor: float) -> "Box":
        c = self.center
        hw = 0.5 * (self.re_max - self.re_min) * factor
        hh = 0.5 * (self.im_max - self.im_min) * factor
        return Box(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def quadrants(self) -> list["Box"]:
        c = self.center
        return [
            Box(self.re_min, c.real, self.im_min, c.imag),
            Box(c.real, self.re_max, self.im_min, c.imag),
            Box(self.re_min, c.real, c.imag, self.im_max),
            Box(c.real, self.re_max, c.imag, self.im_max),
        ]

    def corners(self) -> list[complex]:
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]


def polish(
    f: ComplexFn,
    seed: complex,
    step_tol: float = STEP_TOL,
    max_iterations: int = MAX_ITERATIONS,
    within: Box | None = None,
) -> RootResult:
    """Muller iteration from ``seed`` with a Newton finishing step.

    Divergence (leaving ``within``, or wandering far from the seed when no
    box is given) yields a non-converged result, never an exception.
    """
    seed = complex(seed)
    scale = max(1.0, abs(seed))
    escape = 1e3 * scale

    def diverged(z: complex) -> bool:
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return True
        if within is not None:
            return not within.inflate(3.0).contains(z)
        return abs(z - seed) > escape

    h = 1e-4 * scale
    xs = [seed - h, seed + h, seed]
    fs = [f(x) for x in xs]
    iterations = 0
    converged = False
    for iterations in range(1, max_iterations + 1):
        x0, x1, x2 = xs
        f0, f1, f2 = fs
        if f2 == 0.0:
            converged = True
            break
        denom10 = x1 - x0
        if denom10 == 0.0:
            break
        q = (x2 - x1) / denom10
        aa = q * f2 - q * (1 + q) * f1 + q * q * f0
        bb = (2 * q + 1) * f2 - (1 + q) ** 2 * f1 + q * q * f0
        cc = (1 + q) * f2
        disc = cmath.sqrt(bb * bb - 4 * aa * cc)
        den = bb + disc if abs(bb + disc) >= abs(bb - disc) else bb - disc
        if den == 0.0:
            break
        step = -(x2 - x1) * (2 * cc) / den
        xn = x2 + step
        if diverged(xn):
            return RootResult(eps=x2, residual=abs(f2), iterations=iterations, converged=False)
        xs = [x1, x2, xn]
        fs = [f1, f2, f(xn)]
        if abs(step) < step_tol:
            converged = True
            break

    z, fz = xs[-1], fs[-1]
    if converged:
        # central-difference Newton to squeeze out the last digits
        for _ in range(3):
            hn = 1e-7 * max(1.0, abs(z))
            dfdz = (f(z + hn) - f(z - hn)) / (2.0 * hn)
            if dfdz == 0.0:
                break
            step = -fz / dfdz
            zn = z + step
            if diverged(zn):
                break
            fn = f(zn)
            if abs(fn) > abs(fz):
                break
            z, fz = zn, fn
            if abs(step) < 0.1 * step_tol:
                break
    return RootResult(eps=z, residual=abs(fz), iterations=iterations, converged=converged)


def _boundary_samples(box: Box, per_edge: int) -> list[complex]:
    pts: list[complex] = []
    corners = box.corners()
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        for j in range(per_edge):
            pts.append(z0 + (z1 - z0) * (j / per_edge))
    pts.append(corners[0])
    return pts


def _phase_sum(
    f: ComplexFn, z0: complex, f0: complex, z1: complex, f1: complex, depth: int, floor: float
) -> float:
    if abs(f0) < floor or abs(f1) < floor:
        raise BoundaryRootError(f"|f| below boundary floor near {z0}")
    dphi = cmath.phase(f1 / f0)
    if abs(dphi) < 0.5 * math.pi:
        return dphi
    if depth >= _MAX_PHASE_DEPTH:
        raise BoundaryRootError(f"phase step unresolved between {z0} and {z1}")
    zm = 0.5 * (z0 + z1)
    fm = f(zm)
    return _phase_sum(f, z0, f0, zm, fm, depth + 1, floor) + _phase_sum(
        f, zm, fm, z1, f1, depth + 1, floor
    )


def count_roots_in_box(
    f: ComplexFn,
    box: Box,
    samples_per_edge: int = 32,
    branch_points: Sequence[complex] = (),
) -> int:
    """Winding number of f along the box boundary (= enclosed root count).

    A root hugging the boundary triggers a 1% inflation and retry, at most
    five times.  Branch points of f strictly inside the box are a caller
    error: the box must be split first.
    """
    for bp in branch_points:
        bp = complex(bp)
        if box.re_min < bp.real < box.re_max and box.im_min < bp.imag < box.im_max:
            raise BranchPointInBoxError(
                f"branch point {bp} inside {box}; split the box along Re = {bp.real}"
            )
    current = box
    last_error: Exception | None = None
    for _attempt in range(6):
        pts = _boundary_samples(current, samples_per_edge)
        vals = [f(z) for z in pts]
        vmax = max(abs(v) for v in vals)
        if vmax == 0.0:
            raise BoundaryRootError(f"f vanishes identically on boundary samples of {current}")
        floor = _BOUNDARY_FLOOR * vmax
        if min(abs(v) for v in vals) < floor:
            current = current.inflate(1.01)
            continue
        try:
            total = 0.0
            for i in range(len(pts) - 1):
                total += _phase_sum(f, pts[i], vals[i], pts[i + 1], vals[i + 1], 0, floor)
        except BoundaryRootError as exc:
            last_error = exc
            current = current.inflate(1.01)
            continue
        winding = total / (2.0 * math.pi)
        if abs(winding - round(winding)) > 0.25:
            raise BoundaryRootError(
                f"non-integer winding {winding:.3f} on {current}; f may not be analytic here"
            )
        return int(round(winding))
    raise BoundaryRootError(
        f"boundary root unresolved after 5 inflations of {box}: {last_error}"
    )


def find_all_in_box(
    f: ComplexFn,
    box: Box,
    samples_per_edge: int = 32,
    branch_points: Sequence[complex] = (),
    min_box: float | None = None,
) -> list[RootResult]:
    """All roots inside ``box`` by recursive quadrisection + polish.

    Each sub-box is split until it holds at most one root by winding count,
    then polished from its center; results are deduplicated at
    ``DEDUPE_DISTANCE``.  A lost root (count and polish disagree) raises
    :class:`RootCountError` naming the sub-box.
    """
    if min_box is None:
        min_box = 1e-9 * max(1.0, box.diameter)
    expected = count_roots_in_box(f, box, samples_per_edge, branch_points)
    roots = _find_recursive(f, box, samples_per_edge, branch_points, min_box, expected)
    unique = _dedupe(roots)
    inside = [r for r in unique if box.inflate(1.05).contains(r.eps)]
    if len(inside) != expected:
        raise RootCountError(
            f"box {box}: winding count {expected} but {len(inside)} polished roots"
        )
    return sorted(inside, key=lambda r: (r.eps.real, r.eps.imag))


def _find_recursive(
    f: ComplexFn,
    box: Box,
    samples_per_edge: int,
    branch_points: Sequence[complex],
    min_box: float,
    count: int | None = None,
) -> list[RootResult]:
    if count is None:
        count = count_roots_in_box(f, box, samples_per_edge, branch_points)
    if count == 0:
        return []
    if count == 1:
        result = polish(f, box.center, within=box.inflate(4.0))
        if result.converged and box.inflate(1.1).contains(result.eps):
            return [result]
        # center polish escaped or failed: go one level deeper
    if box.diameter < min_box:
        raise RootCountError(
            f"sub-box {box} below minimum size with {count} unresolved root(s)"
        )
    roots: list[RootResult] = []
    for quad in box.quadrants():
        roots.extend(_find_recursive(f, quad, samples_per_edge, branch_points, min_box))
    return roots


def _dedupe(roots: list[RootResult]) -> list[RootResult]:
    unique: list[RootResult] = []
    for r in sorted(roots, key=lambda r: r.residual):
        if all(abs(r.eps - kept.eps) > DEDUPE_DISTANCE for kept in unique):
            unique.append(r)
    return unique


def split_box_at_verticals(box: Box, re_values: Sequence[float], gap: float = 0.0) -> list[Box]:
    """Cut ``box`` along vertical lines Re = value (branch-cut avoidance).

    A small ``gap`` leaves an excluded strip around each line so box edges
    never sit exactly on a cut.
    """
    cuts = sorted(v for v in re_values if box.re_min < v < box.re_max)
    if not cuts:
        return [box]
    boxes: list[Box] = []
    lo = box.re_min
    for v in cuts:
        if v - gap > lo:
            boxes.append(Box(lo, v - gap, box.im_min, box.im_max))
        lo = v + gap
    if box.re_max > lo:
        boxes.append(Box(lo, box.re_max, box.im_min, box.im_max))
    return boxes
