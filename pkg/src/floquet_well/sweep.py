"""Continuation engine: quasi-energy branches under a swept parameter,
crossing detection and classification, and the amplitude threshold scan.

Branches are tracked in raw (unreduced) quasi-energy by predictor-corrector
continuation; zone reduction is applied only when comparing two branches.
Identity through events then comes out automatically: at a direct crossing
the two complex roots stay apart in the imaginary direction (the trace
follows imaginary-part continuity), at an avoided crossing they stay apart
in the real direction (real-part continuity), matching the physics of level
repulsion with linewidth interchange.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .matching import Variant, quasienergy_det, singular_residual, RESIDUAL_TOL
from .model import ComplexEnergy, WellParams, default_sidebands, reduce_to_first_zone
from .rootfind import polish

EVENT_WINDOW_FRACTION = 0.05     # closest-approach gap below this times omega -> event
DIRECT_GAP_FRACTION = 1e-4       # gap_re below this times v0 -> direct crossing
DEFAULT_GRID_POINTS = 200
REFINE_FACTOR = 10


class SweepParameter(enum.Enum):
    OMEGA = "omega"
    V1 = "v1"


class CrossingKind(enum.Enum):
    DIRECT = "direct"
    AVOIDED = "avoided"


class TraceError(RuntimeError):
    pass


class ThresholdScanError(RuntimeError):
    pass


@dataclass(frozen=True)
class TracePoint:
    param: float
    eps: ComplexEnergy
    residual: float


@dataclass
class BranchTrace:
    label: str
    parameter: SweepParameter
    base_params: WellParams
    points: list[TracePoint] = field(default_factory=list)
    breakdown: float | None = None    # parameter value where the step underflowed

    def params_at(self, value: float) -> WellParams:
        if self.parameter is SweepParameter.OMEGA:
            return self.base_params.with_(omega=value)
        return self.base_params.with_(v1=value)

    def omega_at(self, value: float) -> float:
        return value if self.parameter is SweepParameter.OMEGA else self.base_params.omega

    @property
    def param_values(self) -> np.ndarray:
        return np.array([p.param for p in self.points])

    @property
    def eps_values(self) -> np.ndarray:
        return np.array([p.eps for p in self.points], dtype=complex)

    def merged_with(self, extra: list[TracePoint]) -> "BranchTrace":
        """New trace with extra points spliced in (used by event refinement)."""
        seen = {p.param for p in self.points}
        pts = list(self.points) + [p for p in extra if p.param not in seen]
        pts.sort(key=lambda p: p.param)
        return BranchTrace(self.label, self.parameter, self.base_params, pts, self.breakdown)


@dataclass(frozen=True)
class CrossingEvent:
    kind: CrossingKind
    parameter_value: float
    gap_re: float
    gap_im: float
    branches: tuple[str, str]
    im_interchanged: bool


def seed_driven_root(
    params: WellParams,
    static_eps: ComplexEnergy,
    n_sidebands: int | None = None,
    steps: int = 4,
) -> ComplexEnergy:
    """Continue a static energy to the driven root at params.v1 by ramping
    the amplitude from zero; far more robust than polishing cold."""
    if n_sidebands is None:
        n_sidebands = default_sidebands(params)
    eps = complex(static_eps)
    if params.v1 == 0.0:
        steps = 1
    for frac in np.linspace(1.0 / steps, 1.0, steps):
        p = params.with_(v1=frac * params.v1)
        r = polish(quasienergy_det(p, n_sidebands), eps)
        if not r.converged:
            raise TraceError(f"seeding failed at v1={p.v1} from eps={eps}")
        eps = r.eps
    return eps


def trace_branch(
    params: WellParams,
    seed: ComplexEnergy,
    p_range: tuple[float, float],
    parameter: SweepParameter = SweepParameter.OMEGA,
    base_points: int = DEFAULT_GRID_POINTS,
    label: str = "",
    n_sidebands: int | None = None,
    residual_tol: float = RESIDUAL_TOL,
) -> BranchTrace:
    """Predictor-corrector continuation of one root over ``p_range``.

    The seed must be (close to) a converged root at p_range[0].  Linear
    extrapolation from the last two accepted points predicts each new root;
    the Muller/Newton polish corrects.  The step halves on corrector failure
    or on an implausible jump and doubles back (up to the base grid step)
    after four easy successes; the sideband cutoff is re-derived from the
    truncation rule at every point unless pinned by ``n_sidebands``.
    """
    p0, p1 = p_range
    if p0 == p1:
        raise ValueError("empty sweep range")
    trace = BranchTrace(label=label, parameter=parameter, base_params=params)
    direction = 1.0 if p1 > p0 else -1.0
    span = abs(p1 - p0)
    h_base = span / max(base_points - 1, 1)
    h_min = 1e-6 * span

    def solve_at(p: float, guess: ComplexEnergy) -> TracePoint | None:
        pp = trace.params_at(p)
        nn = n_sidebands if n_sidebands is not None else default_sidebands(pp)
        r = polish(quasienergy_det(pp, nn), guess)
        if not r.converged:
            return None
        resid = singular_residual(pp, r.eps, nn)
        if resid > residual_tol:
            return None
        return TracePoint(p, r.eps, residual=resid)

    first = solve_at(p0, seed)
    if first is None:
        raise TraceError(f"{label or 'trace'}: seed did not converge at {parameter.value}={p0}")
    trace.points.append(first)

    jump_floor = 0.003 * params.v0
    h = h_base
    p = p0
    easy = 0
    while direction * (p1 - p) > 1e-12 * span:
        step = min(h, abs(p1 - p))
        p_new = p + direction * step
        pts = trace.points
        if len(pts) >= 2 and pts[-1].param != pts[-2].param:
            slope = (pts[-1].eps - pts[-2].eps) / (pts[-1].param - pts[-2].param)
            pred = pts[-1].eps + slope * (p_new - pts[-1].param)
        else:
            pred = pts[-1].eps
        result = solve_at(p_new, pred)
        ok = result is not None and abs(result.eps - pred) <= max(
            jump_floor, 4.0 * abs(pred - pts[-1].eps)
        )
        if ok:
            trace.points.append(result)
            p = p_new
            easy += 1
            if easy >= 4 and h < h_base:
                h = min(h_base, 2.0 * h)
                easy = 0
        else:
            easy = 0
            h *= 0.5
            if h < h_min:
                trace.breakdown = p
                break
    return trace


def _signed_zone_gap(re_a: float, re_b: float, omega: float) -> float:
    """Signed distance between zone representatives on the circle of width omega."""
    d = (re_a - re_b) % omega
    if d > 0.5 * omega:
        d -= omega
    return d


def _interp(xs: np.ndarray, ys: np.ndarray, x: float) -> complex:
    re = np.interp(x, xs, ys.real)
    im = np.interp(x, xs, ys.imag)
    return complex(re, im)


def classify_crossings(
    trace_a: BranchTrace,
    trace_b: BranchTrace,
    event_window: float = EVENT_WINDOW_FRACTION,
    direct_fraction: float = DIRECT_GAP_FRACTION,
) -> list[CrossingEvent]:
    """Detect and classify close approaches between two branches.

    Both traces are linearly re-interpolated onto the union grid of their
    overlapping parameter range (for comparison only).  Local minima of the
    zone-reduced real gap below ``event_window``*omega emit events; a signed
    gap that changes sign marks a genuine intersection of the real parts
    (direct crossing), otherwise the minimum is refined parabolically
    (avoided).  The imaginary-part interchange is read off the ordering on
    either side of the closest approach.
    """
    if trace_a.parameter is not trace_b.parameter:
        raise TraceError("traces sweep different parameters")
    pa, pb = trace_a.param_values, trace_b.param_values
    lo = max(pa.min(), pb.min())
    hi = min(pa.max(), pb.max())
    if lo >= hi:
        raise TraceError(
            f"traces cover disjoint parameter ranges [{pa.min()}, {pa.max()}] "
            f"and [{pb.min()}, {pb.max()}]"
        )
    grid = np.unique(np.concatenate([pa, pb]))
    grid = grid[(grid >= lo) & (grid <= hi)]
    ea = np.array([_interp(pa, trace_a.eps_values, p) for p in grid])
    eb = np.array([_interp(pb, trace_b.eps_values, p) for p in grid])
    omegas = np.array([trace_a.omega_at(p) for p in grid])
    signed = np.array(
        [_signed_zone_gap(a.real, b.real, w) for a, b, w in zip(ea, eb, omegas)]
    )
    gaps = np.abs(signed)
    v0 = trace_a.base_params.v0

    events: list[CrossingEvent] = []
    for i in range(1, len(grid) - 1):
        if not (gaps[i] <= gaps[i - 1] and gaps[i] <= gaps[i + 1]):
            continue
        if gaps[i] >= event_window * omegas[i]:
            continue
        if events and abs(grid[i] - events[-1].parameter_value) < 4.0 * (grid[i] - grid[i - 1]):
            continue  # same feature seen twice on adjacent grid points
        # genuine intersection if the signed gap flips within the dip
        j0, j1 = max(0, i - 2), min(len(grid) - 1, i + 2)
        sign_change = None
        for j in range(j0, j1):
            if signed[j] == 0.0:
                sign_change = (j, j)
                break
            if signed[j] * signed[j + 1] < 0.0:
                sign_change = (j, j + 1)
                break
        if sign_change is not None:
            ja, jb = sign_change
            if ja == jb:
                p_star, gap_re = grid[ja], 0.0
            else:
                frac = signed[ja] / (signed[ja] - signed[jb])
                p_star = grid[ja] + frac * (grid[jb] - grid[ja])
                gap_re = 0.0
        else:
            p_star, gap_re = _parabolic_min(grid, gaps, i)
        # imaginary ordering on both flanks of the approach
        k = 4
        i_before, i_after = max(0, i - k), min(len(grid) - 1, i + k)
        d_before = ea[i_before].imag - eb[i_before].imag
        d_after = ea[i_after].imag - eb[i_after].imag
        interchanged = d_before * d_after < 0.0
        gap_im = abs(_interp(grid, ea, p_star).imag - _interp(grid, eb, p_star).imag)
        kind = CrossingKind.DIRECT if gap_re < direct_fraction * v0 else CrossingKind.AVOIDED
        events.append(
            CrossingEvent(
                kind=kind,
                parameter_value=float(p_star),
                gap_re=float(gap_re),
                gap_im=float(gap_im),
                branches=(trace_a.label, trace_b.label),
                im_interchanged=bool(interchanged),
            )
        )
    return events


def _parabolic_min(xs: np.ndarray, ys: np.ndarray, i: int) -> tuple[float, float]:
    x0, x1, x2 = xs[i - 1], xs[i], xs[i + 1]
    y0, y1, y2 = ys[i - 1], ys[i], ys[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    if denom == 0.0:
        return float(x1), float(y1)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    if a <= 0.0:
        return float(x1), float(y1)
    xm = -b / (2.0 * a)
    if not (min(x0, x2) <= xm <= max(x0, x2)):
        return float(x1), float(y1)
    c = y1 - a * x1**2 - b * x1
    return float(xm), float(max(a * xm**2 + b * xm + c, 0.0))


def run_sweep(
    params: WellParams,
    seeds: dict[str, ComplexEnergy],
    p_range: tuple[float, float],
    parameter: SweepParameter = SweepParameter.OMEGA,
    base_points: int = DEFAULT_GRID_POINTS,
    n_sidebands: int | None = None,
    refine: int = REFINE_FACTOR,
) -> tuple[list[BranchTrace], list[CrossingEvent]]:
    """Trace every seeded branch, then refine near detected events.

    ``seeds`` maps branch labels to converged roots at p_range[0].  After a
    first pass on the base grid, each detected event gets its neighborhood
    re-traced at ``refine`` times the density and the classification is
    repeated on the merged traces.
    """
    traces = [
        trace_branch(
            params, seed, p_range, parameter,
            base_points=base_points, label=label, n_sidebands=n_sidebands,
        )
        for label, seed in seeds.items()
    ]
    events = _classify_all(traces)
    if refine > 1 and events:
        h = abs(p_range[1] - p_range[0]) / max(base_points - 1, 1)
        traces = [_refine_near_events(t, events, h, refine, n_sidebands) for t in traces]
        events = _classify_all(traces)
    return traces, events


def _classify_all(traces: list[BranchTrace]) -> list[CrossingEvent]:
    events: list[CrossingEvent] = []
    for i in range(len(traces)):
        for j in range(i + 1, len(traces)):
            events.extend(classify_crossings(traces[i], traces[j]))
    return sorted(events, key=lambda e: e.parameter_value)


def _refine_near_events(
    trace: BranchTrace,
    events: list[CrossingEvent],
    base_step: float,
    refine: int,
    n_sidebands: int | None,
) -> BranchTrace:
    pa = trace.param_values
    out = trace
    for ev in events:
        w_lo = max(pa.min(), ev.parameter_value - 4.0 * base_step)
        w_hi = min(pa.max(), ev.parameter_value + 4.0 * base_step)
        if w_hi - w_lo <= 0.0:
            continue
        i_seed = int(np.searchsorted(out.param_values, w_lo))
        i_seed = min(max(i_seed, 0), len(out.points) - 1)
        seed_pt = out.points[i_seed]
        dense = trace_branch(
            trace.base_params,
            seed_pt.eps,
            (seed_pt.param, w_hi) if seed_pt.param < w_hi else (seed_pt.param, w_lo),
            trace.parameter,
            base_points=int(8 * refine) + 1,
            label=trace.label,
            n_sidebands=n_sidebands,
        )
        out = out.merged_with(dense.points)
    return out


def minimum_zone_gap(
    trace_a: BranchTrace, trace_b: BranchTrace, window: tuple[float, float]
) -> float:
    """Smallest zone-reduced real gap between two traces inside a window."""
    pa, pb = trace_a.param_values, trace_b.param_values
    grid = np.unique(np.concatenate([pa, pb]))
    grid = grid[(grid >= window[0]) & (grid <= window[1])]
    if len(grid) == 0:
        raise TraceError(f"no trace points inside window {window}")
    best = math.inf
    for p in grid:
        ea = _interp(pa, trace_a.eps_values, p)
        eb = _interp(pb, trace_b.eps_values, p)
        best = min(best, abs(_signed_zone_gap(ea.real, eb.real, trace_a.omega_at(p))))
    return best


def threshold_scan(
    params: WellParams,
    omega_window: tuple[float, float],
    v1_range: tuple[float, float],
    static_seeds: dict[str, ComplexEnergy],
    resolution: float | None = None,
    points: int = 80,
    history: list | None = None,
) -> float:
    """Amplitude at which the crossing inside ``omega_window`` changes kind.

    Bisection on v1 over the classified kind; the window must contain
    exactly one crossing for every amplitude probed.  Returns the transition
    amplitude to ``resolution`` (default 0.002*v0).
    """
    if resolution is None:
        resolution = 0.002 * params.v0

    def event_at(v1: float) -> CrossingEvent:
        p = params.with_(v1=v1, omega=omega_window[0])
        seeds = {
            label: seed_driven_root(p, eps0) for label, eps0 in static_seeds.items()
        }
        _, events = run_sweep(
            p, seeds, omega_window, SweepParameter.OMEGA, base_points=points
        )
        if len(events) != 1:
            raise ThresholdScanError(
                f"expected exactly one crossing in omega window {omega_window} "
                f"at v1={v1}, found {len(events)}"
            )
        if history is not None:
            history.append((v1, events[0]))
        return events[0]

    lo, hi = v1_range
    kind_lo, kind_hi = event_at(lo).kind, event_at(hi).kind
    if kind_lo == kind_hi:
        raise ThresholdScanError(
            f"no kind change over v1 range {v1_range}: both endpoints {kind_lo.value}"
        )
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if event_at(mid).kind == kind_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def zone_representative(eps: ComplexEnergy, omega: float) -> tuple[ComplexEnergy, int]:
    """Convenience re-export of the zone reduction used for trace output."""
    return reduce_to_first_zone(eps, omega)
