"""Figure rendering for the CLI report path.

Every figure is written next to the delimited output it illustrates; the
CSV/JSON files remain the authoritative record.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .model import WellParams, reduce_to_first_zone
from .observables import SurvivalSeries
from .staticwell import StaticSpectrum
from .sweep import BranchTrace, CrossingEvent, CrossingKind, SweepParameter

_BRANCH_STYLE = [
    {"color": "tab:blue", "ls": "-"},
    {"color": "tab:red", "ls": "--"},
    {"color": "tab:green", "ls": "-."},
    {"color": "tab:purple", "ls": ":"},
]


def render_static_figure(spectrum: StaticSpectrum, params: WellParams, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = np.array([-0.1, 0.0, 0.0, params.a, params.a, params.b, params.b, params.b + 1.5])
    vs = np.array([2.0 * params.v0, 2.0 * params.v0, 0.0, 0.0,
                   params.v0, params.v0, params.v0_prime, params.v0_prime])
    ax.plot(xs, vs / params.v0, color="k", lw=1.5, label="potential")
    for e in spectrum.bound:
        ax.hlines(e / params.v0, 0.0, params.b, color="tab:blue", lw=1.2)
        ax.annotate(f"{e / params.v0:.6f}", (params.b + 0.05, e / params.v0), fontsize=8)
    for z in spectrum.resonances:
        ax.hlines(z.real / params.v0, 0.0, params.b, color="tab:red", ls="--", lw=1.2)
        ax.annotate(
            f"{z.real / params.v0:.6f} {z.imag / params.v0:+.6f}i",
            (params.b + 0.05, z.real / params.v0),
            fontsize=8,
            color="tab:red",
        )
    ax.set_xlabel("x (bohr)")
    ax.set_ylabel("V / V0,  E / V0")
    ax.set_ylim(-0.08, 1.35)
    ax.set_xlim(xs[0], xs[-1] + 1.2)
    ax.set_title("Static spectrum (bound solid, metastable dashed)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(
    traces: list[BranchTrace],
    events: list[CrossingEvent],
    params: WellParams,
    path: str,
    replicas: range = range(-3, 3),
) -> None:
    v0 = params.v0
    fig, (ax_re, ax_im) = plt.subplots(
        2, 1, figsize=(6.4, 7.2), sharex=True, height_ratios=[2, 1]
    )
    sweeping_omega = traces and traces[0].parameter is SweepParameter.OMEGA
    for i, tr in enumerate(traces):
        style = _BRANCH_STYLE[i % len(_BRANCH_STYLE)]
        ps = tr.param_values
        es = tr.eps_values
        if sweeping_omega:
            # faint ladder replicas, heavier zone representative
            for n in replicas:
                ax_re.plot(ps / v0, (es.real + n * ps) / v0, color=style["color"],
                           lw=0.4, alpha=0.25)
            rep = np.array(
                [reduce_to_first_zone(e, tr.omega_at(p))[0].real for p, e in zip(ps, es)]
            )
            ax_re.plot(ps / v0, rep / v0, label=tr.label, lw=1.6, **style)
        else:
            ax_re.plot(ps / v0, es.real / v0, label=tr.label, lw=1.6, **style)
        ax_im.plot(ps / v0, es.imag / v0, lw=1.6, **style)
    if sweeping_omega and traces:
        ps = traces[0].param_values
        ax_re.plot(ps / v0, ps / v0, color="0.4", lw=0.8, label="zone edge")
        ax_re.set_ylim(-0.02, 1.05 * ps.max() / v0)
    seen_kinds = set()
    for ev in events:
        marker = "x" if ev.kind is CrossingKind.DIRECT else "o"
        ax_re.axvline(ev.parameter_value / v0, color="0.7", lw=0.6, zorder=0)
        ax_im.axvline(ev.parameter_value / v0, color="0.7", lw=0.6, zorder=0)
        if ev.kind not in seen_kinds:
            seen_kinds.add(ev.kind)
            ax_re.plot([], [], marker=marker, color="k", ls="none",
                       label=f"{ev.kind.value} crossing")
    xlabel = "omega / V0" if sweeping_omega else "V1 / V0"
    ax_im.set_xlabel(xlabel)
    ax_re.set_ylabel("Re(eps) / V0 (first zone)")
    ax_im.set_ylabel("Im(eps) / V0")
    ax_re.legend(fontsize=8, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_survival_figure(series: SurvivalSeries, params: WellParams, path: str) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(series.times, series.P, color="tab:blue", lw=1.2, label="P(t)")
    ax.semilogy(series.times, series.Pbar, color="tab:red", ls="--", lw=1.2,
                label="coarse-grained Pbar(t)")
    ax.set_xlabel("t (hbar/hartree)")
    ax.set_ylabel("non-decay probability")
    ax.legend(fontsize=8)
    ax.set_title(f"h period-average = {series.h_mean:.6f}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_threshold_figure(
    history: list, transition: float, params: WellParams, path: str
) -> None:
    if not history:
        return
    v0 = params.v0
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    pts = sorted(history, key=lambda item: item[0])
    v1s = np.array([v1 for v1, _ in pts])
    gaps = np.array([ev.gap_re for _, ev in pts])
    kinds = [ev.kind for _, ev in pts]
    for kind, marker, color in (
        (CrossingKind.DIRECT, "x", "tab:blue"),
        (CrossingKind.AVOIDED, "o", "tab:red"),
    ):
        sel = [i for i, k in enumerate(kinds) if k is kind]
        if sel:
            ax.plot(v1s[sel] / v0, gaps[sel] / v0, marker=marker, ls="none",
                    color=color, label=kind.value)
    ax.axvline(transition / v0, color="0.4", lw=0.8, label="transition")
    ax.set_xlabel("V1 / V0")
    ax.set_ylabel("closest-approach gap Re / V0")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
