"""Command-line front end: config parsing, subcommands, deterministic output.

Numeric series go to CSV (comma separated, header row, LF endings, floats
with 17 significant digits), structured crossing events to JSON, and each
report is rendered to a PNG figure alongside the delimited output unless
``--no-figures`` is given.

Exit codes: 0 success, 1 usage/config error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .matching import Variant, null_state, quasienergy_det, singular_residual
from .model import WellParams, default_sidebands, reduce_to_first_zone
from .observables import survival
from .rootfind import polish
from .staticwell import solve_static
from .sweep import (
    SweepParameter,
    run_sweep,
    seed_driven_root,
    threshold_scan,
)

PAPER_DEFAULTS = {"a": 1.0, "b": 2.0, "v0": 15.0, "v0_prime": 7.5, "mass": 1.0}

_FLOAT_KEYS = {
    "a", "b", "v0", "v0_prime", "v1", "omega", "mass",
    "start", "stop", "seed_re", "seed_im", "t_max", "resolution",
    "omega_window_lo", "omega_window_hi", "v1_lo", "v1_hi",
}
_INT_KEYS = {"n_sidebands", "points", "t_points"}
_STR_KEYS = {"variant", "param", "out_dir"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS


class ConfigError(ValueError):
    """Bad config file or flag combination; maps to exit code 1."""


class Command(enum.Enum):
    STATIC = "static"
    SOLVE = "solve"
    SWEEP = "sweep"
    THRESHOLD = "threshold"
    SURVIVAL = "survival"


@dataclass
class RunConfig:
    command: Command
    params: WellParams
    out_dir: str = "."
    figures: bool = True
    n_sidebands: int | None = None
    variant: Variant = Variant.BARRIER_DRIVEN
    options: dict = field(default_factory=dict)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(c) if isinstance(c, float) else str(c) for c in row) + "\n")


def _write_json(path: str, payload) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_energies_csv(path: str) -> list[complex]:
    """Re-read any CSV written here that carries re_eps/im_eps columns."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        try:
            i_re, i_im = header.index("re_eps"), header.index("im_eps")
        except ValueError as exc:
            raise ConfigError(f"{path}: no re_eps/im_eps columns") from exc
        out = []
        for line in fh:
            cells = line.strip().split(",")
            out.append(complex(float(cells[i_re]), float(cells[i_im])))
    return out


def parse_kv_file(path: str) -> dict:
    """Flat ``key = value`` config, one per line, ``#`` comments."""
    values: dict = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _ALL_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                if key in _FLOAT_KEYS:
                    values[key] = float(val)
                elif key in _INT_KEYS:
                    values[key] = int(val)
                else:
                    values[key] = val
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; route them through
    # ConfigError so usage problems map to exit code 1 instead
    def error(self, message: str):  # noqa: A003 - argparse API
        raise ConfigError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value config file")
    common.add_argument("--paper-defaults", action="store_true",
                        help="start from the bundled reference well "
                             "(a=1, b=2, v0=15, v0_prime=7.5, mass=1)")
    for key in ("a", "b", "v0", "v0-prime", "v1", "omega", "mass"):
        common.add_argument(f"--{key}", type=float, default=None)
    common.add_argument("--n-sidebands", type=int, default=None,
                        help="pin the sideband cutoff (default: rule max(2, ceil(v1/omega)+1))")
    common.add_argument("--variant", choices=["barrier", "bottom"], default=None)
    common.add_argument("--out-dir", default=None)
    common.add_argument("--no-figures", action="store_true")

    parser = _Parser(prog="floquet-well",
                     description="Quasi-energy solver for a leaky square well "
                                 "with a harmonically driven barrier")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("static", parents=[common],
                   help="static spectrum: bound states and metastable resonances")

    p_solve = sub.add_parser("solve", parents=[common],
                             help="polish a single quasi-energy root from a seed")
    p_solve.add_argument("--seed-re", type=float, default=None)
    p_solve.add_argument("--seed-im", type=float, default=None)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="trace quasi-energy branches over omega or v1")
    p_sweep.add_argument("--param", choices=["omega", "v1"], default=None)
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--points", type=int, default=None)

    p_thr = sub.add_parser("threshold", parents=[common],
                           help="drive amplitude where a crossing changes kind")
    p_thr.add_argument("--omega-window", type=float, nargs=2, default=None,
                       metavar=("LO", "HI"))
    p_thr.add_argument("--v1-range", type=float, nargs=2, default=None,
                       metavar=("LO", "HI"))
    p_thr.add_argument("--resolution", type=float, default=None)

    p_sur = sub.add_parser("survival", parents=[common],
                           help="non-decay probability of one Floquet state")
    p_sur.add_argument("--seed-re", type=float, default=None)
    p_sur.add_argument("--seed-im", type=float, default=None)
    p_sur.add_argument("--t-max", type=float, default=None)
    p_sur.add_argument("--t-points", type=int, default=None)
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Merge paper defaults, config file and flags (flags win) into a RunConfig."""
    ns = _build_parser().parse_args(argv)
    values: dict = {}
    if ns.paper_defaults:
        values.update(PAPER_DEFAULTS)
    if ns.config:
        values.update(parse_kv_file(ns.config))
    for key in _ALL_KEYS:
        flag = getattr(ns, key, None)
        if flag is not None:
            values[key] = flag
    if getattr(ns, "omega_window", None) is not None:
        values["omega_window_lo"], values["omega_window_hi"] = ns.omega_window
    if getattr(ns, "v1_range", None) is not None:
        values["v1_lo"], values["v1_hi"] = ns.v1_range

    missing = [k for k in ("a", "b", "v0", "v0_prime") if k not in values]
    if missing:
        raise ConfigError(
            f"missing well parameters: {', '.join(missing)} "
            f"(set them via --config, flags, or --paper-defaults)"
        )
    # range/seed presence checks come before the physical invariants so the
    # message names the actually missing option
    if ns.command == "sweep" and ("start" not in values or "stop" not in values):
        raise ConfigError("sweep range required: set --start and --stop")
    if ns.command == "threshold":
        for key, flag in (("omega_window_lo", "--omega-window"), ("v1_lo", "--v1-range")):
            if key not in values:
                raise ConfigError(f"threshold requires {flag}")
    # a sweep over omega / a threshold scan supplies omega from its range
    if "omega" not in values:
        if ns.command == "sweep" and values.get("param", "omega") == "omega":
            values["omega"] = values.get("start", 0.0)
        elif ns.command == "threshold":
            values["omega"] = values.get("omega_window_lo", 0.0)
    try:
        params = WellParams(
            a=values["a"],
            b=values["b"],
            v0=values["v0"],
            v0_prime=values["v0_prime"],
            v1=values.get("v1", 0.0),
            omega=values.get("omega", 0.0),
            mass=values.get("mass", 1.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    command = Command(ns.command)
    variant = Variant.BOTTOM_DRIVEN if values.get("variant") == "bottom" else Variant.BARRIER_DRIVEN
    if values.get("variant") not in (None, "barrier", "bottom"):
        raise ConfigError(f"variant must be 'barrier' or 'bottom', got {values['variant']!r}")

    options = {k: values[k] for k in values
               if k in _ALL_KEYS - {"a", "b", "v0", "v0_prime", "v1", "omega", "mass",
                                    "n_sidebands", "variant", "out_dir"}}
    config = RunConfig(
        command=command,
        params=params,
        out_dir=values.get("out_dir", "."),
        figures=not ns.no_figures,
        n_sidebands=values.get("n_sidebands"),
        variant=variant,
        options=options,
    )
    _validate_command_options(config)
    return config


def _validate_command_options(config: RunConfig) -> None:
    opt = config.options
    if config.command is Command.SWEEP:
        if opt.get("param", "omega") == "v1" and config.params.omega <= 0.0:
            raise ConfigError("sweep over v1 requires omega > 0")
    if config.command in (Command.SOLVE, Command.SURVIVAL):
        if "seed_re" not in opt:
            raise ConfigError(f"{config.command.value} requires --seed-re")


def _sidebands(config: RunConfig, params: WellParams | None = None) -> int:
    if config.n_sidebands is not None:
        return config.n_sidebands
    return default_sidebands(params if params is not None else config.params)


def _static_labels(spectrum) -> dict[str, complex]:
    seeds: dict[str, complex] = {}
    idx = 0
    for e in spectrum.bound:
        seeds[f"from_E{idx}"] = complex(e)
        idx += 1
    for z in spectrum.resonances:
        seeds[f"from_E{idx}"] = z
        idx += 1
    return seeds


def _run_static(config: RunConfig) -> int:
    params = config.params
    spectrum = solve_static(params)
    rows = []
    for e in spectrum.bound:
        rows.append(["bound", float(e), 0.0, e / params.v0, 0.0,
                     singular_residual(params.static(), complex(e), 0)])
    for z in spectrum.resonances:
        rows.append(["resonance", z.real, z.imag, z.real / params.v0, z.imag / params.v0,
                     singular_residual(params.static(), z, 0)])
    path = os.path.join(config.out_dir, "static_spectrum.csv")
    _write_csv(path, ["kind", "re_eps", "im_eps", "re_eps_over_v0", "im_eps_over_v0",
                      "residual"], rows)
    print(f"static: {len(spectrum.bound)} bound state(s), "
          f"{len(spectrum.resonances)} resonance(s) -> {path}")
    for row in rows:
        print(f"  {row[0]:10s} eps/V0 = {row[3]:.6f} {row[4]:+.8f}i")
    if config.figures:
        from . import plots

        plots.render_static_figure(spectrum, params,
                                   os.path.join(config.out_dir, "static_levels.png"))
    return 0


def _run_solve(config: RunConfig) -> int:
    params = config.params
    n = _sidebands(config)
    seed = complex(config.options["seed_re"], config.options.get("seed_im", 0.0))
    result = polish(quasienergy_det(params, n, config.variant), seed)
    if not result.converged:
        raise RuntimeError(f"root polish did not converge from seed {seed}")
    residual = singular_residual(params, result.eps, n, config.variant)
    omega = params.omega if params.omega > 0.0 else None
    if omega:
        zone, n_zone = reduce_to_first_zone(result.eps, omega)
        zone_re = zone.real
    else:
        zone_re, n_zone = result.eps.real, 0
    rows = [[result.eps.real, result.eps.imag, zone_re, n_zone,
             result.eps.real / params.v0, result.eps.imag / params.v0,
             residual, result.iterations, result.converged]]
    path = os.path.join(config.out_dir, "solve_root.csv")
    _write_csv(path, ["re_eps", "im_eps", "re_eps_zone", "n_zone", "re_eps_over_v0",
                      "im_eps_over_v0", "residual", "iterations", "converged"], rows)
    print(f"solve: eps/V0 = {result.eps.real / params.v0:.8f} "
          f"{result.eps.imag / params.v0:+.10f}i  residual = {residual:.2e} -> {path}")
    return 0


def _run_sweep_cmd(config: RunConfig) -> int:
    params = config.params
    opt = config.options
    parameter = SweepParameter(opt.get("param", "omega"))
    p_range = (opt["start"], opt["stop"])
    points = opt.get("points", 200)
    if parameter is SweepParameter.OMEGA:
        base = params.with_(omega=p_range[0])
    else:
        base = params.with_(v1=p_range[0])
    spectrum = solve_static(params)
    n = config.n_sidebands
    seeds = {
        label: seed_driven_root(base, eps0, n_sidebands=n)
        for label, eps0 in _static_labels(spectrum).items()
    }
    traces, events = run_sweep(base, seeds, p_range, parameter,
                               base_points=points, n_sidebands=n)

    rows = []
    for tr in sorted(traces, key=lambda t: t.label):
        for pt in tr.points:
            omega = tr.omega_at(pt.param)
            zone, n_zone = reduce_to_first_zone(pt.eps, omega)
            rows.append([pt.param, pt.eps.real, pt.eps.imag, zone.real, n_zone,
                         pt.residual, tr.label])
    csv_path = os.path.join(config.out_dir, "sweep_branches.csv")
    _write_csv(csv_path, ["param", "re_eps", "im_eps", "re_eps_zone", "n_zone",
                          "residual", "branch_label"], rows)
    events_payload = [
        {
            "kind": ev.kind.value,
            "parameter_value": ev.parameter_value,
            "gap_re": ev.gap_re,
            "gap_im": ev.gap_im,
            "branches": list(ev.branches),
        }
        for ev in events
    ]
    json_path = os.path.join(config.out_dir, "sweep_events.json")
    _write_json(json_path, events_payload)
    print(f"sweep: {len(traces)} branch(es), {len(events)} crossing event(s) "
          f"-> {csv_path}, {json_path}")
    for ev in events:
        print(f"  {ev.kind.value:8s} at {parameter.value} = {ev.parameter_value:.6f} "
              f"({ev.parameter_value / params.v0:.4f} V0)  gap_re/V0 = {ev.gap_re / params.v0:.3e}")
    if config.figures:
        from . import plots

        plots.render_sweep_figure(traces, events, params,
                                  os.path.join(config.out_dir, "sweep_branches.png"))
    return 0


def _run_threshold(config: RunConfig) -> int:
    params = config.params
    opt = config.options
    window = (opt["omega_window_lo"], opt["omega_window_hi"])
    v1_range = (opt["v1_lo"], opt["v1_hi"])
    resolution = opt.get("resolution")
    spectrum = solve_static(params)
    history: list = []
    transition = threshold_scan(
        params, window, v1_range, _static_labels(spectrum),
        resolution=resolution, history=history,
    )
    payload = {
        "v1_transition": transition,
        "v1_transition_over_v0": transition / params.v0,
        "omega_window": list(window),
        "v1_range": list(v1_range),
        "resolution": resolution if resolution is not None else 0.002 * params.v0,
        "probes": [
            {"v1": v1, "kind": ev.kind.value, "gap_re": ev.gap_re}
            for v1, ev in sorted(history, key=lambda item: item[0])
        ],
    }
    path = os.path.join(config.out_dir, "threshold.json")
    _write_json(path, payload)
    print(f"threshold: crossing changes kind at v1 = {transition:.6f} "
          f"({transition / params.v0:.4f} V0) -> {path}")
    if config.figures:
        from . import plots

        plots.render_threshold_figure(
            history, transition, params, os.path.join(config.out_dir, "threshold_gap.png")
        )
    return 0


def _run_survival(config: RunConfig) -> int:
    params = config.params
    opt = config.options
    n = _sidebands(config)
    seed = complex(opt["seed_re"], opt.get("seed_im", 0.0))
    result = polish(quasienergy_det(params, n, config.variant), seed)
    if not result.converged:
        raise RuntimeError(f"root polish did not converge from seed {seed}")
    state = null_state(params, result.eps, n, config.variant)
    period = 2.0 * math.pi / params.omega
    t_max = opt.get("t_max", 20.0 * period)
    t_points = opt.get("t_points", 401)
    series = survival(state, params, np.linspace(0.0, t_max, t_points))
    rows = [[float(t), float(p), float(h), float(pb)]
            for t, p, h, pb in zip(series.times, series.P, series.h, series.Pbar)]
    path = os.path.join(config.out_dir, "survival.csv")
    _write_csv(path, ["t", "P", "h", "Pbar"], rows)
    print(f"survival: eps/V0 = {state.eps.real / params.v0:.6f} "
          f"{state.eps.imag / params.v0:+.8f}i, <h> = {series.h_mean:.8f} -> {path}")
    if config.figures:
        from . import plots

        plots.render_survival_figure(series, params,
                                     os.path.join(config.out_dir, "survival.png"))
    return 0


_RUNNERS = {
    Command.STATIC: _run_static,
    Command.SOLVE: _run_solve,
    Command.SWEEP: _run_sweep_cmd,
    Command.THRESHOLD: _run_threshold,
    Command.SURVIVAL: _run_survival,
}


def run(config: RunConfig) -> int:
    os.makedirs(config.out_dir, exist_ok=True)
    return _RUNNERS[config.command](config)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # solver failure: machine-readable record
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(record), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
