"""Command-line interface: traces, sweeps, detectors and estimators.

Subcommands: trace | jump | inflect | vismin | calibrate | cp | sweep.
Each analysis subcommand prints a human-readable report followed by one
machine-readable line of key=value pairs (always the last stdout line).
Exit codes: 0 success (including "none found"), 1 numerical or physics
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import analysis
from .analysis import CPParams, calibrate, cp_gravity_ratio, cp_potential
from .config import ConfigError, RunConfig, SweepAxis, load_config
from .model import (
    ExperimentParams,
    GeometryError,
    TRACE_FIELDS,
    evolve,
    semiclassical_phase,
)
from .states import ConvergenceError, UndefinedPhaseError
from .svgchart import Panel, Series, render_figure


def _fmt(x: float) -> str:
    """Decimal formatting with 12 significant digits; NaN spelled out."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NaN"
    return f"{x:.12g}"


def _pmap(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _machine_line(pairs) -> str:
    return " ".join(f"{k}={v}" for k, v in pairs)


def trace_rows(params: ExperimentParams, window, points: int, workers: int = 1):
    """Evaluate the model on a uniform grid over ``window``.

    Each grid time is quantized to its 12-significant-digit printed
    value before evaluation, so re-parsing a CSV row and re-evolving at
    its t reproduces the row exactly.
    """
    t0, t1 = window
    ts = [min(max(float(_fmt(t)), 0.0), params.T)
          for t in np.linspace(t0, t1, points)]
    return _pmap(lambda t: evolve(params, t), ts, workers)


def render_trace_csv(rows, unwrap: bool = False) -> str:
    cols = {name: [getattr(r, name) for r in rows] for name in TRACE_FIELDS}
    if unwrap:
        # The semiclassical jump is a branch flip of size pi, so the
        # continuous rendering folds adjacent differences modulo pi.
        cols["Phi_C"] = analysis.unwrap_phase(cols["Phi_C"], period=math.pi)
    lines = [",".join(TRACE_FIELDS)]
    for i in range(len(rows)):
        lines.append(",".join(_fmt(cols[name][i]) for name in TRACE_FIELDS))
    return "\n".join(lines) + "\n"


def render_trace_svg(rows, unwrap: bool = False) -> str:
    ts = [r.t for r in rows]
    phi_c = [r.Phi_C for r in rows]
    if unwrap:
        phi_c = analysis.unwrap_phase(phi_c, period=math.pi)
    phase_panel = Panel(
        title="Pancharatnam phase",
        x_label="t (s)", y_label="phase (rad)", x=ts,
        series=[
            Series("quantum", [r.Phi_Q for r in rows], color="#1f77b4"),
            Series("semiclassical", phi_c, color="#222222", dasharray="7,4"),
        ])
    vis_panel = Panel(
        title="Visibility",
        x_label="t (s)", y_label="visibility", x=ts,
        series=[
            Series("quantum global", [r.vis_Q_global for r in rows], color="#1f77b4"),
            Series("quantum reduced", [r.vis_Q_reduced for r in rows], color="#76a5d0"),
            Series("semiclassical", [r.vis_C for r in rows], color="#222222",
                   dasharray="7,4"),
        ])
    return render_figure([phase_panel, vis_panel])


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_trace(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    rows = trace_rows(params, cfg.window(), cfg.trace_points, args.workers)
    _write_text(args.out, render_trace_csv(rows, unwrap=cfg.unwrap))
    svg_path = args.svg
    if svg_path is None and "svg" in cfg.outputs:
        if args.out is None:
            raise ConfigError("svg output needs --svg PATH or --out PATH to derive from")
        stem = args.out[:-4] if args.out.endswith(".csv") else args.out
        svg_path = stem + ".svg"
    if svg_path is not None:
        _write_text(svg_path, render_trace_svg(rows, unwrap=cfg.unwrap))
    return 0


def _cmd_jump(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    report = analysis.find_phase_jump(params, cfg.window(), args.tol,
                                      model=args.model or "semiclassical",
                                      points=cfg.trace_points,
                                      threshold=args.threshold)
    convention = params.coupling.value
    if report is None:
        print(f"No phase jump found in window {cfg.window()} "
              f"(model={args.model or 'semiclassical'}, convention={convention}).")
        print(_machine_line([("jump", "none"),
                             ("model", args.model or "semiclassical"),
                             ("convention", convention)]))
        return 0
    print(f"Phase jump ({report.model}, convention {convention}):")
    print(f"  t_jump    = {_fmt(report.t_jump)} s")
    print(f"  magnitude = {_fmt(report.magnitude)} rad")
    print(f"  bracket   = [{_fmt(report.bracket[0])}, {_fmt(report.bracket[1])}] s")
    print(_machine_line([("t_jump", _fmt(report.t_jump)),
                         ("magnitude", _fmt(report.magnitude)),
                         ("bracket_lo", _fmt(report.bracket[0])),
                         ("bracket_hi", _fmt(report.bracket[1])),
                         ("model", report.model),
                         ("convention", convention)]))
    return 0


def _cmd_inflect(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    t_inf = analysis.find_inflection(params, cfg.window(), points=cfg.trace_points)
    convention = params.coupling.value
    if t_inf is None:
        print(f"No inflection of the quantum phase in window {cfg.window()}.")
        print(_machine_line([("inflection", "none"), ("convention", convention)]))
        return 0
    print(f"Quantum phase inflection (convention {convention}):")
    print(f"  t_inflection = {_fmt(t_inf)} s")
    print(_machine_line([("t_inflection", _fmt(t_inf)), ("convention", convention)]))
    return 0


def _cmd_vismin(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    model = args.model or "semiclassical"
    result = analysis.min_visibility(params, model=model, which=args.which,
                                     window=cfg.window(), points=cfg.trace_points)
    print(f"Visibility minimum ({model}, {args.which}, "
          f"convention {params.coupling.value}):")
    print(f"  t_min = {_fmt(result.t_min)} s")
    print(f"  v_min = {_fmt(result.v_min)}")
    if result.coarse:
        print("  (window not unimodal: grid argmin, no refinement)")
    print(_machine_line([("t_min", _fmt(result.t_min)),
                         ("v_min", _fmt(result.v_min)),
                         ("coarse", str(result.coarse).lower()),
                         ("model", model),
                         ("which", args.which),
                         ("convention", params.coupling.value)]))
    return 0


def _cmd_calibrate(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    result = calibrate(params, args.sensitivity)
    print(f"Calibration at T = {_fmt(params.T)} s "
          f"(convention {params.coupling.value}):")
    print(f"  delta_phi  = {_fmt(result.delta_phi)} rad")
    print(f"  sensitivity= {_fmt(args.sensitivity)} rad")
    print(f"  detectable = {result.detectable}")
    print(f"  min m0     = {_fmt(result.min_m0)} kg (component mass; m = 2 m0)")
    print(_machine_line([("delta_phi", _fmt(result.delta_phi)),
                         ("detectable", str(result.detectable).lower()),
                         ("min_m0", _fmt(result.min_m0)),
                         ("sensitivity", _fmt(args.sensitivity))]))
    return 0


def _cmd_cp(cfg: RunConfig, args) -> int:
    params = cfg.experiment_params()
    cp = CPParams(R=args.R, d=cfg.d, epsilon=args.epsilon, c=cfg.c, hbar=cfg.hbar)
    potential = cp_potential(cp)
    ratio = cp_gravity_ratio(cp, params)
    print(f"Casimir-Polder estimate (R = {_fmt(cp.R)} m, d = {_fmt(cp.d)} m, "
          f"epsilon = {_fmt(cp.epsilon)}):")
    print(f"  V_CP          = {_fmt(potential)} J (order-of-magnitude estimate)")
    print(f"  |V_CP| / (G m0^2 / d) = {_fmt(ratio)}  (< 1: gravity dominates)")
    print(_machine_line([("V_CP", _fmt(potential)), ("ratio", _fmt(ratio))]))
    return 0


_SWEEP_SCALARS = ("t_jump", "v_min", "delta_phi", "concurrence_max")


def _sweep_scalar(cfg: RunConfig, args, params: ExperimentParams) -> float:
    if args.scalar == "t_jump":
        report = analysis.find_phase_jump(params, (0.0, params.T), args.tol,
                                          model="semiclassical")
        return math.nan if report is None else report.t_jump
    if args.scalar == "v_min":
        result = analysis.min_visibility(params, model=args.model or "semiclassical",
                                         which=args.which, window=(0.0, params.T),
                                         points=cfg.trace_points)
        return result.v_min
    if args.scalar == "delta_phi":
        return semiclassical_phase(params, params.T)
    if args.scalar == "concurrence_max":
        ts = np.linspace(0.0, params.T, cfg.trace_points)
        return max(evolve(params, float(t)).concurrence for t in ts)
    raise ConfigError(f"unknown sweep scalar {args.scalar!r}")    # pragma: no cover


def _cmd_sweep(cfg: RunConfig, args) -> int:
    axis = cfg.sweep
    if axis is None:
        raise ConfigError("sweep needs an axis: --param/--start/--stop/--count "
                          "or sweep_* config keys")
    grid = sorted(np.linspace(axis.start, axis.stop, axis.count).tolist())
    base = cfg.experiment_params()

    def one(value: float) -> float:
        p = replace(base, **{axis.param: value})
        return _sweep_scalar(cfg, args, p)

    scalars = _pmap(one, grid, args.workers)
    lines = ["param,value,scalar"]
    for value, scalar in zip(grid, scalars):
        lines.append(f"{axis.param},{_fmt(value)},{_fmt(scalar)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


_COMMANDS = {
    "trace": _cmd_trace,
    "jump": _cmd_jump,
    "inflect": _cmd_inflect,
    "vismin": _cmd_vismin,
    "calibrate": _cmd_calibrate,
    "cp": _cmd_cp,
    "sweep": _cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat key = value config file")
    common.add_argument("--convention", choices=["m0sq", "m0m"],
                        help="mass-pairing convention for the action scale")
    common.add_argument("--model", choices=["quantum", "semiclassical"],
                        help="which hypothesis a detector runs on")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--points", type=int, metavar="N",
                        help="trace / scan resolution (default 2000)")
    common.add_argument("--unwrap", action="store_true", default=None,
                        help="emit the continuous (unwrapped) semiclassical phase")
    common.add_argument("--t0", type=float, help="window start in seconds")
    common.add_argument("--t1", type=float, help="window end in seconds")
    common.add_argument("--workers", type=int, default=1,
                        help="parallel evaluation lanes (output is identical)")

    parser = argparse.ArgumentParser(
        prog="dualsg",
        description="Dual Stern-Gerlach interferometer phase, visibility and "
                    "entanglement toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("trace", parents=[common],
                   help="time trace of phases, visibilities and concurrence (CSV/SVG)") \
       .add_argument("--svg", metavar="PATH", help="also write a two-panel SVG figure")
    jump = sub.add_parser("jump", parents=[common], help="locate the phase discontinuity")
    jump.add_argument("--tol", type=float, default=1e-6,
                      help="bracket width for the root finder, seconds")
    jump.add_argument("--threshold", type=float, default=analysis.JUMP_THRESHOLD,
                      help="adjacent-step threshold for the scan detector, radians")
    sub.add_parser("inflect", parents=[common],
                   help="locate the quantum-phase inflection")
    vismin = sub.add_parser("vismin", parents=[common], help="minimize a visibility curve")
    vismin.add_argument("--which", choices=["global", "reduced"], default="global",
                        help="quantum visibility variant")
    calib = sub.add_parser("calibrate", parents=[common],
                           help="detectability of the gravitational phase")
    calib.add_argument("--sensitivity", type=float, default=1e-6,
                       help="phase readout sensitivity, radians")
    cp = sub.add_parser("cp", parents=[common], help="Casimir-Polder feasibility estimate")
    cp.add_argument("--R", type=float, required=True, help="sphere radius, meters")
    cp.add_argument("--epsilon", type=float, required=True,
                    help="relative permittivity (>= 1)")
    sweep = sub.add_parser("sweep", parents=[common],
                           help="scan a parameter and tabulate a scalar")
    sweep.add_argument("--param", choices=["m0", "d", "dx", "T"], help="swept parameter")
    sweep.add_argument("--start", type=float, help="sweep start value")
    sweep.add_argument("--stop", type=float, help="sweep stop value")
    sweep.add_argument("--count", type=int, help="number of grid points (>= 2)")
    sweep.add_argument("--scalar", choices=list(_SWEEP_SCALARS), default="t_jump",
                       help="scalar evaluated at each grid point")
    sweep.add_argument("--which", choices=["global", "reduced"], default="global",
                       help="visibility variant for --scalar v_min")
    sweep.add_argument("--tol", type=float, default=1e-6,
                       help="root-finder tolerance for --scalar t_jump")
    return parser


def _config_from_args(args) -> RunConfig:
    overrides: dict = {}
    if args.convention is not None:
        overrides["convention"] = args.convention
    if args.points is not None:
        overrides["trace_points"] = args.points
    if args.unwrap is not None:
        overrides["unwrap"] = args.unwrap
    if args.t0 is not None:
        overrides["t0"] = args.t0
    if args.t1 is not None:
        overrides["t1"] = args.t1
    if args.command == "sweep":
        flags = [args.param, args.start, args.stop, args.count]
        if any(v is not None for v in flags):
            if any(v is None for v in flags):
                raise ConfigError("sweep flags --param/--start/--stop/--count "
                                  "must be given together")
            overrides["sweep"] = SweepAxis(param=args.param, start=args.start,
                                           stop=args.stop, count=args.count)
    return load_config(args.config, overrides)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:     # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[args.command](cfg, args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, UndefinedPhaseError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
