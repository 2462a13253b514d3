"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 domain error (unreachable
target, no feasible placement, locked linkage, ...).  All artifacts are
written under --out; outputs are deterministic for a fixed config and seed.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from .config import ConfigError, ProjectConfig, load_config
from .dynamics import (NonFinite, SingularMass, placement_for_variant, simulate)
from .handlemount import Unreachable, mount_ik
from .kinematics import OutOfReach, Pose2, Variant, ik
from .metrics import frequency_sweep, path_rmse, sweep_to_csv
from .optimize import ObjectiveSpec, grid_search, grid_to_csv, nelder_mead
from .penholder import (DiameterOutOfRange, LinkageLocked, linkage_svg,
                        solve_screw)
from .session import serve as serve_session
from .signals import compose_target, intent_path
from .svgplot import SvgCanvas, bode_magnitude_svg
from .workspace import (NoFeasiblePlacement, Orientation, Sheet, place_base,
                        workspace_map_svg)

DOMAIN_ERRORS = (OutOfReach, NoFeasiblePlacement, DiameterOutOfRange,
                 LinkageLocked, Unreachable, SingularMass, NonFinite)

DEFAULT_SWEEP = "0.25,0.5,1,2,4,8,12"


def _load(args) -> ProjectConfig:
    cfg = load_config(args.config) if args.config else ProjectConfig()
    if getattr(args, "seed", None) is not None:
        cfg.tremor = replace(cfg.tremor, seed=args.seed)
    if getattr(args, "variant", None) is not None:
        variant = Variant(args.variant)
        cfg.mechanism = replace(cfg.mechanism, variant=variant)
        cfg.dynamics = replace(cfg.dynamics,
                               damper_placement=placement_for_variant(variant))
    if args.out is not None:
        cfg.out_dir = args.out
    os.makedirs(cfg.out_dir, exist_ok=True)
    return cfg


def _out(cfg, name) -> str:
    return os.path.join(cfg.out_dir, name)


def cmd_simulate(args) -> int:
    cfg = _load(args)
    start = intent_path(cfg.intent, 0.0)[0]
    branch = ik(cfg.mechanism, start)
    state0 = next((s for s in branch if s.gamma > 0), branch.states[0])

    def target(t):
        return compose_target(cfg.intent, cfg.tremor, t)

    trace = simulate(cfg.dynamics, cfg.mechanism, cfg.hand, state0, target,
                     args.duration, args.dt)
    trace.to_csv(_out(cfg, "trace.csv"))
    rmse = path_rmse(trace, cfg.intent, settle=min(0.5, args.duration / 4))

    xs = list(trace.pen[:, 0]) + list(trace.target[:, 0])
    ys = list(trace.pen[:, 1]) + list(trace.target[:, 1])
    pad = 0.01
    cv = SvgCanvas((min(xs) - pad, max(xs) + pad), (min(ys) - pad, max(ys) + pad))
    intent_pts = [tuple(intent_path(cfg.intent, t)[0]) for t in trace.t]
    cv.polyline(intent_pts, stroke="#bbbbbb", width=1.0)
    cv.polyline([tuple(p) for p in trace.target], stroke="#cc8888", width=0.8,
                opacity=0.8)
    cv.polyline([tuple(p) for p in trace.pen], stroke="#223355", width=1.6)
    cv.text((cv.x0 + 0.002, cv.y1 - 0.004),
            f"pen RMSE vs intent: {rmse * 1000:.2f} mm "
            f"(ledger residual {trace.energy_residual:.2e} J)", size_px=11)
    with open(_out(cfg, "pen_trace.svg"), "w", encoding="utf-8") as fh:
        fh.write(cv.to_string())
    print(f"trace: {len(trace)} rows, pen RMSE vs intent {rmse * 1000:.3f} mm")
    print(f"wrote {_out(cfg, 'trace.csv')} and {_out(cfg, 'pen_trace.svg')}")
    return 0


def cmd_workspace(args) -> int:
    cfg = _load(args)
    for orientation in (Orientation.PORTRAIT, Orientation.LANDSCAPE):
        sheet = Sheet.legal(center=(0.0, 0.0), orientation=orientation)
        offset, report = place_base(cfg.mechanism, sheet)
        placed = replace(cfg.mechanism,
                         base=(sheet.center[0] + offset[0],
                               sheet.center[1] + offset[1]))
        name = f"workspace_{orientation.value}.svg"
        with open(_out(cfg, name), "w", encoding="utf-8") as fh:
            fh.write(workspace_map_svg(placed, sheet, args.grid_pitch))
        print(f"{orientation.value}: base offset ({offset[0]:+.3f}, "
              f"{offset[1]:+.3f}) m, covered={report.covered}, "
              f"fraction={report.fraction:.4f}, "
              f"margin={report.margin * 1000:+.1f} mm -> {_out(cfg, name)}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _load(args)
    freqs = [float(f) for f in args.f_list.split(",") if f.strip()]
    points = frequency_sweep(cfg.dynamics, cfg.mechanism, cfg.hand, freqs)
    sweep_to_csv(points, _out(cfg, "sweep.csv"))
    bode_magnitude_svg(points, _out(cfg, "sweep.svg"))
    for p in points:
        print(f"f={p.frequency:7.3f} Hz  gain={p.gain:.4f}  "
              f"phase={p.phase:+.3f} rad")
    print(f"wrote {_out(cfg, 'sweep.csv')} and {_out(cfg, 'sweep.svg')}")
    return 0


def cmd_optimize(args) -> int:
    cfg = _load(args)
    objective = ObjectiveSpec()
    grid = grid_search(objective, cfg.dynamics, cfg.mechanism, cfg.hand,
                       n_per_axis=args.n_per_axis)
    grid_to_csv(grid, _out(cfg, "grid.csv"))
    refined = nelder_mead(objective, cfg.dynamics, cfg.mechanism, cfg.hand,
                          grid.best)
    design = {
        "b1": refined.vars.b1,
        "b2": refined.vars.b2,
        "cost": refined.cost,
        "grid_cost": grid.cost,
        "simplex_converged": refined.converged,
    }
    with open(_out(cfg, "design.json"), "w", encoding="utf-8") as fh:
        json.dump(design, fh, indent=2)
        fh.write("\n")
    print(f"grid best: b=({grid.best.b1:.4g}, {grid.best.b2:.4g}) "
          f"cost={grid.cost:.5f}")
    print(f"simplex:   b=({refined.vars.b1:.4g}, {refined.vars.b2:.4g}) "
          f"cost={refined.cost:.5f} ({refined.iterations} iterations)")
    print(f"wrote {_out(cfg, 'grid.csv')} and {_out(cfg, 'design.json')}")
    return 0


def cmd_penholder(args) -> int:
    cfg = _load(args)
    geom = cfg.gripper
    diameters = ([args.diameter] if args.diameter is not None
                 else [float(d) for d in range(int(geom.d_min),
                                               int(geom.d_max) + 1)])
    print("diameter_mm  travel_mm  turns")
    for d in diameters:
        setting = solve_screw(geom, d)
        print(f"{d:11.2f}  {setting.travel:9.4f}  {setting.turns:5.3f}")
    with open(_out(cfg, "penholder.svg"), "w", encoding="utf-8") as fh:
        fh.write(linkage_svg(geom))
    print(f"wrote {_out(cfg, 'penholder.svg')}")
    return 0


def cmd_mount(args) -> int:
    cfg = _load(args)
    target = Pose2(args.x, args.y, math.radians(args.phi_deg))
    solutions = mount_ik(cfg.mount, target)
    for i, (a1, a2, a3) in enumerate(solutions):
        print(f"branch {i}: a1={math.degrees(a1):+8.3f} deg  "
              f"a2={math.degrees(a2):+8.3f} deg  "
              f"a3={math.degrees(a3):+8.3f} deg")
    return 0


def cmd_serve(args) -> int:
    cfg = _load(args)
    serve_session(cfg, args.port, record_dir=args.record)
    return 0


def _add_common(sub, seed=True):
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--out", help="output directory (default from config)")
    if seed:
        sub.add_argument("--seed", type=int, help="tremor seed override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gripscribe",
        description="Digital twin of a passive two-bar handwriting aid.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("simulate", help="run a tremor + intent simulation")
    _add_common(p)
    p.add_argument("--duration", type=float, default=5.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--variant", choices=["A", "B", "C"])
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("workspace", help="sheet coverage and base placement")
    _add_common(p, seed=False)
    p.add_argument("--grid-pitch", type=float, default=0.005)
    p.add_argument("--variant", choices=["A", "B", "C"])
    p.set_defaults(func=cmd_workspace)

    p = subs.add_parser("sweep", help="transmissibility frequency sweep")
    _add_common(p, seed=False)
    p.add_argument("--f-list", default=DEFAULT_SWEEP,
                   help="comma-separated frequencies [Hz]")
    p.add_argument("--variant", choices=["A", "B", "C"])
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("optimize", help="tune damper coefficients")
    _add_common(p, seed=False)
    p.add_argument("--n-per-axis", type=int, default=11)
    p.set_defaults(func=cmd_optimize)

    p = subs.add_parser("penholder", help="pen gripper travel table")
    _add_common(p, seed=False)
    p.add_argument("--diameter", type=float, help="single pen diameter [mm]")
    p.set_defaults(func=cmd_penholder)

    p = subs.add_parser("mount", help="handle mount screw settings")
    _add_common(p, seed=False)
    p.add_argument("--x", type=float, required=True, help="handle x offset [m]")
    p.add_argument("--y", type=float, required=True, help="handle y offset [m]")
    p.add_argument("--phi-deg", type=float, default=0.0,
                   help="handle orientation [deg]")
    p.set_defaults(func=cmd_mount)

    p = subs.add_parser("serve", help="run the live session service")
    _add_common(p)
    p.add_argument("--port", type=int, default=7341)
    p.add_argument("--record", help="directory for inbound stream recordings")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
