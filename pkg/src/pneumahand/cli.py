"""Command-line entry points.

    pneumahand simulate --synergy NAME [--scale S] --out DIR
    pneumahand characterize finger|bellow [--seed N] --out DIR
    pneumahand evaluate kapandji|pullout|library [--seed N] --out DIR
    pneumahand serve [--port P] [--library DIR] [--session FILE]
    pneumahand calibrate fit-bellow --table CSV --out FILE

--config is optional everywhere; PNEUMAHAND_CONFIG works as a fallback.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from .actuators import fit_moment_arm, load_calibration_table
from .config import (ConfigError, build_hand_model, config_digest, load_config)
from .control import replay_setpoints
from .formats import save_trace
from .hand import hand_equilibrium
from .experiments import (
    build_default_library,
    run_all_bellow_characterizations,
    run_finger_characterization,
    run_kapandji,
    run_pullout,
    validate_library,
)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser():
    parser = argparse.ArgumentParser(prog="pneumahand")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="replay a synergy, write a telemetry trace")
    p.add_argument("--config")
    p.add_argument("--synergy", required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("characterize", help="run an actuator characterization")
    p.add_argument("target", choices=["finger", "bellow"])
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_characterize)

    p = sub.add_parser("evaluate", help="run a hand-level evaluation")
    p.add_argument("target", choices=["kapandji", "pullout", "library"])
    p.add_argument("--config")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("serve", help="start the streaming session service")
    p.add_argument("--config")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--library")
    p.add_argument("--session")
    p.add_argument("--telemetry-rate", type=float, default=30.0)
    p.set_defaults(handler=cmd_serve)

    p = sub.add_parser("calibrate", help="fit model parameters from rig data")
    p.add_argument("kind", choices=["fit-bellow"])
    p.add_argument("--config")
    p.add_argument("--table", required=True)
    p.add_argument("--bellow", choices=["proximal", "middle", "distal"],
                   default="proximal")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_calibrate)
    return parser


def _setup(args):
    cfg = load_config(args.config)
    model = build_hand_model(cfg)
    return cfg, model, config_digest(cfg)


def _seed(args, cfg):
    seed = getattr(args, "seed", None)
    if seed is not None:
        return seed
    return cfg["pneumatics"]["sensor"]["seed"]


def cmd_simulate(args):
    cfg, model, digest = _setup(args)
    library = build_default_library(model)
    if args.synergy not in library:
        raise ValueError(f"unknown synergy '{args.synergy}'; "
                         f"try one of {', '.join(library.names()[:8])} ...")
    traj = library[args.synergy]
    if args.scale <= 0.0:
        raise ValueError("--scale must be positive")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    times, setpoints, masses, joints = [], [], [], []
    duration = traj.duration * args.scale
    for t in np.arange(0.0, duration + 1e-9, 1.0 / 30.0):
        sp = replay_setpoints(traj, t, args.scale)
        eq = hand_equilibrium(model, sp, compute_pose=False)
        times.append(t)
        setpoints.append(sp)
        masses.append(sp.copy())
        joints.append(eq.joints)
    trace_path = out / f"{args.synergy}_trace.txt"
    save_trace(trace_path, times, setpoints, masses, joints,
               config_digest=digest, seed=str(_seed(args, cfg)),
               name=args.synergy)
    print(f"wrote {trace_path} ({len(times)} samples, scale {args.scale})")
    return 0


def _write_report(report, out_dir, stem):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.to_csv(out_dir / f"{stem}.csv")
    report.to_json(out_dir / f"{stem}.summary.json")
    for line in report.summary_lines():
        print(line)


def cmd_characterize(args):
    cfg, model, digest = _setup(args)
    seed = _seed(args, cfg)
    if args.target == "finger":
        report = run_finger_characterization(model, seed=seed, config_digest=digest)
        _write_report(report, args.out, "finger_characterization")
        return 0 if report.passed else 1
    reports = run_all_bellow_characterizations(model, seed=seed, config_digest=digest)
    ok = True
    for name, report in reports.items():
        _write_report(report, args.out, f"bellow_characterization_{name}")
        ok &= report.passed
    return 0 if ok else 1


def cmd_evaluate(args):
    cfg, model, digest = _setup(args)
    seed = _seed(args, cfg)
    library = build_default_library(model)
    if args.target == "kapandji":
        report = run_kapandji(model, library, seed=seed, config_digest=digest)
        _write_report(report, args.out, "kapandji")
        print(f"score: {report.notes['score']}/10")
        return 0 if report.passed else 1
    if args.target == "pullout":
        anchors = cfg["experiments"]["pullout_anchors_n"]
        report = run_pullout(model, library["power_sphere"], seed=seed,
                             config_digest=digest, anchors=anchors,
                             mu=cfg["experiments"]["friction_mu"],
                             sphere_diameter=cfg["experiments"]["sphere_diameter_m"])
        _write_report(report, args.out, "pullout")
        return 0 if report.passed else 1
    report = validate_library(model, library)
    report.config_digest = digest
    _write_report(report, args.out, "library_validation")
    print(f"entries: {report.notes['entries_passed']}/{report.notes['entries_total']}")
    return 0 if report.passed else 1


def cmd_serve(args):
    import asyncio
    from .service import SessionCore, serve

    cfg, _, _ = _setup(args)
    core = SessionCore(cfg, library_dir=args.library, session_path=args.session,
                       telemetry_rate=args.telemetry_rate)
    print(f"serving on ws://{args.host}:{args.port} "
          f"(tick {core.controller_cfg.tick_rate:.0f} Hz, "
          f"telemetry /{core.telemetry_div})")
    try:
        asyncio.run(serve(core, args.host, args.port))
    except KeyboardInterrupt:
        core.save_session()
        print("session saved, bye")
    return 0


def cmd_calibrate(args):
    cfg, model, _ = _setup(args)
    table = load_calibration_table(args.table)
    spec = model.thumb.bellows[("proximal", "middle", "distal").index(args.bellow)]
    arm_table = fit_moment_arm(table, spec)
    fragment = {
        "format": "pneumahand.config",
        "version": 1,
        "hand": {
            "arm_table_deg": [round(float(np.rad2deg(a)), 9) for a, _ in arm_table],
            "arm_table_m": [float(r) for _, r in arm_table],
        },
    }
    import json
    Path(args.out).write_text(json.dumps(fragment, indent=2) + "\n")
    print(f"wrote {args.out} ({len(arm_table)} angles, bellow={args.bellow})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
