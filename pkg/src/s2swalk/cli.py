"""Command-line interface.

Exit codes: 0 success, 1 fall or divergence detected, 2 configuration error.
"""
import argparse
import os
import sys

from .errors import ConfigError
from .harness import CONTROLLERS, compare, run_episode, sweep, with_controller
from .io import dump_config, load_config, write_csv, write_metrics_csv
from .scenarios import SCENARIO_CONTROLLERS, builtin_scenarios


def _resolve_config(ref: str):
    scenarios = builtin_scenarios()
    if ref in scenarios:
        return scenarios[ref]
    if os.path.exists(ref):
        return load_config(ref)
    raise ConfigError(
        f"{ref!r} is neither a built-in scenario nor a config file "
        f"(built-ins: {', '.join(sorted(scenarios))})")


def _write_outputs(cfg, records, metrics, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for ch in cfg.channels:
        path = os.path.join(out_dir,
                            f"{cfg.name}__{cfg.controller}__{ch.name}.csv")
        write_csv([r for r in records if r.channel == ch.name], path)
        paths.append(path)
    summary = os.path.join(out_dir, f"{cfg.name}__{cfg.controller}__metrics.csv")
    write_metrics_csv([(cfg.name, cfg.controller, m)
                       for m in metrics.values()], summary)
    paths.append(summary)
    return paths


def _print_metrics(metrics):
    for name, m in metrics.items():
        settle = m.settling_step if m.settling_step is not None else "-"
        print(f"  {name}: steps={m.steps} fell={m.fell} "
              f"ss_vel_err={m.ss_velocity_error:.3e} settle={settle} "
              f"max_err={m.max_velocity_error:.3e} "
              f"sat={m.saturation_fraction:.2f}")


def cmd_list(_args) -> int:
    for name in sorted(builtin_scenarios()):
        controllers = ", ".join(SCENARIO_CONTROLLERS[name])
        print(f"{name}  [{controllers}]")
    return 0


def cmd_run(args) -> int:
    cfg = _resolve_config(args.scenario)
    if args.controller:
        if args.controller not in CONTROLLERS:
            raise ConfigError(f"unknown controller {args.controller!r}")
        cfg = with_controller(cfg, args.controller)
    if args.seed is not None:
        cfg.seed = args.seed
    records, metrics = run_episode(cfg)
    paths = _write_outputs(cfg, records, metrics, args.out)
    print(f"{cfg.name} [{cfg.controller}]")
    _print_metrics(metrics)
    for p in paths:
        print(f"wrote {p}")
    return 1 if any(m.fell for m in metrics.values()) else 0


def cmd_compare(args) -> int:
    cfg = _resolve_config(args.scenario)
    controllers = [c for c in args.controllers.split(",") if c]
    if args.seed is not None:
        cfg.seed = args.seed
    rows = compare(cfg, controllers)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{cfg.name}__compare.csv")
    write_metrics_csv([(cfg.name, controller, m)
                       for controller, _, m in rows], path)
    for controller, channel, m in rows:
        settle = m.settling_step if m.settling_step is not None else "-"
        print(f"{controller:16s} {channel:10s} fell={m.fell} "
              f"ss_vel_err={m.ss_velocity_error:.3e} settle={settle}")
    print(f"wrote {path}")
    return 1 if any(m.fell for _, _, m in rows) else 0


def cmd_sweep(args) -> int:
    cfg = _resolve_config(args.scenario)
    values = []
    for raw in args.values.split(","):
        raw = raw.strip()
        if not raw:
            continue
        try:
            values.append(float(raw))
        except ValueError:
            values.append(raw)
    results = sweep(cfg, args.param, values, workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{cfg.name}__sweep.csv")
    rows = []
    for value, metrics in results:
        for m in metrics.values():
            rows.append((f"{cfg.name}[{args.param}={value}]",
                         cfg.controller, m))
            print(f"{args.param}={value}: ss_vel_err={m.ss_velocity_error:.3e} "
                  f"fell={m.fell}")
    write_metrics_csv(rows, path)
    print(f"wrote {path}")
    return 0


def cmd_dump(args) -> int:
    cfg = _resolve_config(args.scenario)
    dump_config(cfg, args.out)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s2swalk",
        description="Adaptive step-to-step walking scenario simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-scenarios", help="list built-in scenarios")

    run = sub.add_parser("run", help="run one scenario or config file")
    run.add_argument("scenario", help="built-in name or YAML config path")
    run.add_argument("--controller", default=None,
                     help="override the controller "
                          f"({', '.join(CONTROLLERS)})")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--seed", type=int, default=None)

    cmp_ = sub.add_parser("compare", help="run several controllers")
    cmp_.add_argument("scenario")
    cmp_.add_argument("--controllers", required=True,
                      help="comma-separated controller list")
    cmp_.add_argument("--out", default="out")
    cmp_.add_argument("--seed", type=int, default=None)

    swp = sub.add_parser("sweep", help="grid over one config parameter")
    swp.add_argument("scenario")
    swp.add_argument("--param", required=True,
                     help="dotted path, e.g. estimator.gamma")
    swp.add_argument("--values", required=True,
                     help="comma-separated values")
    swp.add_argument("--out", default="out")
    swp.add_argument("--workers", type=int, default=1)

    dump = sub.add_parser("dump-config",
                          help="write a built-in scenario as a YAML config")
    dump.add_argument("scenario")
    dump.add_argument("--out", default="scenario.yaml")
    return parser


_COMMANDS = {
    "list-scenarios": cmd_list,
    "run": cmd_run,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "dump-config": cmd_dump,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
