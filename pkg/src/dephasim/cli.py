"""Command-line interface: scenario runs, figure presets, witnesses, sweeps.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import sys

from .errors import ConfigError, NumericalError
from .scenario import (PRESETS, ScenarioConfig, preset_config, run_preset,
                       run_scenario, sweep, sweep_to_csv)

# per-subcommand output selections layered over the config file
_COMMAND_OUTPUTS = {
    "rates": ["gamma", "Gamma", "shift", "gamma_tilde", "j_tilde", "gamma_aux"],
    "evolve": ["composite", "reduced"],
    "distance": ["d_composite", "d_reduced"],
    "blp": ["d_composite", "d_reduced", "blp"],
    "rhp": ["gamma", "gamma_tilde", "rhp"],
}


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError("--grid expects t_end:n_points")
    try:
        t_end = float(parts[0])
        n = int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"--grid expects t_end:n_points, got {text!r}") from exc
    return {"t_end": t_end, "n_points": n}


def _write_out(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_report(report, args):
    text = report.to_csv() if args.format == "csv" else report.to_json()
    _write_out(text, args.out)


def _scenario_command(args):
    d = _load_config(args.config)
    if args.grid is not None:
        d["grid"] = _parse_grid(args.grid)
    if args.command in _COMMAND_OUTPUTS:
        d["outputs"] = list(_COMMAND_OUTPUTS[args.command])
    if args.command == "casestudy":
        if d.get("model") != "sx_lindblad":
            raise ConfigError("casestudy needs a config with model 'sx_lindblad'")
        d["outputs"] = (["d_reduced", "d_composite", "blp"]
                        if d.get("pair") is not None else ["composite", "reduced"])
    if args.command == "distance" and d.get("pair") is None:
        raise ConfigError("distance needs a config with a 'pair' state")
    cfg = ScenarioConfig.from_dict(d)
    _emit_report(run_scenario(cfg), args)
    return 0


def _preset_command(args):
    if args.dump_config:
        _write_out(json.dumps(preset_config(args.name), sort_keys=True, indent=1) + "\n",
                   args.out)
        return 0
    _emit_report(run_preset(args.name), args)
    return 0


def _sweep_command(args):
    d = _load_config(args.config)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"--values expects comma-separated numbers, got {args.values!r}") from exc
    rows = sweep(d, args.axis, values)
    if args.format == "csv":
        _write_out(sweep_to_csv(rows, args.axis), args.out)
    else:
        _write_out(json.dumps({"axis": args.axis, "rows": rows}, sort_keys=True,
                              indent=1) + "\n", args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dephasim",
        description="Dephasing dynamics of two coupled two-state systems in a "
                    "common bath: rates, trajectories, distances, Markovianity "
                    "witnesses.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", metavar="PATH",
                        help="output file, '-' for stdout (default)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    config_common = argparse.ArgumentParser(add_help=False, parents=[common])
    config_common.add_argument("--config", required=True, metavar="PATH",
                               help="scenario config (JSON)")
    config_common.add_argument("--grid", default=None, metavar="T_END:N",
                               help="override the config time grid")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rates", parents=[config_common],
                   help="bath and effective reduced rates on the grid")
    sub.add_parser("evolve", parents=[config_common],
                   help="composite and reduced state trajectories")
    sub.add_parser("distance", parents=[config_common],
                   help="trace distances between the configured state pair")
    sub.add_parser("blp", parents=[config_common],
                   help="distances plus back-flow witness verdicts")
    sub.add_parser("rhp", parents=[config_common],
                   help="rates plus divisibility witness verdicts")
    sub.add_parser("casestudy", parents=[config_common],
                   help="transverse-coupling weak-limit model (sx_lindblad config)")

    preset = sub.add_parser("preset", parents=[common],
                            help="run an embedded figure preset")
    preset.add_argument("name", choices=sorted(PRESETS))
    preset.add_argument("--dump-config", action="store_true",
                        help="print the preset's config bundle instead of running")

    swp = sub.add_parser("sweep", parents=[common],
                         help="summary rows over a swept parameter")
    swp.add_argument("--config", required=True, metavar="PATH")
    swp.add_argument("--axis", required=True,
                     choices=("T", "J", "sigma2z", "aux_plus_amp", "eta", "s",
                              "Omega", "l"))
    swp.add_argument("--values", required=True, metavar="V1,V2,...",
                     help="comma-separated axis values")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "preset":
            return _preset_command(args)
        if args.command == "sweep":
            return _sweep_command(args)
        return _scenario_command(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
