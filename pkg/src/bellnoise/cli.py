"""Command-line interface.

Subcommands: ``simulate`` (one scenario to CSV), ``compare`` (cross-check two
or more methods on the same scenario), ``features`` (sudden-death / revival
report), and ``preset`` (named scenario bundles).  Exit codes: 0 success,
1 usage error, 2 tolerance failure in ``compare``, 3 numerical failure.

Every run that writes a CSV also writes the fully resolved configuration to
``<csv>.config`` so results stay reproducible.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .errors import InvalidStateError, NumericalError
from .scenarios import (
    PRESETS,
    ScenarioConfig,
    compare_methods,
    emit_csv,
    extract_features,
    parse_config_file,
    preset_config,
    resolved_config_text,
    run_scenario,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TOLERANCE = 2
EXIT_NUMERICAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# argparse destination -> ScenarioConfig field
_FLAG_TO_FIELD = {
    "noise": "noise_kind",
    "topology": "topology",
    "method": "method",
    "nu": "nu",
    "gamma": "gamma",
    "c0": "c0",
    "delta_c": "delta_c",
    "t_max": "t_max",
    "points": "n_points",
    "samples": "n_samples",
    "nodes": "quad_nodes",
    "seed": "seed",
    "workers": "workers",
    "threshold": "threshold",
    "out": "output_path",
}


def _add_scenario_flags(parser, include_method=True):
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--noise", choices=("static", "rtn"))
    parser.add_argument("--topology", choices=("separate", "common"))
    if include_method:
        parser.add_argument("--method", choices=("mc", "quadrature", "closed_form"))
    parser.add_argument("--nu", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--c0", type=float)
    parser.add_argument("--delta-c", dest="delta_c", type=float)
    parser.add_argument("--t-max", dest="t_max", type=float)
    parser.add_argument("--points", type=int)
    parser.add_argument("--samples", type=int)
    parser.add_argument("--nodes", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--threshold", type=float)
    parser.add_argument("--out", help="output path")


def build_parser():
    parser = _Parser(prog="bellnoise", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="run one scenario and emit CSV")
    _add_scenario_flags(simulate)

    compare = commands.add_parser("compare", help="cross-check methods on one scenario")
    _add_scenario_flags(compare, include_method=False)
    compare.add_argument(
        "--method", help="comma-separated list of methods to compare (at least two)"
    )
    compare.add_argument("--tolerance", type=float, help="override the pass/fail tolerance")

    features = commands.add_parser("features", help="sudden-death / revival report")
    _add_scenario_flags(features)
    features.add_argument(
        "--quantity",
        choices=("negativity", "discord", "mutual_info", "classical"),
        default="negativity",
    )

    preset = commands.add_parser("preset", help="run a named preset (both topologies)")
    preset.add_argument("name", choices=sorted(PRESETS))
    _add_scenario_flags(preset)

    return parser


def _resolve_config(args, base=None):
    values = {}
    if base is not None:
        values.update(base)
    if getattr(args, "config", None):
        values.update(parse_config_file(Path(args.config).read_text()))
    for dest, field_name in _FLAG_TO_FIELD.items():
        provided = getattr(args, dest, None)
        if provided is not None:
            values[field_name] = provided
    known = {f.name for f in fields(ScenarioConfig)}
    values = {key: value for key, value in values.items() if key in known}
    cfg = ScenarioConfig(**values)
    cfg.validate()
    return cfg


def _write_outputs(curve, cfg):
    text = emit_csv(curve)
    if cfg.output_path:
        path = Path(cfg.output_path)
        path.write_text(text)
        Path(str(path) + ".config").write_text(resolved_config_text(cfg))
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)


def _cmd_simulate(args):
    cfg = _resolve_config(args)
    curve = run_scenario(cfg)
    _write_outputs(curve, cfg)
    return EXIT_OK


def _cmd_compare(args):
    if not args.method:
        raise _UsageError("compare needs --method with a comma-separated list")
    methods = [name.strip() for name in args.method.split(",") if name.strip()]
    if len(set(methods)) < 2:
        raise _UsageError(f"compare needs at least two distinct methods, got {methods}")
    args.method = methods[0]
    cfg = _resolve_config(args)
    report = compare_methods(cfg, methods, tolerance=args.tolerance)
    text = report.render()
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
        print(f"wrote {cfg.output_path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def _cmd_features(args):
    cfg = _resolve_config(args)
    curve = run_scenario(cfg)
    found = extract_features(curve, threshold=cfg.threshold, quantity=args.quantity)
    lines = [f"features of {args.quantity} at threshold {cfg.threshold:g}"]
    if not found.death_times:
        lines.append("no deaths detected")
    for k, (death, peak) in enumerate(
        zip(found.death_times, found.revival_peaks + [None] * len(found.death_times)), start=1
    ):
        lines.append(f"death {k}: nt={death!r}")
        if peak is not None:
            lines.append(f"revival {k}: nt={peak[0]!r} value={peak[1]!r}")
    text = "\n".join(lines) + "\n"
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
        print(f"wrote {cfg.output_path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_preset(args):
    overrides = {}
    for dest, field_name in _FLAG_TO_FIELD.items():
        if field_name in ("output_path", "topology"):
            continue
        provided = getattr(args, dest, None)
        if provided is not None:
            overrides[field_name] = provided
    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    topologies = (args.topology,) if args.topology else ("separate", "common")
    for topology in topologies:
        cfg = preset_config(args.name, topology, **overrides)
        cfg.output_path = str(out_dir / f"{args.name}-{topology}.csv")
        cfg.validate()
        curve = run_scenario(cfg)
        _write_outputs(curve, cfg)
    return EXIT_OK


_COMMANDS = {
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "features": _cmd_features,
    "preset": _cmd_preset,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidStateError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
