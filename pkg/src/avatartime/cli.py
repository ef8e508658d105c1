"""Command-line entry point: ``avatartime {generate,solve,sweep,verify}``.

Settings come from an optional JSON file (``--config``) overridden by flags.
Each run writes a manifest that can be passed back as ``--config`` to
reproduce its outputs byte for byte.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 verification
failure. ``AVATARTIME_VERBOSE`` (0-2) controls logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Sequence

from . import egonet, experiments
from .allocation import AllocationProblem, solve
from .egonet import DEFAULT_LAYERS, LayerSpec, NetworkError
from .params import DEFAULT_BETA, DEFAULT_ZMAX, HOURS_PER_YEAR, ModelParams, ParameterError
from .verification import verify_oracle

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_VERIFY = 0, 2, 3, 4

log = logging.getLogger("avatartime")

DEFAULTS: dict[str, dict[str, Any]] = {
    "generate": {
        "seed": 0,
        "out": None,
        "layer_means": [s.cumulative_size_mean for s in DEFAULT_LAYERS],
        "layer_times": [s.per_alter_time_mean for s in DEFAULT_LAYERS],
        "layer_names": [s.name for s in DEFAULT_LAYERS],
        "beta": DEFAULT_BETA,
        "time_cv": egonet.DEFAULT_TIME_CV,
    },
    "solve": {
        "network": None,
        "out": None,
        "gamma": None,
        "compression_c": 0.54,
        "delta": 7 / 6,
        "beta": None,
        "Y": HOURS_PER_YEAR,
        "Z": DEFAULT_ZMAX,
        "zmax": DEFAULT_ZMAX,
        "horizon": HOURS_PER_YEAR,
    },
    "sweep": {
        "network": "fixture:fig4",
        "seed": None,
        "out_dir": None,
        "beta": DEFAULT_BETA,
        "Z": experiments.FIG4_Z,
        "zmax": DEFAULT_ZMAX,
        "points": experiments.DEFAULT_POINTS,
        "gamma_min": 0.0,
        "gamma_max": None,
        "y_multipliers": list(experiments.DEFAULT_Y_MULTIPLIERS),
        "reinvest_spare": None,
        "verify": False,
    },
    "verify": {
        "instances": 1000,
        "seed": 0,
        "max_n": 200,
    },
}


class ConfigError(Exception):
    pass


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _names(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="avatartime", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS  # unset flags must not shadow config-file values

    g = sub.add_parser("generate", help="sample a synthetic ego network")
    g.add_argument("--config", help="JSON settings file (flags win)")
    g.add_argument("--seed", type=int, default=S)
    g.add_argument("--out", default=S, help="network file to write")
    g.add_argument("--layer-means", dest="layer_means", type=_floats, default=S,
                   help="cumulative mean layer sizes, inner to outer")
    g.add_argument("--layer-times", dest="layer_times", type=_floats, default=S,
                   help="mean yearly hours per alter, inner to outer")
    g.add_argument("--layer-names", dest="layer_names", type=_names, default=S)
    g.add_argument("--beta", type=float, default=S)
    g.add_argument("--time-cv", dest="time_cv", type=float, default=S)

    s = sub.add_parser("solve", help="optimal avatar allocation for one network")
    s.add_argument("--config")
    s.add_argument("--network", default=S, help="network file or fixture:<name>")
    s.add_argument("--out", default=S, help="plan file to write")
    s.add_argument("--gamma", type=float, default=S, help="override c*delta")
    s.add_argument("--compression-c", dest="compression_c", type=float, default=S)
    s.add_argument("--delta", type=float, default=S)
    s.add_argument("--beta", type=float, default=S, help="set every alter's beta")
    s.add_argument("--Y", type=float, default=S, help="avatar capacity, hours")
    s.add_argument("--Z", type=float, default=S, help="debrief budget, hours")
    s.add_argument("--zmax", type=float, default=S, help="debrief cap, hours")
    s.add_argument("--horizon", type=float, default=S)

    w = sub.add_parser("sweep", help="spare time over a gamma grid and Y scenarios")
    w.add_argument("--config")
    w.add_argument("--network", default=S, help="network file or fixture:<name>")
    w.add_argument("--seed", type=int, default=S, help="generate the network from this seed")
    w.add_argument("--out-dir", dest="out_dir", default=S)
    w.add_argument("--beta", type=float, default=S)
    w.add_argument("--Z", type=float, default=S)
    w.add_argument("--zmax", type=float, default=S)
    w.add_argument("--points", type=int, default=S)
    w.add_argument("--gamma-min", dest="gamma_min", type=float, default=S)
    w.add_argument("--gamma-max", dest="gamma_max", type=float, default=S)
    w.add_argument("--y-multipliers", dest="y_multipliers", type=_floats, default=S,
                   help="avatar capacities as multiples of the network's X~")
    w.add_argument("--reinvest-spare", dest="reinvest_spare", type=float, default=S,
                   help="hours to reinvest (default: largest spare in the sweep)")
    w.add_argument("--verify", action="store_true", default=S,
                   help="check every point against the simplex oracle")

    v = sub.add_parser("verify", help="random cross-check of closed form vs simplex")
    v.add_argument("--config")
    v.add_argument("--instances", type=int, default=S)
    v.add_argument("--seed", type=int, default=S)
    v.add_argument("--max-n", dest="max_n", type=int, default=S)
    return p


def resolve_settings(command: str, args: argparse.Namespace) -> dict[str, Any]:
    settings = dict(DEFAULTS[command])
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as e:
            raise OSError(f"cannot read config {args.config}: {e.strerror}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"{args.config}: invalid JSON ({e})") from e
        if isinstance(data, dict) and "settings" in data:  # a manifest
            if data.get("command", command) != command:
                raise ConfigError(f"manifest is for '{data['command']}', not '{command}'")
            data = data["settings"]
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - set(settings)
        if unknown:
            raise ConfigError(f"unknown {command} setting(s): {sorted(unknown)}")
        settings.update(data)
    for key, value in vars(args).items():
        if key in settings:
            settings[key] = value
    return settings


def _write_manifest(path: Path, command: str, settings: dict[str, Any]) -> None:
    manifest = {"command": command, "version": _version(),
                "seed": settings.get("seed"), "settings": settings}
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="\n")


def _require_file(source: str | None) -> None:
    if source and not source.startswith("fixture:") and not Path(source).is_file():
        raise FileNotFoundError(f"input file not found: {source}")


def cmd_generate(st: dict[str, Any]) -> int:
    if not st["out"]:
        raise ConfigError("generate needs --out")
    means, times, names = st["layer_means"], st["layer_times"], st["layer_names"]
    if len(names) != len(means):
        names = [f"layer{i + 1}" for i in range(len(means))]
    if len(times) != len(means):
        raise ConfigError(f"{len(means)} layer means but {len(times)} layer times")
    specs = [LayerSpec(n, m, t) for n, m, t in zip(names, means, times)]
    net = egonet.generate(int(st["seed"]), specs, st["beta"], st["time_cv"])
    out = Path(st["out"])
    net.save(out)
    _write_manifest(out.with_name(out.name + ".manifest.json"), "generate", st)
    sizes = net.layer_sizes()
    print(f"wrote {out}: {len(net)} alters, X~ = {net.total_x_tilde:.6f} h, layers {sizes}")
    return EXIT_OK


def _solve_params(st: dict[str, Any]) -> ModelParams:
    return ModelParams(
        avatar_capacity_Y=st["Y"],
        debrief_budget_Z=st["Z"],
        debrief_cap_Zmax=st["zmax"],
        horizon_hours=st["horizon"],
        compression_c=st["compression_c"],
        anthropomorphism_delta=st["delta"],
        gamma_override=st["gamma"],
        default_beta=st["beta"] if st["beta"] is not None else DEFAULT_BETA,
    )


def cmd_solve(st: dict[str, Any]) -> int:
    if not st["network"]:
        raise ConfigError("solve needs --network")
    _require_file(st["network"])
    params = _solve_params(st)
    net = egonet.resolve_network(st["network"])
    if st["beta"] is not None:
        net = net.with_beta(st["beta"])
    plan = solve(AllocationProblem(net, params, allow_empty=True))
    print(plan.summary())
    if st["out"]:
        out = Path(st["out"])
        plan.save(out)
        _write_manifest(out.with_name(out.name + ".manifest.json"), "solve", st)
        print(f"wrote {out}")
    return EXIT_OK


def cmd_sweep(st: dict[str, Any]) -> int:
    if not st["out_dir"]:
        raise ConfigError("sweep needs --out-dir")
    source = st["seed"] if st["seed"] is not None else st["network"]
    if isinstance(source, str):
        _require_file(source)
    net = experiments.load_network(source)
    config = experiments.sweep_config_for(
        net, source, beta=st["beta"], Z=st["Z"], points=st["points"],
        y_multipliers=st["y_multipliers"], gamma_min=st["gamma_min"],
        gamma_max=st["gamma_max"], debrief_cap_Zmax=st["zmax"],
    )
    records = experiments.run_sweep(config, net, verify=st["verify"])
    spare = st["reinvest_spare"]
    if spare is None:
        spare = max((r.spare_time for r in records), default=0.0)
    out_dir = Path(st["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    experiments.export_records(records, out_dir / "sweep.csv")
    experiments.export_reinvestment(experiments.reinvestment_rows(spare), out_dir / "reinvestment.csv")
    _write_manifest(out_dir / "manifest.json", "sweep", st)
    print(f"wrote {len(records)} sweep rows to {out_dir / 'sweep.csv'}")
    if st["verify"]:
        bad = [r for r in records if not r.oracle_ok]
        if bad:
            print(f"oracle mismatch on {len(bad)} of {len(records)} points", file=sys.stderr)
            return EXIT_VERIFY
        print(f"oracle agrees on all {len(records)} points")
    return EXIT_OK


def cmd_verify(st: dict[str, Any]) -> int:
    rep = verify_oracle(int(st["instances"]), int(st["seed"]), int(st["max_n"]))
    print(f"instances: {rep.instances}  failures: {rep.failures}  regimes: {rep.regimes}")
    print(f"worst relative objective gap: {rep.worst_relative_gap:.3e}")
    print(f"worst constraint residual:    {rep.worst_residual:.3e}")
    return EXIT_OK if rep.ok else EXIT_VERIFY


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify}


def _setup_logging() -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(
        int(os.environ.get("AVATARTIME_VERBOSE", "0") or 0), logging.DEBUG
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args.command, args)
        return COMMANDS[args.command](settings)
    except ConfigError as e:
        parser.print_usage(sys.stderr)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParameterError, NetworkError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
