"""Command-line entry point: run / sweep / analyze subcommands.

Configuration comes from an optional flat JSON file plus flag overrides
(flags win).  Outputs are stable files: rounds.csv, report.json, sweep.csv.
Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import security_region
from .attacks import AttackKind, AttackStrategy
from .harness import (
    ExperimentConfig,
    dump_json,
    run_experiment,
    sweep_security_grid,
)
from .protocol import ProtocolParams, gamma_threshold

DEFAULT_T_GRID = "0.5,0.6,0.7,0.8,0.9,1.0"
DEFAULT_U_GRID = "0.0,0.06,0.12,0.18,0.24"

_CONFIG_KEYS = {
    "sigma": float,
    "t": float,
    "u": float,
    "n": int,
    "eps_hon": float,
    "trials": int,
    "seed": int,
    "attack": str,
    "out": str,
    "zeta_epr": float,
    "max_csv_rounds": int,
    "t_grid": str,
    "u_grid": str,
}

_ATTACK_NAMES = ("honest", "heterodyne", "splitting", "guessed-angle", "epr")


class CliValidationError(Exception):
    """Bad flag, config key, or parameter value."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route that through the
    # validation path instead (exit 1), keeping 2 for I/O failures
    def error(self, message):
        raise CliValidationError(message)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", type=str, help="flat JSON config file")
    sub.add_argument("--sigma", type=float, help="Gaussian modulation std dev")
    sub.add_argument("--t", type=float, help="channel transmittance in (0, 1]")
    sub.add_argument("--u", type=float, help="channel excess noise, u >= 0")
    sub.add_argument("--n", type=int, help="rounds per trial")
    sub.add_argument("--eps-hon", type=float, dest="eps_hon", help="honest failure budget")
    sub.add_argument("--trials", type=int, help="number of trials")
    sub.add_argument("--seed", type=int, help="64-bit experiment seed")
    sub.add_argument("--attack", type=str, choices=_ATTACK_NAMES, help="scenario")
    sub.add_argument("--out", type=str, help="output directory")
    sub.add_argument("--zeta-epr", type=float, dest="zeta_epr", help="EPR attack squeezing")
    sub.add_argument(
        "--max-csv-rounds",
        type=int,
        dest="max_csv_rounds",
        help="cap on rounds written to rounds.csv",
    )
    sub.add_argument("--dump-config", type=str, help="write the effective config to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvqpv", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)
    run = commands.add_parser("run", help="Monte Carlo run of one scenario")
    _add_common(run)
    sweep = commands.add_parser("sweep", help="honest/attack acceptance over a (t, u) grid")
    _add_common(sweep)
    sweep.add_argument("--t-grid", type=str, dest="t_grid", help="comma-separated t values")
    sweep.add_argument("--u-grid", type=str, dest="u_grid", help="comma-separated u values")
    analyze = commands.add_parser("analyze", help="closed-form security numbers for (t, u)")
    _add_common(analyze)
    return parser


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliValidationError(f"malformed JSON in config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CliValidationError(f"config file {path} must contain a JSON object")
    for key, value in data.items():
        if key not in _CONFIG_KEYS:
            raise CliValidationError(f"unknown config key '{key}'")
        try:
            data[key] = _CONFIG_KEYS[key](value)
        except (TypeError, ValueError):
            raise CliValidationError(f"config key '{key}' has invalid value {value!r}")
    return data


def effective_config(args: argparse.Namespace) -> dict:
    """Merge defaults, config file, environment seed, and flag overrides."""
    cfg = {
        "sigma": 100.0,
        "t": 1.0,
        "u": 0.0,
        "n": 1000,
        "eps_hon": 1e-3,
        "trials": 100,
        "seed": int(os.environ.get("CVQPV_SEED", "0")),
        "attack": "honest",
        "out": "out",
        "zeta_epr": 6.0,
        "max_csv_rounds": 100_000,
        "t_grid": DEFAULT_T_GRID,
        "u_grid": DEFAULT_U_GRID,
    }
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if cfg["attack"] not in _ATTACK_NAMES:
        raise CliValidationError(f"attack must be one of {_ATTACK_NAMES}, got '{cfg['attack']}'")
    return cfg


def _parse_grid(text: str, name: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise CliValidationError(f"{name} must be a comma-separated list of numbers")
    if not values:
        raise CliValidationError(f"{name} must not be empty")
    return values


def _build_experiment(cfg: dict) -> ExperimentConfig:
    params = ProtocolParams(
        sigma=cfg["sigma"], n_rounds=cfg["n"], epsilon_hon=cfg["eps_hon"], t=cfg["t"], u=cfg["u"]
    )
    strategy = None
    if cfg["attack"] != "honest":
        strategy = AttackStrategy(kind=AttackKind(cfg["attack"]), zeta_epr=cfg["zeta_epr"])
    return ExperimentConfig(
        params=params,
        strategy=strategy,
        trials=cfg["trials"],
        seed=cfg["seed"],
        max_csv_rounds=cfg["max_csv_rounds"],
    )


def _cmd_run(cfg: dict) -> int:
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    experiment = _build_experiment(cfg)
    experiment = ExperimentConfig(
        params=experiment.params,
        strategy=experiment.strategy,
        trials=experiment.trials,
        seed=experiment.seed,
        rounds_csv=out_dir / "rounds.csv",
        report_json=out_dir / "report.json",
        max_csv_rounds=experiment.max_csv_rounds,
    )
    report = run_experiment(experiment)
    print(
        f"{report.scenario}: acceptance {report.acceptance_rate:.4f} "
        f"(score mean {report.score_mean:.4f}, gamma {report.gamma:.4f}); "
        f"outputs in {out_dir}"
    )
    for check in report.checks:
        status = "ok" if check["passed"] else "FAILED"
        print(f"  check {check['name']}: {status}")
    return 0


def _cmd_sweep(cfg: dict) -> int:
    out_dir = Path(cfg["out"])
    out_dir.mkdir(parents=True, exist_ok=True)
    experiment = _build_experiment(cfg)
    t_grid = _parse_grid(cfg["t_grid"], "t_grid")
    u_grid = _parse_grid(cfg["u_grid"], "u_grid")
    rows = sweep_security_grid(t_grid, u_grid, experiment, sweep_csv=out_dir / "sweep.csv")
    print(f"swept {len(rows)} grid points; wrote {out_dir / 'sweep.csv'}")
    return 0


def _cmd_analyze(cfg: dict) -> int:
    params = ProtocolParams(
        sigma=cfg["sigma"], n_rounds=cfg["n"], epsilon_hon=cfg["eps_hon"], t=cfg["t"], u=cfg["u"]
    )
    verdict = security_region(params.t, params.u)
    payload = {
        "t": params.t,
        "u": params.u,
        "sigma": params.sigma,
        "region": verdict.region.value,
        "entropy_gap_bits": verdict.entropy_gap_bits,
        "honest_mse": verdict.honest_mse,
        "attacker_mse_floor": verdict.attacker_mse_floor,
        "gamma": {
            "n": params.n_rounds,
            "eps_hon": params.epsilon_hon,
            "value": gamma_threshold(params.n_rounds, params.epsilon_hon),
        },
    }
    print(dump_json(payload))
    return 0


def parse_and_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = effective_config(args)
        if getattr(args, "dump_config", None):
            Path(args.dump_config).write_text(dump_json(cfg) + "\n")
        if args.command == "run":
            return _cmd_run(cfg)
        if args.command == "sweep":
            return _cmd_sweep(cfg)
        return _cmd_analyze(cfg)
    except (CliValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
