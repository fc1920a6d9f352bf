"""Batch command line front end: each subcommand emits one CSV table.

Flags mirror a flat key=value config file (--config); explicit flags win.
All output is deterministic for fixed flags, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import sys

from .channel import NetworkConfig
from .errors import ConfigurationError
from .experiments import (
    ExperimentSpec,
    calibrate_power,
    render_csv,
    run_bounds_experiment,
    run_pa_profile,
    run_power_rate_region,
    run_pso_alpha_sweep,
    run_selection_sweep,
)

_SLOT_DEFAULTS = {
    "calibrate": 500,
    "bounds": 10000,
    "selection": 5000,
    "pso": 5000,
    "pso-pa": 2000,
    "region": 5000,
}

_PA_PROFILE_5 = (0.05, 0.2, 0.35, 0.5, 0.65)

_CONFIG_KEYS = {
    "users": int,
    "tx-antennas": int,
    "rx-antennas": int,
    "snr-db": float,
    "slots": int,
    "seed": int,
    "alpha": str,
    "alpha-grid": int,
    "id-users": int,
    "eh-users": int,
    "mode": str,
    "out": str,
    "restarts": int,
    "leak-tol": float,
    "cal-slots": int,
    "user": int,
}


def _read_config(path: str) -> dict:
    """Parse a flat key=value file; keys match the long flag names."""
    data: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ConfigurationError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                data[key] = _CONFIG_KEYS[key](value.strip())
            except ValueError as exc:
                raise ConfigurationError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swipt-ia",
        description="Monte Carlo experiments for power-splitting receivers in "
        "interference-aligned networks; results are printed as CSV.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file supplying flag defaults")
    common.add_argument("--users", type=int, help="number of transmitter-receiver pairs (default 5)")
    common.add_argument("--tx-antennas", type=int, help="antennas per transmitter (default 3)")
    common.add_argument("--rx-antennas", type=int, help="antennas per receiver (default 3)")
    common.add_argument("--snr-db", type=float, help="target average received SNR in dB (default 10)")
    common.add_argument("--slots", type=int, help="number of evaluation slots")
    common.add_argument("--seed", type=int, help="base seed for all random streams (default 0)")
    common.add_argument("--mode", choices=("inst", "expected"), help="field statistic (default inst)")
    common.add_argument("--out", help="output CSV path (default stdout)")
    common.add_argument("--restarts", type=int, help="allocator restarts (default 8)")
    common.add_argument("--leak-tol", type=float, help="alignment leakage tolerance (default 1e-8)")
    common.add_argument("--cal-slots", type=int, help="calibration slots (default 500)")

    sub.add_parser("calibrate", parents=[common], help="solve for the transmit power hitting --snr-db")

    p_bounds = sub.add_parser("bounds", parents=[common], help="harvest vs analytic ceiling per slot")
    p_bounds.add_argument("--user", type=int, help="receiver index to track, 1-based (default 1)")

    p_sel = sub.add_parser("selection", parents=[common], help="round-robin vs ratio-ranked harvester selection")
    grp = p_sel.add_mutually_exclusive_group()
    grp.add_argument("--id-users", type=int, help="restrict sweep to this decoder count")
    grp.add_argument("--eh-users", type=int, help="restrict sweep to this harvester count")

    p_pso = sub.add_parser("pso", parents=[common], help="closed-form splitting sweep at equal power")
    p_pso.add_argument("--alpha", help="rate weight: scalar, or K comma-separated per-user values")
    p_pso.add_argument("--alpha-grid", type=int, help="uniform alpha grid size when --alpha is absent (default 21)")

    p_pa = sub.add_parser("pso-pa", parents=[common], help="joint splitting and power allocation per user")
    p_pa.add_argument("--alpha", help="rate weight profile: scalar or K comma-separated values")

    p_reg = sub.add_parser("region", parents=[common], help="power-rate frontier of all four strategies")
    p_reg.add_argument("--alpha-grid", type=int, help="uniform alpha grid size (default 21)")
    grp = p_reg.add_mutually_exclusive_group()
    grp.add_argument("--id-users", type=int, help="restrict selection rows to this decoder count")
    grp.add_argument("--eh-users", type=int, help="restrict selection rows to this harvester count")
    return parser


class _Settings:
    """Flag values merged over config-file values merged over defaults."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file = _read_config(args.config) if args.config else {}

    def get(self, key: str, default=None):
        cli = getattr(self.args, key.replace("-", "_"), None)
        if cli is not None:
            return cli
        if key in self.file:
            return self.file[key]
        return default


def _parse_alpha_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"bad --alpha value {text!r}: {exc}") from exc
    return values


def _network(settings: _Settings) -> NetworkConfig:
    return NetworkConfig(
        K=settings.get("users", 5),
        M=settings.get("tx-antennas", 3),
        N=settings.get("rx-antennas", 3),
    )


def _spec(settings: _Settings, command: str, **overrides) -> ExperimentSpec:
    cfg = _network(settings)
    L = None
    eh = settings.get("eh-users")
    idc = settings.get("id-users")
    if eh is not None and idc is not None:
        raise ConfigurationError("give at most one of id-users and eh-users")
    if eh is not None:
        L = int(eh)
    elif idc is not None:
        L = cfg.K - int(idc)
    if L is not None and not 0 <= L <= cfg.K:
        raise ConfigurationError(f"harvester count must lie in 0..{cfg.K}, got {L}")

    fields = dict(
        name=command,
        cfg=cfg,
        slots=settings.get("slots", _SLOT_DEFAULTS[command]),
        seed=settings.get("seed", 0),
        snr_db=settings.get("snr-db", 10.0),
        mode=settings.get("mode", "inst"),
        l_grid=(L,) if L is not None else None,
        user=settings.get("user", 1),
        cal_slots=settings.get("cal-slots", 500),
        restarts=settings.get("restarts", 8),
        leak_tol=settings.get("leak-tol", 1e-8),
    )
    fields.update(overrides)
    return ExperimentSpec(**fields)


def _alpha_fields(settings: _Settings, cfg_K: int, command: str) -> dict:
    """Resolve --alpha/--alpha-grid into spec sweep fields per subcommand."""
    raw = settings.get("alpha")
    grid_n = settings.get("alpha-grid")
    if command == "pso":
        if raw is not None:
            values = _parse_alpha_list(str(raw))
            if len(values) == 1:
                return {"alpha_grid": values}
            if len(values) == cfg_K:
                return {"alpha_profile": values}
            raise ConfigurationError(
                f"--alpha needs 1 or {cfg_K} comma-separated values, got {len(values)}"
            )
        if grid_n is not None:
            return {"alpha_grid": tuple(float(x) for x in _linspace01(grid_n))}
        return {}
    if command == "pso-pa":
        if raw is not None:
            values = _parse_alpha_list(str(raw))
            if len(values) == 1:
                return {"alpha_profile": values * cfg_K}
            if len(values) == cfg_K:
                return {"alpha_profile": values}
            raise ConfigurationError(
                f"--alpha needs 1 or {cfg_K} comma-separated values, got {len(values)}"
            )
        if cfg_K == len(_PA_PROFILE_5):
            return {"alpha_profile": _PA_PROFILE_5}
        raise ConfigurationError(f"give --alpha with {cfg_K} values for this network size")
    # region
    if grid_n is not None:
        return {"alpha_grid": tuple(float(x) for x in _linspace01(grid_n))}
    return {}


def _linspace01(n: int) -> list[float]:
    if n < 2:
        raise ConfigurationError("alpha-grid needs at least 2 points")
    return [i / (n - 1) for i in range(n)]


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _Settings(args)
        command = args.command
        if command == "calibrate":
            cfg = _network(settings)
            snr_db = settings.get("snr-db", 10.0)
            slots = settings.get("slots", _SLOT_DEFAULTS[command])
            seed = settings.get("seed", 0)
            P_t = calibrate_power(cfg, snr_db, seed, slots)
            text = render_csv(["snr_db", "slots", "seed", "P_t"], [(snr_db, slots, seed, P_t)])
        elif command == "bounds":
            header, rows = run_bounds_experiment(_spec(settings, command))
            text = render_csv(header, rows)
        elif command == "selection":
            header, rows = run_selection_sweep(_spec(settings, command))
            text = render_csv(header, rows)
        elif command == "pso":
            spec = _spec(settings, command, **_alpha_fields(settings, _network(settings).K, command))
            header, rows = run_pso_alpha_sweep(spec)
            text = render_csv(header, rows)
        elif command == "pso-pa":
            spec = _spec(settings, command, **_alpha_fields(settings, _network(settings).K, command))
            header, rows = run_pa_profile(spec)
            text = render_csv(header, rows)
        else:
            spec = _spec(settings, command, **_alpha_fields(settings, _network(settings).K, command))
            header, rows = run_power_rate_region(spec)
            text = render_csv(header, rows)
        _emit(text, settings.get("out"))
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
