"""Command-line experiment runner.

Subcommands mirror the experiment kinds; every flag can also come from a
flat key=value config file via --config, with flags taking precedence.
Exit codes: 0 success, 2 configuration error, 3 infeasible brute force,
4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

from .exceptions import ConfigError, InfeasibleBruteForceError
from .experiments import (
    RUNNERS,
    ExperimentConfig,
    fmt_float,
    run_rip_probe,
    run_theory_probe,
    write_csv,
    write_manifest,
    write_outputs,
)

_INT_KEYS = {"d", "redundancy", "B", "a", "trials", "master_seed", "min_gap",
             "max_iterations", "workers", "rip_trials"}
_INT_LIST_KEYS = {"k", "m"}
_FLOAT_LIST_KEYS = {"sigma"}
_STR_LIST_KEYS = {"selectors"}
_FLOAT_KEYS = {"epsilon", "success_threshold", "C_k", "C_tilde_2k", "gamma",
               "delta_3zp1k", "delta_zp1k", "delta_3zk", "zeta", "beta",
               "norm_x", "norm_e"}
_STR_KEYS = {"out", "field_convention", "rip_mode"}


def _convert(key: str, raw: str):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _INT_LIST_KEYS:
            return tuple(int(v) for v in raw.split(",") if v != "")
        if key in _FLOAT_LIST_KEYS:
            return tuple(float(v) for v in raw.split(",") if v != "")
        if key in _STR_LIST_KEYS:
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _STR_KEYS:
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
    raise ConfigError(f"unknown config key {key!r}")


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key == "field":
            key = "field_convention"
        values[key] = _convert(key, raw.strip())
    return values


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override")
    p.add_argument("--d", type=int)
    p.add_argument("--redundancy", type=int)
    p.add_argument("--n", type=int, help="atom count; must equal redundancy * d")
    p.add_argument("--B", type=int)
    p.add_argument("--k", type=str, help="sparsity, or comma list for k-sweep")
    p.add_argument("--m", type=str, help="measurement count, or comma list")
    p.add_argument("--sigma", type=str, help="noise level, or comma list")
    p.add_argument("--selector", dest="selectors", type=str,
                   help="comma list: thresholding,omp,eps-omp,bomp,eps-bomp,brute-force")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--a", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--master-seed", dest="master_seed", type=int)
    p.add_argument("--success-threshold", dest="success_threshold", type=float)
    p.add_argument("--min-gap", dest="min_gap", type=int)
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--field", dest="field_convention", choices=["real", "complex"])
    p.add_argument("--workers", type=int)
    p.add_argument("--out", type=str)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sscosamp",
        description="Monte Carlo benchmarks and probes for signal-space greedy recovery",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in ("recovery-rate", "noise-sweep", "k-sweep", "projection-audit"):
        _add_common_flags(sub.add_parser(kind))
    rip = sub.add_parser("rip-probe")
    _add_common_flags(rip)
    rip.add_argument("--rip-mode", dest="rip_mode", choices=["exact", "sampled"])
    rip.add_argument("--rip-trials", dest="rip_trials", type=int)
    theory = sub.add_parser("theory-probe")
    _add_common_flags(theory)
    theory.add_argument("--C-k", dest="C_k", type=float)
    theory.add_argument("--C-tilde-2k", dest="C_tilde_2k", type=float)
    theory.add_argument("--gamma", type=float)
    theory.add_argument("--delta-3zp1k", dest="delta_3zp1k", type=float)
    theory.add_argument("--delta-zp1k", dest="delta_zp1k", type=float)
    theory.add_argument("--delta-3zk", dest="delta_3zk", type=float)
    theory.add_argument("--zeta", type=float)
    theory.add_argument("--beta", type=float)
    theory.add_argument("--norm-x", dest="norm_x", type=float)
    theory.add_argument("--norm-e", dest="norm_e", type=float)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values: dict = {"kind": args.kind}
    if getattr(args, "config", None):
        values.update(_load_config_file(args.config))

    config_fields = {f.name for f in fields(ExperimentConfig)}
    for key, raw in vars(args).items():
        if key in ("kind", "config", "n") or raw is None:
            continue
        if key in ("k", "m", "sigma", "selectors") and isinstance(raw, str):
            values[key] = _convert(key, raw)
        elif key in config_fields:
            values[key] = raw
    config = ExperimentConfig(**values)
    if getattr(args, "n", None) is not None and args.n != config.n:
        raise ConfigError(
            f"n={args.n} inconsistent with redundancy*d={config.n}"
        )
    config.validate()
    return config


def _print_probe(result: dict) -> None:
    for key, val in result.items():
        if isinstance(val, float):
            print(f"{key}={fmt_float(val)}")
        else:
            print(f"{key}={val}")


def _dispatch(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    if config.kind in RUNNERS:
        if config.out is None:
            raise ConfigError(f"{config.kind} requires --out for its CSV")
        result = RUNNERS[config.kind](config)
        for path in write_outputs(result):
            print(f"wrote {path}")
        return 0
    probe = run_rip_probe if config.kind == "rip-probe" else run_theory_probe
    result = probe(config)
    _print_probe(result)
    if config.out is not None:
        out = Path(config.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        cols = list(result.keys())
        row = [fmt_float(v) if isinstance(v, float) else str(v) for v in result.values()]
        write_csv(out, cols, [row])
        write_manifest(config, out)
        print(f"wrote {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleBruteForceError as exc:
        print(f"infeasible brute force: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
