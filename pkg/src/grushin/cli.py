"""Batch experiment runner behind flat, diff-friendly configuration files.

Config format: UTF-8 text, one ``section.key = value`` entry per line, blank
lines and ``#`` comment lines ignored.  Values are JSON fragments (numbers,
strings, booleans, lists); a bare word parses as a string.  Every kind fills
unset keys from its defaults and echoes the fully resolved configuration, so
a report is reproducible from its own header alone.

Exit codes: 0 success; 2 invalid configuration (the message names the
offending field); 3 truncation or aliasing violation with diagnostics.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .errors import AliasingError, ConfigError, DomainError, TruncationError
from .lab.experiments import (
    ExperimentResult,
    bochner_riesz_sweep,
    distance_table,
    geometry_suite,
    heat_gaussian_check,
    kernel_support_suite,
    localized_restriction_experiment,
    multiplier_norm_experiment,
    weighted_restriction_experiment,
)
from .lab.reports import rows_to_csv

__all__ = ["main", "run_config", "parse_config_text", "CATALOG"]


# ---------------------------------------------------------------------------
# catalog: every experiment kind, its defaults, and what it verifies

_COMMON_KEYS = {
    "seed": 0,
    "output.dir": "runs",
}

CATALOG: Dict[str, dict] = {
    "weighted_restriction": {
        "verifies": "norms of |x'|^gamma-weighted spectral bands grow as "
                    "R^((2 d2 + d1)(1/p - 1/2) - gamma)",
        "params": {
            "dims.d1": 2, "dims.d2": 1,
            "experiment.p": 1.0, "experiment.gamma": 0.0,
            "experiment.radii": [4.0, 8.0, 16.0, 32.0],
            "experiment.n_scan": 97,
            "grid.S": math.pi,
            "truncation.k_max": 4000,
        },
    },
    "localized_restriction": {
        "verifies": "band norms on inputs confined to a small metric ball "
                    "scale as R^((d2 + d1)(1/p - 1/2)) times "
                    "|y'|^(gamma - d2 (1/p - 1/2))",
        "params": {
            "dims.d1": 2, "dims.d2": 1,
            "experiment.p": 1.0, "experiment.gamma": 0.25,
            "experiment.radii": [8.0, 16.0, 32.0],
            "experiment.y_values": [1.5, 3.0, 6.0],
            "experiment.ball_radius": 0.1875,
            "experiment.y_fix": None, "experiment.r_fix": None,
            "experiment.n_scan": 17,
            "grid.S": math.pi,
            "truncation.k_max": 4000,
        },
    },
    "bochner_riesz": {
        "verifies": "uniform boundedness of the means (1 - L/R^2)_+^delta "
                    "above the critical exponent and blow-up below it",
        "params": {
            "dims.d1": 2, "dims.d2": 1,
            "experiment.p": 1.0,
            "experiment.deltas": [1.5, 0.2],
            "experiment.radii": [4.0, 8.0, 16.0, 32.0, 64.0],
            "experiment.points_per_wavelength": 4.0,
            "grid.S": math.pi / 2.0,
        },
    },
    "multiplier_norm": {
        "verifies": "norms of the dilated family F(t L) stay within a fixed "
                    "multiple of a Sobolev norm of the profile, uniformly in t",
        "params": {
            "dims.d1": 2, "dims.d2": 1,
            "experiment.p": 1.0,
            "experiment.sobolev_orders": [2.0],
            "experiment.t_values": [2.0 ** k for k in range(-4, 5)],
            "grid.S": math.pi / 2.0,
        },
    },
    "heat_gaussian": {
        "verifies": "Gaussian-type decay of the heat kernel in the "
                    "quasi-distance with volume-normalized on-diagonal values",
        "params": {
            "dims.d1": 2, "dims.d2": 1,
            "experiment.times": [0.05, 0.1, 0.2],
            "grid.S": 12.0,
        },
    },
    "kernel_support": {
        "verifies": "kernel columns of dyadic wave pieces keep at least 99% "
                    "of their mass inside the propagation radius",
        "params": {
            "experiment.levels": [0, 1, 2],
            "experiment.times": [1.0, 1.0, 0.5],
            "experiment.kappas": [1.1, 1.5, 2.0],
            "grid.X": 22.0, "grid.n_prime": 256,
            "grid.S": 6.0, "grid.n_second": 128,
            "truncation.k_max": 64, "truncation.lambda_max": 64.0,
        },
    },
    "geometry_suite": {
        "verifies": "quasi-metric measure structure: branch-interface "
                    "continuity, quasi-triangle constant, ball-volume model "
                    "comparability, and doubling growth",
        "params": {
            "experiment.n_triples": 100000,
            "experiment.mc_samples": 1000000,
        },
    },
    "distance_table": {
        "verifies": "explicit quasi-distance values for chosen point pairs",
        "params": {
            "experiment.pairs": None,  # required: [[x', x'', y', y''], ...]
        },
    },
}

# keys whose value may not stay None after resolution, per kind
_REQUIRED = {"distance_table": ("experiment.pairs",)}


# ---------------------------------------------------------------------------
# configuration parsing and resolution

def parse_config_text(text: str) -> Dict[str, object]:
    """Parse ``key = value`` lines into a flat dict of dotted keys."""
    out: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or any(not part.isidentifier() for part in key.split(".")):
            raise ConfigError(f"line {lineno}", f"malformed key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}", f"duplicate key {key!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value  # bare word: a plain string
    return out


def _resolve(raw: Dict[str, object]) -> Dict[str, object]:
    """Fill defaults for the configured kind; reject unknown or missing keys."""
    if "experiment.kind" not in raw:
        raise ConfigError("experiment.kind", "missing required field")
    kind = raw["experiment.kind"]
    if kind not in CATALOG:
        raise ConfigError(
            "experiment.kind",
            f"unknown kind {kind!r}; choose from {', '.join(CATALOG)}")
    resolved: Dict[str, object] = {"experiment.kind": kind}
    resolved.update(_COMMON_KEYS)
    resolved.update(CATALOG[kind]["params"])
    for key, value in raw.items():
        if key != "experiment.kind" and key not in resolved:
            raise ConfigError(key, f"not a parameter of kind {kind!r}")
        resolved[key] = value
    for key in _REQUIRED.get(kind, ()):
        if resolved[key] is None:
            raise ConfigError(key, "missing required field")
    if not isinstance(resolved["seed"], int) or isinstance(resolved["seed"], bool):
        raise ConfigError("seed", "expected an integer")
    return resolved


def _format_value(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return json.dumps(list(value))
    return str(value)


def config_lines(resolved: Dict[str, object]) -> List[str]:
    return [f"{key} = {_format_value(value)}"
            for key, value in sorted(resolved.items())]


def _pairs_from_config(value) -> list:
    pairs = []
    if not isinstance(value, list) or not value:
        raise ConfigError("experiment.pairs", "expected a non-empty list "
                          "of [x', x'', y', y''] quadruples")
    for item in value:
        if (not isinstance(item, list) or len(item) != 4
                or any(not isinstance(part, list) for part in item)):
            raise ConfigError("experiment.pairs", "each entry must be "
                              "[x', x'', y', y''] with list-valued parts")
        xp, xs, yp, ys = item
        pairs.append(((tuple(xp), tuple(xs)), (tuple(yp), tuple(ys))))
    return pairs


def _dispatch(resolved: Dict[str, object]) -> ExperimentResult:
    kind = resolved["experiment.kind"]
    g = resolved.get
    if kind == "weighted_restriction":
        return weighted_restriction_experiment(
            dims=(g("dims.d1"), g("dims.d2")),
            p=g("experiment.p"), gamma=g("experiment.gamma"),
            radii=g("experiment.radii"),
            torus_half_period=g("grid.S"),
            k_max=g("truncation.k_max"),
            n_scan=g("experiment.n_scan"))
    if kind == "localized_restriction":
        return localized_restriction_experiment(
            dims=(g("dims.d1"), g("dims.d2")),
            p=g("experiment.p"), gamma=g("experiment.gamma"),
            radii=g("experiment.radii"),
            y_values=g("experiment.y_values"),
            ball_radius=g("experiment.ball_radius"),
            torus_half_period=g("grid.S"),
            k_max=g("truncation.k_max"),
            n_scan=g("experiment.n_scan"),
            y_fix=g("experiment.y_fix"),
            r_fix=g("experiment.r_fix"))
    if kind == "bochner_riesz":
        return bochner_riesz_sweep(
            dims=(g("dims.d1"), g("dims.d2")),
            p=g("experiment.p"),
            deltas=g("experiment.deltas"), radii=g("experiment.radii"),
            torus_half_period=g("grid.S"),
            points_per_wavelength=g("experiment.points_per_wavelength"))
    if kind == "multiplier_norm":
        return multiplier_norm_experiment(
            dims=(g("dims.d1"), g("dims.d2")),
            p=g("experiment.p"),
            sobolev_orders=g("experiment.sobolev_orders"),
            t_values=g("experiment.t_values"),
            torus_half_period=g("grid.S"))
    if kind == "heat_gaussian":
        return heat_gaussian_check(
            dims=(g("dims.d1"), g("dims.d2")),
            times=g("experiment.times"),
            torus_half_period=g("grid.S"))
    if kind == "kernel_support":
        levels = g("experiment.levels")
        times = g("experiment.times")
        if (not isinstance(levels, list) or not isinstance(times, list)
                or len(levels) != len(times)):
            raise ConfigError("experiment.levels",
                              "levels and times must be lists of equal length")
        return kernel_support_suite(
            level_times=tuple(zip(levels, times)),
            kappas=g("experiment.kappas"),
            prime_extent=g("grid.X"), n_prime=g("grid.n_prime"),
            torus_half_period=g("grid.S"), n_second=g("grid.n_second"),
            k_max=g("truncation.k_max"), lambda_max=g("truncation.lambda_max"))
    if kind == "geometry_suite":
        return geometry_suite(
            seed=g("seed"),
            n_triples=g("experiment.n_triples"),
            mc_samples=g("experiment.mc_samples"))
    if kind == "distance_table":
        return distance_table(_pairs_from_config(g("experiment.pairs")))
    raise ConfigError("experiment.kind", f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# report writing

def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _next_run_dir(base: Path) -> Path:
    base.mkdir(parents=True, exist_ok=True)
    index = 1
    while True:
        candidate = base / f"run-{index:04d}"
        try:
            candidate.mkdir(exist_ok=False)
            return candidate
        except FileExistsError:
            index += 1


def run_config(resolved: Dict[str, object], out_dir: Path) -> Path:
    """Execute the resolved configuration; write report files; return the dir."""
    result = _dispatch(resolved)
    run_dir = _next_run_dir(out_dir)
    csv_text = rows_to_csv(result.header, result.rows)
    (run_dir / "report.csv").write_text(csv_text, encoding="utf-8",
                                        newline="\n")
    certificates = sorted({str(row[-1]) for row in result.rows
                           if result.header and result.header[-1] == "certificate"})
    document = {
        "kind": result.kind,
        "version": __version__,
        "seed": resolved["seed"],
        "config": _jsonable(resolved),
        "summary": _jsonable(result.summary),
        "certificates": certificates,
    }
    (run_dir / "report.json").write_text(
        json.dumps(document, indent=2, sort_keys=True) + "\n",
        encoding="utf-8", newline="\n")
    return run_dir


# ---------------------------------------------------------------------------
# commands

def _cmd_list() -> int:
    for kind, entry in CATALOG.items():
        print(kind)
        print(f"  verifies: {entry['verifies']}")
        print("  parameters:")
        required = _REQUIRED.get(kind, ())
        for key, default in entry["params"].items():
            shown = "(required)" if key in required else _format_value(default)
            print(f"    {key} = {shown}")
        for key, default in _COMMON_KEYS.items():
            print(f"    {key} = {_format_value(default)}")
        print()
    return 0


def _cmd_run(config_path: str, seed: Optional[int], out: Optional[str],
             threads: int) -> int:
    if threads < 1:
        raise ConfigError("--threads", "must be a positive integer")
    # experiment configurations are cheap to schedule serially; a thread
    # count above one is accepted for interface stability and run serially
    path = Path(config_path)
    if not path.is_file():
        raise ConfigError("config", f"file not found: {config_path}")
    resolved = _resolve(parse_config_text(path.read_text(encoding="utf-8")))
    if seed is not None:
        resolved["seed"] = seed
    if out is not None:
        resolved["output.dir"] = out
    for line in config_lines(resolved):
        print(line)
    run_dir = run_config(resolved, Path(str(resolved["output.dir"])))
    print(f"report written to {run_dir}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="grushin-lab",
        description="run spectral-estimate experiments from config files")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute one experiment config")
    run_p.add_argument("config", help="path to a flat key = value config file")
    run_p.add_argument("--seed", type=int, default=None,
                       help="override the config seed")
    run_p.add_argument("--out", default=None,
                       help="override the output directory")
    run_p.add_argument("--threads", type=int, default=1,
                       help="worker budget (scheduling is serial)")
    sub.add_parser("list", help="print the experiment catalog")
    args = parser.parse_args(argv)

    try:
        if args.command == "list":
            return _cmd_list()
        return _cmd_run(args.config, args.seed, args.out, args.threads)
    except (TruncationError, AliasingError) as exc:
        print(f"resolution violation ({type(exc).__name__}): {exc}",
              file=sys.stderr)
        return 3
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
