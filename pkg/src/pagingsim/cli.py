"""Command-line front end: one-shot calculators and reproducible sweeps.

Subcommands::

    pagingsim erlang --load 7 --channels 14 --mu 1
    pagingsim markov --pop 5,5
    pagingsim compare --config cfg.txt [--lambdas 0.5,1,2] [--simulate]
                      [--mode mmc|mechanistic] [--interpretation ...]
                      [--seed N] [--out sweep.csv]
    pagingsim simulate --config cfg.txt --lam 2.0 [--seed N] [--out stats.json]

``compare`` emits plot-ready CSV (fixed column order, header mandatory);
every output file is paired with a ``<file>.manifest.json`` recording the
configuration digest, tool version and seed, so identical digest + seed
reproduce identical data rows byte for byte.  Exit codes: 0 success,
2 usage or validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone

from . import __version__
from .config import ConfigError, load_config
from .erlang import QueueParams, queue_metrics
from .markov import SearchDistribution, absorption_probabilities, build_paging_chain, expected_steps
from .simulate import run, sweep

CSV_COLUMNS = [
    "lambda",
    "mu",
    "n_carriers",
    "channels",
    "scenario",
    "interpretation",
    "mode",
    "offered_load",
    "source",
    "p_delay",
    "awa",
    "awd",
    "total_time",
    "pages_per_user",
    "ci_p_delay",
    "ci_awa",
    "ci_awd",
    "ci_t",
    "unstable",
    "seed",
]


@dataclass(frozen=True)
class RunManifest:
    config_digest: str
    tool_version: str
    seed: int
    timestamp: str


def _manifest(resolved: dict, seed: int) -> RunManifest:
    canonical = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return RunManifest(
        config_digest=hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
        tool_version=__version__,
        seed=seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def _emit_manifest(manifest: RunManifest, out_path: str | None):
    payload = json.dumps(asdict(manifest), indent=2) + "\n"
    if out_path is None:
        sys.stderr.write(payload)
    else:
        with open(out_path + ".manifest.json", "w", encoding="utf-8") as handle:
            handle.write(payload)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return str(value)


def _rows_to_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                _cell(row.lam),
                _cell(row.mu),
                _cell(row.n_carriers),
                _cell(row.channels),
                _cell(row.scenario),
                _cell(row.interpretation),
                _cell(row.mode),
                _cell(row.offered_load),
                _cell(row.source),
                _cell(row.p_delay),
                _cell(row.awa),
                _cell(row.awd),
                _cell(row.total_time),
                _cell(row.pages_per_user),
                _cell(row.ci_p_delay),
                _cell(row.ci_awa),
                _cell(row.ci_awd),
                _cell(row.ci_t),
                _cell(row.unstable),
                _cell(row.seed),
            ]
        )
    return buffer.getvalue()


def _write_output(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        return
    tmp_path = out_path + ".tmp"
    try:
        with open(tmp_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_path, out_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"{what} must be a comma-separated list of numbers: {text!r}")
    if not values:
        raise ValueError(f"{what} is empty")
    return values


def cmd_erlang(args) -> int:
    params = QueueParams(
        offered_load=args.load, channels=args.channels, service_rate=args.mu
    )
    metrics = queue_metrics(params)
    print(
        json.dumps(
            {
                "offered_load": params.offered_load,
                "channels": params.channels,
                "mu": params.service_rate,
                "p_delay": metrics.p_delay,
                "awa": metrics.avg_wait_all,
                "awd": metrics.avg_wait_delayed,
                "total_time": metrics.time_in_system,
            }
        )
    )
    return 0


def cmd_markov(args) -> int:
    pops = []
    for part in args.pop.split(","):
        part = part.strip()
        if not part:
            continue
        if not part.isdigit():
            raise ValueError(f"populations must be non-negative integers: {part!r}")
        pops.append(int(part))
    if not pops:
        raise ValueError("no populations given")
    total = sum(pops)
    if total == 0:
        raise ValueError("all populations are zero; no carrier can hold the user")

    ids = sorted(range(1, len(pops) + 1), key=lambda cid: (-pops[cid - 1], cid))
    # zero-population carriers can never hold the user and are never probed
    probed = [cid for cid in ids if pops[cid - 1] > 0]
    dist = SearchDistribution(tuple(pops[cid - 1] / total for cid in probed))
    chain = build_paging_chain(dist)
    print(
        json.dumps(
            {
                "populations": pops,
                "priority_order": ids,
                "expected_steps": float(expected_steps(chain)[0]),
                "absorption_probabilities": [
                    float(x) for x in absorption_probabilities(chain)[0]
                ],
            }
        )
    )
    return 0


def cmd_compare(args) -> int:
    spec = load_config(args.config)
    if args.mode:
        spec = replace(spec, mode=args.mode)
    if args.interpretation:
        interp = args.interpretation
        spec = replace(spec, interpretation="mechanistic-load" if interp == "mechanistic" else interp)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)

    if args.lambdas:
        grid = _parse_float_list(args.lambdas, "--lambdas")
    elif spec.lambda_grid:
        grid = list(spec.lambda_grid)
    else:
        raise ValueError("no arrival-rate grid: give --lambdas or a lambda_grid config key")

    base = spec.sim_config(grid[0], spec.scenarios[0])
    rows = sweep(base, grid, simulate=args.simulate, scenarios=spec.scenarios)
    resolved = spec.resolved_dict()
    resolved["lambda_grid"] = grid
    resolved["simulate"] = bool(args.simulate)
    _write_output(_rows_to_csv(rows), args.out)
    _emit_manifest(_manifest(resolved, spec.seed), args.out)
    return 0


def cmd_simulate(args) -> int:
    spec = load_config(args.config)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.lam is not None:
        lam = args.lam
    elif spec.lambda_grid and len(spec.lambda_grid) == 1:
        lam = spec.lambda_grid[0]
    else:
        raise ValueError("give --lam (or a single-entry lambda_grid) for a direct run")

    results = []
    for scenario in spec.scenarios:
        cfg = spec.sim_config(lam, scenario)
        stats = run(cfg)
        entry = {"lambda": lam, "scenario": scenario, "mode": spec.mode}
        entry.update(
            {
                k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in asdict(stats).items()
            }
        )
        results.append(entry)
    resolved = spec.resolved_dict()
    resolved["lambda"] = lam
    _write_output(json.dumps(results, indent=2) + "\n", args.out)
    _emit_manifest(_manifest(resolved, spec.seed), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagingsim",
        description="Paging-channel cost and queueing analysis for multi-carrier systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_erlang = sub.add_parser("erlang", help="delay metrics for one M/M/C point")
    p_erlang.add_argument("--load", type=float, required=True, help="offered load A, erlangs")
    p_erlang.add_argument("--channels", type=int, required=True, help="parallel channels C")
    p_erlang.add_argument("--mu", type=float, required=True, help="service rate")
    p_erlang.set_defaults(func=cmd_erlang)

    p_markov = sub.add_parser("markov", help="expected paging cost for given populations")
    p_markov.add_argument(
        "--pop", required=True, help="comma-separated per-carrier user counts, e.g. 5,5"
    )
    p_markov.set_defaults(func=cmd_markov)

    p_compare = sub.add_parser("compare", help="analytic/simulated sweep over arrival rates")
    p_compare.add_argument("--config", required=True, help="configuration file (text or JSON)")
    p_compare.add_argument("--lambdas", help="override arrival-rate grid, e.g. 0.5,1,2")
    p_compare.add_argument("--simulate", action="store_true", help="add simulated rows")
    p_compare.add_argument("--mode", choices=["mmc", "mechanistic"], help="simulation fidelity")
    p_compare.add_argument(
        "--interpretation",
        choices=["literal", "mechanistic-load", "mechanistic"],
        help="scenario-to-queue mapping",
    )
    p_compare.add_argument("--seed", type=int, help="override the config seed")
    p_compare.add_argument("--out", help="CSV path (default: standard output)")
    p_compare.set_defaults(func=cmd_compare)

    p_sim = sub.add_parser("simulate", help="single simulation run per scenario")
    p_sim.add_argument("--config", required=True, help="configuration file (text or JSON)")
    p_sim.add_argument("--lam", type=float, help="arrival rate for the run")
    p_sim.add_argument("--seed", type=int, help="override the config seed")
    p_sim.add_argument("--out", help="JSON path (default: standard output)")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # anything else is a bug, not bad input
        sys.stderr.write(f"internal error: {exc!r}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
