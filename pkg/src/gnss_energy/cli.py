"""Command-line frontend: ``gnss-energy {generate,run,compare,energy}``.

Exit status: 0 success, 2 usage error, 3 unreadable or invalid input
file, 4 run failure (no epoch produced a fix).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from .energy import Procedure, OperatingPoint, load_profile, total_power
from .errors import InvalidOperatingPointError
from .gdop import SelectionConfig
from .sim.report import (
    compare_policies,
    comparison_table_csv,
    dumps_summary,
    epochs_csv,
    summary_dict,
    trajectory_csv,
    write_atomic,
)
from .sim.runner import RunFailedError, TrackingPolicy, run_scenario
from .sim.scenario import OutageModel, default_scenario, dumps_scenario, load_scenario

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_RUN_FAILED = 4


class _InputError(Exception):
    pass


def _parse_seeds(text: str) -> list[int]:
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1) if not part.startswith("-") else (part, part)
            seeds.extend(range(int(lo), int(hi) + 1))
        else:
            seeds.append(int(part))
    if not seeds:
        raise argparse.ArgumentTypeError("empty seed list")
    return seeds


def _policy(token: str, args) -> TrackingPolicy:
    kind, _, size = token.partition(":")
    cfg = SelectionConfig(gdop_gap_threshold=args.gdop_threshold, altitude_aided=args.altitude_aided)
    subset = int(size) if size else args.subset_size
    return TrackingPolicy(kind, cfg, subset, args.reselection_period)


def _load_inputs(args):
    try:
        scenario = load_scenario(args.scenario)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"cannot read scenario {args.scenario}: {exc}") from exc
    try:
        params = load_profile(args.profile)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"cannot read energy profile {args.profile}: {exc}") from exc
    if args.rate is not None:
        scenario = replace(scenario, update_rate=args.rate)
    return scenario, params


def cmd_generate(args) -> int:
    outage = None
    if args.outage_up is not None or args.outage_down is not None:
        outage = OutageModel(args.outage_up or 600.0, args.outage_down or 20.0)
    scenario = default_scenario(
        duration=args.duration, speed=args.speed / 3.6, satellite_count=args.satellites,
        seed=args.seed, update_rate=args.rate or 1.0, sigma=args.sigma,
        lat_deg=args.lat, lon_deg=args.lon, outage=outage,
    )
    text = dumps_scenario(scenario)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args) -> int:
    scenario, params = _load_inputs(args)
    if args.seed is not None:
        scenario = scenario.with_seed(args.seed)
    report = run_scenario(scenario, _policy(args.policy, args), params)
    csv_text = epochs_csv(report, params, scenario.update_rate)
    summary = dumps_summary(summary_dict(report, params.name))
    if args.out_dir:
        out = Path(args.out_dir)
        stem = f"{report.policy}_seed{report.seed}"
        write_atomic(out / f"{stem}_epochs.csv", csv_text)
        write_atomic(out / f"{stem}_summary.json", summary)
    if args.format == "csv" and not args.out_dir:
        sys.stdout.write(csv_text)
    elif args.format == "summary" or not args.out_dir:
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_compare(args) -> int:
    scenario, params = _load_inputs(args)
    policies = [_policy(p, args) for p in args.policy]
    if len(policies) < 2:
        raise argparse.ArgumentTypeError("compare needs at least two --policy values")
    summary = compare_policies(scenario, args.seeds, policies, params, jobs=args.jobs)
    text = dumps_summary(summary.to_dict())
    table = comparison_table_csv(summary)
    if args.out_dir:
        out = Path(args.out_dir)
        write_atomic(out / "compare_summary.json", text)
        write_atomic(out / "accuracy_energy.csv", table)
        for key, reports in summary.reports.items():
            write_atomic(out / f"trajectory_{key.replace('#', '_')}.csv", trajectory_csv(reports))
    sys.stdout.write(table if args.format == "csv" else text)
    return EXIT_OK


def cmd_energy(args) -> int:
    try:
        params = load_profile(args.profile)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"cannot read energy profile {args.profile}: {exc}") from exc
    bd = total_power(params, OperatingPoint(args.satellites, args.rate))
    rows = [(p.value, getattr(bd, p.value)) for p in Procedure] + [("idle", bd.idle)]
    if args.format == "csv":
        sys.stdout.write("procedure,power_mw,share\n")
        for name, mw in rows:
            sys.stdout.write(f"{name},{mw!r},{mw / bd.total!r}\n")
        sys.stdout.write(f"total,{bd.total!r},1.0\n")
    else:
        print(f"profile {params.name}  N={args.satellites}  f={args.rate:g} Hz")
        for name, mw in rows:
            print(f"  {name:<12}{mw:10.3f} mW  {100 * mw / bd.total:5.1f}%")
        print(f"  {'total':<12}{bd.total:10.3f} mW")
    return EXIT_OK


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _rate(text: str) -> float:
    v = float(text)
    if not 1.0 <= v <= 10.0:
        raise argparse.ArgumentTypeError(f"rate must be in [1, 10] Hz, got {v}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def _policy_token(text: str) -> str:
    kind, _, size = text.partition(":")
    if kind not in ("full", "selective", "random") or (size and not size.isdigit()):
        raise argparse.ArgumentTypeError(f"unknown policy {text!r}; use full, selective, random or random:N")
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gnss-energy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic scenario file")
    g.add_argument("--duration", type=_positive_float, default=600.0, help="seconds (default 600)")
    g.add_argument("--speed", type=float, default=60.0, help="vehicle speed in km/h (default 60)")
    g.add_argument("--satellites", type=_positive_int, default=24, help="constellation size, multiple of 3")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--rate", type=_rate, default=None, help="update rate in Hz (default 1)")
    g.add_argument("--sigma", type=float, default=5.0, help="pseudorange noise in m (default 5)")
    g.add_argument("--lat", type=float, default=22.55, help="start latitude in degrees")
    g.add_argument("--lon", type=float, default=113.95, help="start longitude in degrees")
    g.add_argument("--outage-up", type=_positive_float, default=None, help="mean satellite up-time, s")
    g.add_argument("--outage-down", type=_positive_float, default=None, help="mean satellite down-time, s")
    g.add_argument("-o", "--output", help="scenario file (default stdout)")
    g.set_defaults(func=cmd_generate)

    def common(p):
        p.add_argument("--scenario", required=True, help="scenario JSON file")
        p.add_argument("--profile", default="namuru", help="'namuru' or an energy profile JSON file")
        p.add_argument("--rate", type=_rate, default=None, help="override the scenario update rate")
        p.add_argument("--subset-size", type=_positive_int, default=4, help="random policy subset size")
        p.add_argument("--reselection-period", type=_positive_float, default=60.0, help="seconds")
        p.add_argument("--gdop-threshold", type=float, default=0.05, help="relative GDOP gap (default 0.05)")
        p.add_argument("--altitude-aided", action="store_true", help="use a height prior (3-satellite fixes)")
        p.add_argument("--out-dir", help="directory for report files")
        p.add_argument("--format", choices=("csv", "summary"), default="summary", help="stdout format")

    r = sub.add_parser("run", help="run one policy on a scenario")
    common(r)
    r.add_argument("--policy", type=_policy_token, default="full")
    r.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="paired multi-seed comparison of policies")
    common(c)
    c.add_argument("--policy", type=_policy_token, action="append", required=True,
                   help="repeat for each policy, e.g. --policy full --policy selective --policy random:5")
    c.add_argument("--seeds", type=_parse_seeds, default=[0], help="e.g. 0-19 or 1,2,5")
    c.add_argument("--jobs", type=_positive_int, default=1, help="parallel worker processes")
    c.set_defaults(func=cmd_compare)

    e = sub.add_parser("energy", help="power breakdown for an operating point")
    e.add_argument("--profile", default="namuru")
    e.add_argument("-N", "--satellites", type=_positive_int, default=8, help="tracked satellites")
    e.add_argument("--rate", type=_rate, default=1.0, help="update rate in Hz")
    e.add_argument("--format", choices=("csv", "summary"), default="summary")
    e.set_defaults(func=cmd_energy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RunFailedError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_RUN_FAILED
    except (argparse.ArgumentTypeError, InvalidOperatingPointError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
