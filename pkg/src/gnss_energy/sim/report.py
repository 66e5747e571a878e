"""CSV/JSON export of run reports and multi-policy comparisons."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..energy import NAMURU, EnergyModelParams, acquisition_energy, energy_saving
from ..geo import ecef_to_geodetic
from .runner import RunReport, TrackingPolicy, run_scenario
from .scenario import Scenario

EPOCH_COLUMNS = (
    "time_s", "has_fix", "visible_count", "tracked_count", "tracked_ids", "refresh", "reacquisition",
    "truth_lat_deg", "truth_lon_deg", "truth_height_m",
    "est_lat_deg", "est_lon_deg", "est_height_m", "clock_bias_m", "error_3d_m", "gdop",
    "power_rf_mw", "power_acquisition_mw", "power_track_mw", "power_ephemeris_mw",
    "power_navigation_mw", "power_idle_mw", "power_reacquisition_mw", "power_total_mw",
)

TRAJECTORY_COLUMNS = ("seed", "time_s", "lat_deg", "lon_deg", "truth_lat_deg", "truth_lon_deg", "error_3d_m")

TABLE_COLUMNS = ("policy", "seed", "mean_error_m", "mean_power_mw", "total_energy_j",
                 "saving_vs_full", "reacquisition_events", "fixes", "epochs")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def epoch_rows(report: RunReport, params: EnergyModelParams = NAMURU, rate: float = 1.0):
    reacq_mw = 1000.0 * acquisition_energy(params) * rate
    for e in report.epochs:
        truth = ecef_to_geodetic(e.truth)
        if e.solution is not None:
            est = ecef_to_geodetic(e.solution.position)
            est_cols = (math.degrees(est.latitude), math.degrees(est.longitude), est.height,
                        e.solution.clock_bias, e.error_3d, e.solution.gdop_at_solution)
        else:
            est_cols = (math.nan,) * 6
        extra = reacq_mw if e.reacquisition else 0.0
        p = e.power
        yield (
            e.time, e.has_fix, e.visible_count, len(e.tracked_indices),
            " ".join(str(i) for i in e.tracked_indices), e.refresh, e.reacquisition,
            math.degrees(truth.latitude), math.degrees(truth.longitude), truth.height,
            *est_cols,
            p.rf, p.acquisition, p.track, p.ephemeris, p.navigation, p.idle, extra, p.total + extra,
        )


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def epochs_csv(report: RunReport, params: EnergyModelParams = NAMURU, rate: float = 1.0) -> str:
    """One row per epoch, header first; column order is :data:`EPOCH_COLUMNS`."""
    return _csv_text(EPOCH_COLUMNS, epoch_rows(report, params, rate))


def summary_dict(report: RunReport, profile: str = "namuru") -> dict:
    gaps = [res.relative_gap for _, res in report.selections]
    return {
        "scenario": report.scenario,
        "policy": report.policy,
        "seed": report.seed,
        "profile": profile,
        "epochs": len(report.epochs),
        "fixes": report.fix_count,
        "no_fix_epochs": len(report.epochs) - report.fix_count,
        "mean_error_m": report.mean_error,
        "mean_power_mw": report.mean_power,
        "total_energy_j": report.total_energy,
        "reacquisition_events": report.reacquisition_events,
        "selection_refreshes": len(report.selections),
        "mean_selected_count": float(np.mean([len(r.selected_indices) for _, r in report.selections])) if gaps else None,
        "max_selection_gap": max(gaps) if gaps else None,
    }


def dumps_summary(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class PolicyMetrics:
    mean_error: float
    mean_power: float
    total_energy: float
    saving_vs_full: float | None


@dataclass(frozen=True)
class CompareSummary:
    scenario: str
    seeds: tuple[int, ...]
    policies: dict[str, PolicyMetrics]
    reports: dict[str, tuple[RunReport, ...]]
    baseline: str | None = None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "seeds": list(self.seeds),
            "baseline": self.baseline,
            "policies": {
                k: {
                    "mean_error_m": m.mean_error,
                    "mean_power_mw": m.mean_power,
                    "total_energy_j": m.total_energy,
                    "saving_vs_full": m.saving_vs_full,
                }
                for k, m in self.policies.items()
            },
        }


def _run_one(args):
    scenario, policy, params = args
    return run_scenario(scenario, policy, params)


def policy_keys(policies: Sequence[TrackingPolicy]) -> list[str]:
    """Policy labels, de-duplicated with ``#2``, ``#3`` suffixes."""
    seen: dict[str, int] = {}
    keys = []
    for p in policies:
        seen[p.label] = seen.get(p.label, 0) + 1
        keys.append(p.label if seen[p.label] == 1 else f"{p.label}#{seen[p.label]}")
    return keys


def compare_policies(scenario: Scenario, seeds: Sequence[int], policies: Sequence[TrackingPolicy],
                     params: EnergyModelParams = NAMURU, jobs: int = 1) -> CompareSummary:
    """Run every policy on every seed (paired noise) and aggregate.

    Per-policy metrics are means over seeds. ``saving_vs_full`` is relative
    to the first full-tracking policy, or None when no policy is full.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    if len(policies) < 2:
        raise ValueError("at least two policies are required")
    keys = policy_keys(policies)
    tasks = [(scenario.with_seed(s), p, params) for p in policies for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]

    n = len(seeds)
    reports = {k: tuple(results[i * n:(i + 1) * n]) for i, k in enumerate(keys)}
    means = {
        k: (float(np.mean([r.mean_error for r in rs])), float(np.mean([r.mean_power for r in rs])),
            float(np.mean([r.total_energy for r in rs])))
        for k, rs in reports.items()
    }
    full_key = next((k for k, p in zip(keys, policies) if p.kind.value == "full"), None)
    metrics = {}
    for k, (err, pw, en) in means.items():
        saving = energy_saving(means[full_key][1], pw) if full_key is not None else None
        metrics[k] = PolicyMetrics(err, pw, en, saving)
    return CompareSummary(scenario.name, tuple(int(s) for s in seeds), metrics, reports, full_key)


def comparison_table_csv(summary: CompareSummary) -> str:
    """Per-seed and seed-mean accuracy/energy rows for every policy."""
    full_key = summary.baseline
    rows = []
    for k, rs in summary.reports.items():
        for i, r in enumerate(rs):
            saving = energy_saving(summary.reports[full_key][i].mean_power, r.mean_power) if full_key else math.nan
            rows.append((k, r.seed, r.mean_error, r.mean_power, r.total_energy, saving,
                         r.reacquisition_events, r.fix_count, len(r.epochs)))
        m = summary.policies[k]
        rows.append((k, "mean", m.mean_error, m.mean_power, m.total_energy,
                     m.saving_vs_full if m.saving_vs_full is not None else math.nan,
                     float(np.mean([r.reacquisition_events for r in rs])),
                     float(np.mean([r.fix_count for r in rs])), float(np.mean([len(r.epochs) for r in rs]))))
    return _csv_text(TABLE_COLUMNS, rows)


def trajectory_csv(reports: Sequence[RunReport]) -> str:
    """Estimated vs true track for plotting; no-fix epochs have empty estimate cells."""
    def rows():
        for r in reports:
            for e in r.epochs:
                truth = ecef_to_geodetic(e.truth)
                if e.solution is not None:
                    est = ecef_to_geodetic(e.solution.position)
                    lat, lon = math.degrees(est.latitude), math.degrees(est.longitude)
                else:
                    lat = lon = math.nan
                yield (r.seed, e.time, lat, lon, math.degrees(truth.latitude),
                       math.degrees(truth.longitude), e.error_3d)
    return _csv_text(TRAJECTORY_COLUMNS, rows())
