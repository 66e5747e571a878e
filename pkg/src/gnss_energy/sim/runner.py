"""Tracking policies and end-to-end scenario execution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from ..energy import NAMURU, EnergyModelParams, OperatingPoint, PowerBreakdown, accumulate_run_energy, total_power
from ..errors import DegenerateGeometryError, DegenerateInputError, InsufficientMeasurementsError
from ..gdop import SelectionConfig, SelectionResult, select_subset
from ..geo import as_ecef, ecef_to_geodetic, enu_basis, geometry_matrix
from ..nav import AltitudeAiding, NavSolution, PseudorangeSet, solution_error, solve_position
from .constellation import propagate_constellation, visible_satellites
from .scenario import Scenario

# substream purposes; one generator per (seed, purpose, epoch)
_NOISE, _OUTAGE, _RANDOM_POLICY = 1, 2, 3


class PolicyKind(str, Enum):
    FULL = "full"
    SELECTIVE = "selective"
    RANDOM = "random"


@dataclass(frozen=True)
class TrackingPolicy:
    kind: PolicyKind = PolicyKind.FULL
    selection_config: SelectionConfig = field(default_factory=SelectionConfig)
    random_subset_size: int = 4
    reselection_period: float = 60.0

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        if self.reselection_period <= 0:
            raise ValueError("reselection_period must be > 0")
        if self.kind is PolicyKind.RANDOM and self.random_subset_size < self.min_satellites:
            raise ValueError(f"random_subset_size must be >= {self.min_satellites}")

    @property
    def min_satellites(self) -> int:
        return self.selection_config.min_satellites

    @property
    def label(self) -> str:
        if self.kind is PolicyKind.RANDOM:
            return f"random{self.random_subset_size}"
        return self.kind.value


@dataclass(frozen=True)
class EpochRecord:
    time: float
    truth: np.ndarray
    visible_count: int
    tracked_indices: tuple[int, ...]
    charged_n: int
    solution: NavSolution | None
    error_3d: float
    power: PowerBreakdown
    refresh: bool = False
    reacquisition: bool = False

    @property
    def has_fix(self) -> bool:
        return self.solution is not None


@dataclass(frozen=True)
class RunReport:
    epochs: tuple[EpochRecord, ...]
    mean_error: float
    mean_power: float
    total_energy: float
    reacquisition_events: int
    policy: str
    scenario: str
    seed: int
    selections: tuple[tuple[float, SelectionResult], ...] = ()

    @property
    def fix_count(self) -> int:
        return sum(e.has_fix for e in self.epochs)


class RunFailedError(RuntimeError):
    """No epoch in the run produced a position fix."""


def generate_measurements(receiver, true_bias: float, satellites: Sequence, sigma: float,
                          rng: np.random.Generator, indices: Sequence[int] | None = None,
                          epoch_time: float = 0.0) -> PseudorangeSet:
    """Forward-model pseudoranges plus i.i.d. Gaussian noise.

    One normal draw per satellite in input order, so a generator seeded
    per epoch gives every satellite the same noise whatever subset is
    later tracked.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    sats = np.asarray(satellites, dtype=float).reshape(-1, 3)
    noise = rng.normal(0.0, sigma, len(sats)) if sigma > 0 else np.zeros(len(sats))
    ranges = np.linalg.norm(sats - as_ecef(receiver), axis=1)
    if np.any(ranges == 0.0):
        raise DegenerateInputError("a satellite coincides with the receiver")
    rho = ranges + true_bias + noise
    ids = range(len(sats)) if indices is None else indices
    return PseudorangeSet.from_arrays(ids, sats, rho, epoch_time)


def _substream(seed: int, purpose: int, epoch: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), purpose, int(epoch)])


class _Outages:
    def __init__(self, scenario: Scenario):
        self.model = scenario.outage_model
        self.seed = scenario.rng_seed
        self.dt = 1.0 / scenario.update_rate
        self.state = np.ones(scenario.constellation.satellite_count, dtype=bool)

    def step(self, epoch: int) -> np.ndarray | None:
        if self.model is None:
            return None
        if epoch > 0:
            u = _substream(self.seed, _OUTAGE, epoch).random(self.state.size)
            p_fail = 1.0 - math.exp(-self.dt / self.model.mean_up)
            p_back = 1.0 - math.exp(-self.dt / self.model.mean_down)
            self.state = np.where(self.state, u >= p_fail, u < p_back)
        return self.state


def _solve(meas: PseudorangeSet, prev: NavSolution | None, altitude: float | None,
           min_sats: int) -> NavSolution | None:
    if len(meas) < min_sats:
        return None
    guess = None if prev is None else np.r_[prev.position, prev.clock_bias]
    aid = AltitudeAiding(altitude) if altitude is not None else None
    try:
        sol = solve_position(meas, guess, aid)
    except (DegenerateGeometryError, DegenerateInputError, InsufficientMeasurementsError):
        return None
    return sol if sol.converged else None


def run_scenario(scenario: Scenario, policy: TrackingPolicy,
                 params: EnergyModelParams = NAMURU) -> RunReport:
    """Simulate one receiver run under a tracking policy.

    Selective tracking refreshes its subset every ``reselection_period``
    seconds from a full-visibility snapshot; the refresh epoch tracks (and
    is charged for) every visible satellite. Random tracking redraws its
    subset on the same cadence. When the tracked set drops below the
    solvable minimum between refreshes, the subset is refreshed at once
    and one reacquisition is charged.
    """
    f = scenario.update_rate
    n_epochs = scenario.epoch_count
    min_sats = policy.min_satellites
    aided = policy.selection_config.altitude_aided
    outages = _Outages(scenario)

    records: list[EpochRecord] = []
    selections: list[tuple[float, SelectionResult]] = []
    prev: NavSolution | None = None
    tracked: list[int] = []
    next_refresh = 0.0
    refresh_count = 0
    events = 0
    last_n = None

    for k in range(n_epochs):
        t = k / f
        truth_geo = scenario.position_at(t)
        truth = scenario.ecef_at(t)
        sats = propagate_constellation(scenario.constellation, t)
        visible = visible_satellites(truth, sats, scenario.elevation_mask, outages.step(k))
        bias = scenario.clock_bias + scenario.clock_drift * t
        meas = generate_measurements(truth, bias, sats, scenario.pseudorange_noise_sigma,
                                     _substream(scenario.rng_seed, _NOISE, k), epoch_time=t)
        # height prior from the previous fix, else the road height
        alt = None
        if aided:
            alt = ecef_to_geodetic(prev.position).height if prev is not None else truth_geo.height

        refresh = reacq = False
        if policy.kind is PolicyKind.FULL:
            epoch_tracked = list(visible)
        else:
            still = [i for i in tracked if i in visible]
            due = t >= next_refresh - 1e-9
            if not due and len(still) < min_sats:
                due = reacq = True
                events += 1
            if due:
                refresh = True
                next_refresh = t + policy.reselection_period
                if policy.kind is PolicyKind.SELECTIVE:
                    epoch_tracked = list(visible)
                else:
                    size = min(policy.random_subset_size, len(visible))
                    rng = _substream(scenario.rng_seed, _RANDOM_POLICY, refresh_count)
                    epoch_tracked = sorted(int(i) for i in rng.choice(visible, size, replace=False)) if size else []
                    tracked = list(epoch_tracked)
                refresh_count += 1
            else:
                epoch_tracked = still
                tracked = still

        sol = _solve(meas.subset(epoch_tracked), prev, alt, min_sats)

        if policy.kind is PolicyKind.SELECTIVE and refresh:
            tracked = list(epoch_tracked)
            if sol is not None and len(visible) >= min_sats:
                geom = geometry_matrix(sol.position, sats[visible])
                g = ecef_to_geodetic(sol.position)
                up = enu_basis(g.latitude, g.longitude)[2]
                try:
                    res = select_subset(geom, policy.selection_config, up)
                except DegenerateGeometryError:
                    res = None
                if res is not None:
                    tracked = sorted(visible[i] for i in res.selected_indices)
                    selections.append((t, res))
            else:
                # no usable fix for the snapshot; retry at the next epoch
                next_refresh = t + 1.0 / f

        if sol is not None:
            prev = sol
        n = len(epoch_tracked) if (sol is not None or epoch_tracked) else 0
        if n == 0:
            n = last_n if last_n is not None else max(1, len(visible))
        last_n = n
        records.append(EpochRecord(
            time=t,
            truth=truth,
            visible_count=len(visible),
            tracked_indices=tuple(epoch_tracked),
            charged_n=n,
            solution=sol,
            error_3d=solution_error(sol, truth) if sol is not None else math.nan,
            power=total_power(params, OperatingPoint(n, f)),
            refresh=refresh,
            reacquisition=reacq,
        ))

    fixes = [r.error_3d for r in records if r.has_fix]
    if not fixes:
        raise RunFailedError(f"no epoch of scenario {scenario.name!r} produced a fix")
    energy = accumulate_run_energy([r.charged_n for r in records], f, params, events)
    return RunReport(
        epochs=tuple(records),
        mean_error=float(np.mean(fixes)),
        mean_power=energy.mean_mw,
        total_energy=energy.energy_j,
        reacquisition_events=events,
        policy=policy.label,
        scenario=scenario.name,
        seed=scenario.rng_seed,
        selections=tuple(selections),
    )
