"""Parametric receiver power model.

Five procedures contribute to the amortized power draw: RF capture,
periodic acquisition, per-cycle tracking, periodic ephemeris extraction
and per-cycle navigation. Tracking and navigation are given as linear
fits in ``N * L`` (mW), where ``N`` is the number of tracked satellites
and ``L`` the milliseconds of raw data sampled per second.

Parameters are SI (volts, amps, seconds); reported powers are mW.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import InvalidOperatingPointError

MIN_RATE_HZ = 1.0
MAX_RATE_HZ = 10.0


class Procedure(str, Enum):
    RF = "rf"
    ACQUISITION = "acquisition"
    TRACK = "track"
    EPHEMERIS = "ephemeris"
    NAVIGATION = "navigation"


@dataclass(frozen=True)
class RfParams:
    U_r: float
    I_r: float
    t_r: float


@dataclass(frozen=True)
class AcquisitionParams:
    U_s: float
    I_a: float
    t_a: float
    T_a: float


@dataclass(frozen=True)
class LinearFit:
    """``intercept + slope * N * L`` in mW."""

    intercept: float
    slope: float

    def __call__(self, nl: float) -> float:
        return self.intercept + self.slope * nl


@dataclass(frozen=True)
class EphemerisParams:
    I_e: float
    t_e: float
    t_re: float
    T_e: float


@dataclass(frozen=True)
class IdleParams:
    P_i: float = 0.0
    included: bool = False
    t_i: float | None = None  # seconds per cycle; None means the rest of the cycle after RF capture


@dataclass(frozen=True)
class EnergyModelParams:
    rf: RfParams
    acquisition: AcquisitionParams
    track_fit: LinearFit
    ephemeris: EphemerisParams
    navigation_fit: LinearFit
    idle: IdleParams = field(default_factory=IdleParams)
    name: str = "custom"

    def __post_init__(self):
        positive = {
            "U_r": self.rf.U_r, "I_r": self.rf.I_r, "t_r": self.rf.t_r,
            "U_s": self.acquisition.U_s, "I_a": self.acquisition.I_a,
            "t_a": self.acquisition.t_a, "T_a": self.acquisition.T_a,
            "I_e": self.ephemeris.I_e, "t_e": self.ephemeris.t_e,
            "t_re": self.ephemeris.t_re, "T_e": self.ephemeris.T_e,
        }
        bad = [k for k, v in positive.items() if not v > 0]
        if bad:
            raise ValueError(f"parameters must be positive: {', '.join(bad)}")
        if self.acquisition.T_a > self.ephemeris.T_e:
            raise ValueError("acquisition period T_a must not exceed ephemeris period T_e")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> EnergyModelParams:
        return cls(
            rf=RfParams(**d["rf"]),
            acquisition=AcquisitionParams(**d["acquisition"]),
            track_fit=LinearFit(**d["track_fit"]),
            ephemeris=EphemerisParams(**d["ephemeris"]),
            navigation_fit=LinearFit(**d["navigation_fit"]),
            idle=IdleParams(**d.get("idle", {})),
            name=d.get("name", "custom"),
        )


# Namuru V2 measurements. t_re = 36 s reproduces the published 18.4 mW ephemeris term.
NAMURU = EnergyModelParams(
    rf=RfParams(U_r=5.0, I_r=0.064, t_r=0.002),
    acquisition=AcquisitionParams(U_s=3.3, I_a=0.130, t_a=1.2, T_a=60.0),
    track_fit=LinearFit(intercept=11.88, slope=7.26),
    ephemeris=EphemerisParams(I_e=0.131, t_e=50.0, t_re=36.0, T_e=1800.0),
    navigation_fit=LinearFit(intercept=2.0, slope=1.65),
    idle=IdleParams(P_i=0.0, included=False),
    name="namuru",
)

PROFILES = {"namuru": NAMURU}


def load_profile(name_or_path: str | Path) -> EnergyModelParams:
    """Built-in profile by name, else a JSON file with the :meth:`EnergyModelParams.to_dict` layout."""
    if str(name_or_path) in PROFILES:
        return PROFILES[str(name_or_path)]
    with open(name_or_path) as fh:
        return EnergyModelParams.from_dict(json.load(fh))


def save_profile(params: EnergyModelParams, path: str | Path) -> None:
    Path(path).write_text(json.dumps(params.to_dict(), indent=2, sort_keys=True) + "\n")


@dataclass(frozen=True)
class OperatingPoint:
    N: int
    f: float = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidOperatingPointError(f"tracked satellites N must be an integer >= 1, got {self.N}")
        if not MIN_RATE_HZ <= self.f <= MAX_RATE_HZ:
            raise InvalidOperatingPointError(f"update rate f must be in [1, 10] Hz, got {self.f}")

    @property
    def L(self) -> float:
        """Raw data per second in ms, 2 ms per fix."""
        return 2.0 * self.f


@dataclass(frozen=True)
class PowerBreakdown:
    rf: float
    acquisition: float
    track: float
    ephemeris: float
    navigation: float
    idle: float

    @property
    def total(self) -> float:
        return self.rf + self.acquisition + self.track + self.ephemeris + self.navigation + self.idle

    def as_dict(self) -> dict:
        d = asdict(self)
        d["total"] = self.total
        return d


def procedure_power(procedure: Procedure | str, params: EnergyModelParams, op: OperatingPoint) -> float:
    """Amortized power of one procedure in mW."""
    procedure = Procedure(procedure)
    rf, acq, eph = params.rf, params.acquisition, params.ephemeris
    rf_capture = rf.U_r * rf.I_r * rf.t_r  # J per capture
    if procedure is Procedure.RF:
        return 1000.0 * rf_capture * op.f
    if procedure is Procedure.ACQUISITION:
        return 1000.0 * (acq.U_s * acq.I_a * acq.t_a + rf_capture) / acq.T_a
    if procedure is Procedure.TRACK:
        return params.track_fit(op.N * op.L)
    if procedure is Procedure.EPHEMERIS:
        return 1000.0 * (acq.U_s * eph.I_e * eph.t_e + rf.U_r * rf.I_r * eph.t_re) / eph.T_e
    return params.navigation_fit(op.N * op.L)


def idle_power(params: EnergyModelParams, op: OperatingPoint) -> float:
    idle = params.idle
    if not idle.included:
        return 0.0
    t_i = idle.t_i if idle.t_i is not None else max(0.0, 1.0 / op.f - params.rf.t_r)
    return idle.P_i * t_i * op.f


def total_power(params: EnergyModelParams, op: OperatingPoint) -> PowerBreakdown:
    return PowerBreakdown(
        rf=procedure_power(Procedure.RF, params, op),
        acquisition=procedure_power(Procedure.ACQUISITION, params, op),
        track=procedure_power(Procedure.TRACK, params, op),
        ephemeris=procedure_power(Procedure.EPHEMERIS, params, op),
        navigation=procedure_power(Procedure.NAVIGATION, params, op),
        idle=idle_power(params, op),
    )


def acquisition_energy(params: EnergyModelParams) -> float:
    """Joules for one full acquisition including its RF capture."""
    rf, acq = params.rf, params.acquisition
    return acq.U_s * acq.I_a * acq.t_a + rf.U_r * rf.I_r * rf.t_r


@dataclass(frozen=True)
class RunEnergy:
    energy_j: float
    mean_mw: float
    duration_s: float


def accumulate_run_energy(per_epoch_n: Sequence[int], f: float, params: EnergyModelParams,
                          reacquisition_events: int = 0) -> RunEnergy:
    if len(per_epoch_n) == 0:
        raise ValueError("per-epoch satellite counts must not be empty")
    if reacquisition_events < 0:
        raise ValueError("reacquisition_events must be >= 0")
    cache: dict[int, float] = {}
    mj = 0.0
    for n in per_epoch_n:
        if n not in cache:
            cache[n] = total_power(params, OperatingPoint(n, f)).total
        mj += cache[n] / f
    energy = mj / 1000.0 + reacquisition_events * acquisition_energy(params)
    duration = len(per_epoch_n) / f
    return RunEnergy(energy, 1000.0 * energy / duration, duration)


def energy_saving(full_mw: float, selective_mw: float) -> float:
    if not full_mw > 0:
        raise ValueError("full-tracking power must be positive")
    return (full_mw - selective_mw) / full_mw
