"""Scenario definitions, trajectories and their JSON representation."""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..geo import GeodeticPosition, WGS84_A, geodetic_to_ecef
from .constellation import ConstellationConfig

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Waypoint:
    time: float
    position: GeodeticPosition


@dataclass(frozen=True)
class OutageModel:
    """Two-state Markov availability per satellite (mean dwell times in seconds)."""

    mean_up: float = 600.0
    mean_down: float = 20.0

    def __post_init__(self):
        if self.mean_up <= 0 or self.mean_down <= 0:
            raise ValueError("outage dwell times must be positive")


@dataclass(frozen=True)
class Scenario:
    trajectory: tuple[Waypoint, ...]
    duration: float
    constellation: ConstellationConfig = field(default_factory=ConstellationConfig)
    update_rate: float = 1.0
    pseudorange_noise_sigma: float = 5.0
    elevation_mask: float = math.radians(10.0)
    outage_model: OutageModel | None = None
    rng_seed: int = 0
    clock_bias: float = 1.0e4
    clock_drift: float = 0.5
    name: str = "scenario"

    def __post_init__(self):
        if not self.duration > 0:
            raise ValueError("duration must be > 0")
        if not 1.0 <= self.update_rate <= 10.0:
            raise ValueError("update_rate must be in [1, 10] Hz")
        if self.pseudorange_noise_sigma < 0:
            raise ValueError("pseudorange_noise_sigma must be >= 0")
        if not self.trajectory:
            raise ValueError("trajectory needs at least one waypoint")
        times = [w.time for w in self.trajectory]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint times must be strictly increasing")

    @property
    def epoch_count(self) -> int:
        return int(round(self.duration * self.update_rate))

    def with_seed(self, seed: int) -> Scenario:
        return _replace(self, rng_seed=int(seed))

    def position_at(self, t: float) -> GeodeticPosition:
        """Piecewise-linear interpolation in latitude, longitude and height."""
        wps = self.trajectory
        if t <= wps[0].time:
            return wps[0].position
        if t >= wps[-1].time:
            return wps[-1].position
        i = bisect.bisect_right([w.time for w in wps], t)
        a, b = wps[i - 1], wps[i]
        s = (t - a.time) / (b.time - a.time)
        pa, pb = a.position, b.position
        return GeodeticPosition(
            pa.latitude + s * (pb.latitude - pa.latitude),
            pa.longitude + s * (pb.longitude - pa.longitude),
            pa.height + s * (pb.height - pa.height),
        )

    def ecef_at(self, t: float) -> np.ndarray:
        return geodetic_to_ecef(self.position_at(t))

    def to_dict(self) -> dict:
        c = self.constellation
        return {
            "format_version": FORMAT_VERSION,
            "name": self.name,
            "duration_s": self.duration,
            "update_rate_hz": self.update_rate,
            "pseudorange_noise_sigma_m": self.pseudorange_noise_sigma,
            "elevation_mask_deg": math.degrees(self.elevation_mask),
            "rng_seed": self.rng_seed,
            "clock_bias_m": self.clock_bias,
            "clock_drift_mps": self.clock_drift,
            "constellation": {
                "satellite_count": c.satellite_count,
                "orbital_radius_m": c.orbital_radius,
                "inclination_deg": math.degrees(c.inclination),
                "plane_count": c.plane_count,
                "phase_factor": c.phase_factor,
                "raan_offset_deg": math.degrees(c.raan_offset),
                "anomaly_offset_deg": math.degrees(c.anomaly_offset),
                "epoch_s": c.epoch,
            },
            "outage_model": None if self.outage_model is None else asdict(self.outage_model),
            "trajectory": [
                {
                    "time_s": w.time,
                    "lat_deg": math.degrees(w.position.latitude),
                    "lon_deg": math.degrees(w.position.longitude),
                    "height_m": w.position.height,
                }
                for w in self.trajectory
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Scenario:
        version = d.get("format_version", FORMAT_VERSION)
        if version != FORMAT_VERSION:
            raise ValueError(f"unsupported scenario format_version {version}")
        c = d.get("constellation", {})
        constellation = ConstellationConfig(
            satellite_count=int(c.get("satellite_count", 24)),
            orbital_radius=float(c.get("orbital_radius_m", 26_560_000.0)),
            inclination=math.radians(float(c.get("inclination_deg", 55.0))),
            plane_count=int(c.get("plane_count", 3)),
            phase_factor=int(c.get("phase_factor", 1)),
            raan_offset=math.radians(float(c.get("raan_offset_deg", 0.0))),
            anomaly_offset=math.radians(float(c.get("anomaly_offset_deg", 0.0))),
            epoch=float(c.get("epoch_s", 0.0)),
        )
        om = d.get("outage_model")
        return cls(
            trajectory=tuple(
                Waypoint(float(w["time_s"]),
                         GeodeticPosition.from_degrees(float(w["lat_deg"]), float(w["lon_deg"]),
                                                       float(w.get("height_m", 0.0))))
                for w in d["trajectory"]
            ),
            duration=float(d["duration_s"]),
            constellation=constellation,
            update_rate=float(d.get("update_rate_hz", 1.0)),
            pseudorange_noise_sigma=float(d.get("pseudorange_noise_sigma_m", 5.0)),
            elevation_mask=math.radians(float(d.get("elevation_mask_deg", 10.0))),
            outage_model=None if om is None else OutageModel(**om),
            rng_seed=int(d.get("rng_seed", 0)),
            clock_bias=float(d.get("clock_bias_m", 1.0e4)),
            clock_drift=float(d.get("clock_drift_mps", 0.5)),
            name=str(d.get("name", "scenario")),
        )


def _replace(s: Scenario, **kw) -> Scenario:
    from dataclasses import replace
    return replace(s, **kw)


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(s.to_dict(), indent=2, sort_keys=True) + "\n"


def save_scenario(s: Scenario, path: str | Path) -> None:
    Path(path).write_text(dumps_scenario(s))


def load_scenario(path: str | Path) -> Scenario:
    with open(path) as fh:
        return Scenario.from_dict(json.load(fh))


def curved_road(start: GeodeticPosition, duration: float, speed: float = 60 / 3.6,
                heading: float = 0.0, turn_rate: float = math.radians(0.15),
                spacing: float = 10.0) -> tuple[Waypoint, ...]:
    """Waypoints along a gently curving road at constant speed.

    The heading (radians from north) changes sinusoidally with amplitude
    ``turn_rate * duration / 4`` so the road bends one way and back.
    """
    n = max(1, int(math.ceil(duration / spacing)))
    lat, lon, h = start.latitude, start.longitude, start.height
    wps = [Waypoint(0.0, start)]
    r_earth = WGS84_A + h
    for i in range(1, n + 1):
        t = min(i * spacing, duration)
        dt = t - wps[-1].time
        hd = heading + turn_rate * duration / (2 * math.pi) * math.sin(2 * math.pi * t / duration)
        d = speed * dt
        lat += d * math.cos(hd) / r_earth
        lon += d * math.sin(hd) / (r_earth * math.cos(lat))
        wps.append(Waypoint(t, GeodeticPosition(lat, lon, h)))
    return tuple(wps)


def default_scenario(duration: float = 600.0, speed: float = 60 / 3.6, satellite_count: int = 24,
                     seed: int = 0, update_rate: float = 1.0, sigma: float = 5.0,
                     lat_deg: float = 22.55, lon_deg: float = 113.95,
                     outage: OutageModel | None = None) -> Scenario:
    """Vehicle on a curved road under a 24-satellite, 3-plane constellation.

    With the default location and 10 degree mask, 7 or 8 satellites stay
    in view for the whole run.
    """
    if duration <= 0:
        raise ValueError("duration must be > 0")
    if speed < 0:
        raise ValueError("speed must be >= 0")
    start = GeodeticPosition.from_degrees(lat_deg, lon_deg, 30.0)
    return Scenario(
        trajectory=curved_road(start, duration, speed),
        duration=duration,
        constellation=ConstellationConfig(satellite_count=satellite_count),
        update_rate=update_rate,
        pseudorange_noise_sigma=sigma,
        outage_model=outage,
        rng_seed=seed,
        name="curved-road",
    )
