"""Circular-orbit constellation and visibility."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..geo import WGS84_A, elevations

GM_EARTH = 3.986004418e14


@dataclass(frozen=True)
class ConstellationConfig:
    """Walker-style constellation of circular orbits.

    Satellites are split evenly across ``plane_count`` planes with
    ascending nodes spaced evenly in longitude. ``phase_factor`` is the
    Walker F parameter: plane ``p`` is offset in argument of latitude by
    ``2 pi F p / satellite_count``. Positions are expressed in a frame
    that does not rotate with the Earth.
    """

    satellite_count: int = 24
    orbital_radius: float = 26_560_000.0
    inclination: float = math.radians(55.0)
    plane_count: int = 3
    phase_factor: int = 1
    raan_offset: float = 0.0
    anomaly_offset: float = 0.0
    epoch: float = 0.0

    def __post_init__(self):
        if self.orbital_radius <= WGS84_A:
            raise ValueError("orbital radius must exceed the Earth radius")
        if self.satellite_count < 1 or self.plane_count < 1:
            raise ValueError("satellite and plane counts must be >= 1")
        if self.satellite_count % self.plane_count:
            raise ValueError("satellite_count must be a multiple of plane_count")

    @property
    def period(self) -> float:
        return 2 * math.pi * math.sqrt(self.orbital_radius ** 3 / GM_EARTH)

    @property
    def mean_motion(self) -> float:
        return 2 * math.pi / self.period


def propagate_constellation(config: ConstellationConfig, t: float) -> np.ndarray:
    """Positions of every satellite at time ``t``, shape ``(satellite_count, 3)``.

    Row ``k`` is satellite id ``k``.
    """
    per_plane = config.satellite_count // config.plane_count
    k = np.arange(config.satellite_count)
    plane = k // per_plane
    slot = k % per_plane
    raan = config.raan_offset + 2 * math.pi * plane / config.plane_count
    u = (config.anomaly_offset
         + 2 * math.pi * slot / per_plane
         + 2 * math.pi * config.phase_factor * plane / config.satellite_count
         + config.mean_motion * (t - config.epoch))
    ci, si = math.cos(config.inclination), math.sin(config.inclination)
    cu, su = np.cos(u), np.sin(u)
    co, so = np.cos(raan), np.sin(raan)
    r = config.orbital_radius
    return np.column_stack([
        r * (co * cu - so * su * ci),
        r * (so * cu + co * su * ci),
        r * (su * si),
    ])


def visible_satellites(receiver, satellites: Sequence, mask: float,
                       outage_state: Sequence[bool] | None = None) -> list[int]:
    """Ascending indices of satellites at or above ``mask`` elevation and not in outage.

    ``outage_state[k]`` is True when satellite ``k`` is available.
    """
    ok = elevations(receiver, satellites) >= mask
    if outage_state is not None:
        ok &= np.asarray(outage_state, dtype=bool)
    return [int(k) for k in np.flatnonzero(ok)]
