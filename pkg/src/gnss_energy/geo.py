"""Coordinate frames and receiver/satellite geometry.

Positions are plain ``numpy`` arrays of shape ``(3,)`` in meters (ECEF).
Angles are radians throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateInputError

# WGS-84
WGS84_A = 6378137.0
WGS84_F = 1.0 / 298.257223563
WGS84_B = WGS84_A * (1.0 - WGS84_F)
WGS84_E2 = WGS84_F * (2.0 - WGS84_F)

_LAT_TOL = 1e-12
_MAX_ITER = 50


@dataclass(frozen=True)
class GeodeticPosition:
    """Latitude/longitude (radians) and ellipsoidal height (meters)."""

    latitude: float
    longitude: float
    height: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.latitude, self.longitude, self.height)):
            raise ValueError("geodetic coordinates must be finite")
        if abs(self.latitude) > math.pi / 2 + 1e-15:
            raise ValueError(f"latitude {self.latitude} outside [-pi/2, pi/2]")
        if not -math.pi < self.longitude <= math.pi:
            raise ValueError(f"longitude {self.longitude} outside (-pi, pi]")

    @classmethod
    def from_degrees(cls, lat_deg: float, lon_deg: float, height: float = 0.0) -> GeodeticPosition:
        lon = wrap_longitude(math.radians(lon_deg))
        return cls(math.radians(lat_deg), lon, float(height))


class LookAngles(NamedTuple):
    elevation: float
    azimuth: float


def wrap_longitude(lon: float) -> float:
    """Map an angle into (-pi, pi]."""
    lon = math.fmod(lon + math.pi, 2 * math.pi)
    if lon <= 0.0:
        lon += 2 * math.pi
    return lon - math.pi


def as_ecef(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(3)
    if not np.all(np.isfinite(arr)):
        raise ValueError("ECEF components must be finite")
    return arr


def geodetic_to_ecef(p: GeodeticPosition) -> np.ndarray:
    sin_lat, cos_lat = math.sin(p.latitude), math.cos(p.latitude)
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    return np.array([
        (n + p.height) * cos_lat * math.cos(p.longitude),
        (n + p.height) * cos_lat * math.sin(p.longitude),
        (n * (1.0 - WGS84_E2) + p.height) * sin_lat,
    ])


def ecef_to_geodetic(v) -> GeodeticPosition:
    """Iterative inverse of :func:`geodetic_to_ecef`.

    Latitude is refined by fixed-point iteration on the prime-vertical
    radius until successive values agree well below 1e-12 rad (the
    iteration is cheap, and round trips at orbital heights need the extra
    digits). Height is taken from whichever of the horizontal or vertical
    coordinate is better conditioned at that latitude.
    """
    x, y, z = as_ecef(v)
    p = math.hypot(x, y)
    if p == 0.0 and z == 0.0:
        raise DegenerateInputError("cannot convert the Earth's center to geodetic coordinates")

    lon = math.atan2(y, x) if p > 0.0 else 0.0
    lat = math.atan2(z, p * (1.0 - WGS84_E2))
    for _ in range(_MAX_ITER):
        sin_lat = math.sin(lat)
        n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
        new_lat = math.atan2(z + WGS84_E2 * n * sin_lat, p)
        done = abs(new_lat - lat) < _LAT_TOL * 1e-3
        lat = new_lat
        if done:
            break

    sin_lat, cos_lat = math.sin(lat), math.cos(lat)
    n = WGS84_A / math.sqrt(1.0 - WGS84_E2 * sin_lat * sin_lat)
    if abs(cos_lat) > abs(sin_lat):
        h = p / cos_lat - n
    else:
        h = z / sin_lat - n * (1.0 - WGS84_E2)
    return GeodeticPosition(lat, wrap_longitude(lon), h)


def enu_basis(lat: float, lon: float) -> np.ndarray:
    """Rows are the local east, north and up unit vectors in ECEF."""
    sl, cl = math.sin(lat), math.cos(lat)
    so, co = math.sin(lon), math.cos(lon)
    return np.array([
        [-so, co, 0.0],
        [-sl * co, -sl * so, cl],
        [cl * co, cl * so, sl],
    ])


def up_vector(receiver) -> np.ndarray:
    """Ellipsoid normal at the receiver's geodetic position."""
    g = ecef_to_geodetic(receiver)
    return enu_basis(g.latitude, g.longitude)[2]


def look_angles(receiver, satellite) -> LookAngles:
    rx = as_ecef(receiver)
    los = as_ecef(satellite) - rx
    rng = np.linalg.norm(los)
    if rng == 0.0:
        raise DegenerateInputError("receiver and satellite coincide")
    g = ecef_to_geodetic(rx)
    e, n, u = enu_basis(g.latitude, g.longitude) @ (los / rng)
    el = math.asin(max(-1.0, min(1.0, u)))
    az = math.atan2(e, n) % (2 * math.pi)
    if az >= 2 * math.pi:
        az = 0.0
    return LookAngles(el, az)


def elevations(receiver, satellites) -> np.ndarray:
    """Elevation of each satellite row as seen from ``receiver``."""
    rx = as_ecef(receiver)
    los = np.asarray(satellites, dtype=float).reshape(-1, 3) - rx
    rng = np.linalg.norm(los, axis=1)
    if np.any(rng == 0.0):
        raise DegenerateInputError("receiver and satellite coincide")
    g = ecef_to_geodetic(rx)
    up = enu_basis(g.latitude, g.longitude)[2]
    return np.arcsin(np.clip(los @ up / rng, -1.0, 1.0))


def geometry_matrix(receiver, satellites: Sequence) -> np.ndarray:
    """Rows ``(u, v, w, 1)`` with ``(u, v, w)`` the unit receiver-to-satellite vector."""
    rx = as_ecef(receiver)
    sats = np.asarray(satellites, dtype=float).reshape(-1, 3)
    if sats.shape[0] == 0:
        raise ValueError("at least one satellite is required")
    los = sats - rx
    ranges = np.linalg.norm(los, axis=1)
    if np.any(ranges == 0.0):
        raise DegenerateInputError("a satellite coincides with the receiver")
    a = np.ones((sats.shape[0], 4))
    a[:, :3] = los / ranges[:, None]
    return a
