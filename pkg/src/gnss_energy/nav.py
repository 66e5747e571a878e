"""Pseudorange forward model and Gauss-Newton position/clock solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateGeometryError, DegenerateInputError, InsufficientMeasurementsError
from .gdop import gdop, is_ill_conditioned, with_altitude_row
from .geo import WGS84_A, as_ecef, ecef_to_geodetic, enu_basis, geodetic_to_ecef, GeodeticPosition


@dataclass(frozen=True)
class Pseudorange:
    satellite_index: int
    satellite_position: np.ndarray
    pseudorange: float


@dataclass(frozen=True)
class PseudorangeSet:
    entries: tuple[Pseudorange, ...]
    epoch_time: float = 0.0

    def __post_init__(self):
        ids = [e.satellite_index for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("satellite indices must be unique")
        for e in self.entries:
            if not (np.isfinite(e.pseudorange) and e.pseudorange > 0):
                raise ValueError(f"pseudorange for satellite {e.satellite_index} must be positive and finite")

    @classmethod
    def from_arrays(cls, indices, positions, ranges, epoch_time: float = 0.0) -> PseudorangeSet:
        positions = np.asarray(positions, dtype=float).reshape(-1, 3)
        return cls(tuple(Pseudorange(int(i), positions[k].copy(), float(ranges[k]))
                         for k, i in enumerate(indices)), float(epoch_time))

    def __len__(self):
        return len(self.entries)

    def subset(self, indices) -> PseudorangeSet:
        keep = set(indices)
        return PseudorangeSet(tuple(e for e in self.entries if e.satellite_index in keep), self.epoch_time)

    @property
    def positions(self) -> np.ndarray:
        return np.array([e.satellite_position for e in self.entries]).reshape(-1, 3)

    @property
    def ranges(self) -> np.ndarray:
        return np.array([e.pseudorange for e in self.entries])


@dataclass(frozen=True)
class AltitudeAiding:
    """Prior ellipsoidal height used as one extra weighted measurement."""

    height: float
    weight: float = 1.0


@dataclass(frozen=True)
class NavSolution:
    position: np.ndarray
    clock_bias: float
    iterations: int
    converged: bool
    residual_rms: float
    gdop_at_solution: float


def predict_pseudorange(receiver, clock_bias: float, satellite) -> float:
    d = np.linalg.norm(as_ecef(satellite) - as_ecef(receiver))
    if d == 0.0:
        raise DegenerateInputError("receiver and satellite coincide")
    return float(d + clock_bias)


def _aided_start(sats: np.ndarray, height: float) -> np.ndarray:
    # point on the ellipsoid under the mean satellite direction
    d = sats.mean(axis=0)
    lat = np.arctan2(d[2], np.hypot(d[0], d[1]))
    lon = np.arctan2(d[1], d[0])
    return geodetic_to_ecef(GeodeticPosition(float(lat), float(lon), height))


def solve_position(
    measurements: PseudorangeSet,
    initial_guess: Sequence[float] | None = None,
    altitude: AltitudeAiding | None = None,
    tol: float = 1e-4,
    max_iter: int = 20,
) -> NavSolution:
    """Unweighted Gauss-Newton on pseudorange residuals.

    ``initial_guess`` is ``(x, y, z, bias)`` in meters; defaults to the
    Earth's center with zero bias. With ``altitude`` the geodetic height
    residual is added as one more row, so three satellites suffice.
    """
    need = 3 if altitude is not None else 4
    if len(measurements) < need:
        raise InsufficientMeasurementsError(f"need at least {need} pseudoranges, got {len(measurements)}")
    sats = measurements.positions
    rho = measurements.ranges

    state = np.zeros(4) if initial_guess is None else np.asarray(initial_guess, dtype=float).reshape(4).copy()
    if altitude is not None and np.linalg.norm(state[:3]) < 0.5 * WGS84_A:
        state[:3] = _aided_start(sats, altitude.height)

    sqrt_w = np.sqrt(altitude.weight) if altitude is not None else 0.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        los = sats - state[:3]
        ranges = np.linalg.norm(los, axis=1)
        if np.any(ranges == 0.0):
            raise DegenerateInputError("a satellite coincides with the receiver estimate")
        h = np.ones((len(rho), 4))
        h[:, :3] = -los / ranges[:, None]
        res = rho - (ranges + state[3])
        if altitude is not None:
            g = ecef_to_geodetic(state[:3])
            up = enu_basis(g.latitude, g.longitude)[2]
            h = np.vstack([h, sqrt_w * np.r_[up, 0.0]])
            res = np.r_[res, sqrt_w * (altitude.height - g.height)]
        normal = h.T @ h
        if is_ill_conditioned(normal):
            raise DegenerateGeometryError("singular normal equations")
        dx = np.linalg.solve(normal, h.T @ res)
        state += dx
        if np.linalg.norm(dx) < tol:
            converged = True
            break

    pos = state[:3].copy()
    final = rho - (np.linalg.norm(sats - pos, axis=1) + state[3])
    a = np.ones((len(rho), 4))
    a[:, :3] = (sats - pos) / np.linalg.norm(sats - pos, axis=1)[:, None]
    if altitude is not None:
        a = with_altitude_row(a, enu_basis(*_latlon(pos))[2])
    try:
        dop = gdop(a)
    except DegenerateGeometryError:
        dop = float("inf")
    return NavSolution(pos, float(state[3]), it, converged,
                       float(np.sqrt(np.mean(final ** 2))), dop)


def _latlon(pos):
    g = ecef_to_geodetic(pos)
    return g.latitude, g.longitude


def solution_error(solution: NavSolution, truth) -> float:
    return float(np.linalg.norm(np.asarray(solution.position) - as_ecef(truth)))
