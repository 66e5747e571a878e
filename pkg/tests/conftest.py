import numpy as np
import pytest

from gnss_energy.geo import GeodeticPosition, geodetic_to_ecef

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def sky_geometry(rng, r, min_el_deg=10.0):
    """Geometry matrix with directions uniform in sin(elevation) above a mask."""
    el = np.arcsin(rng.uniform(np.sin(np.radians(min_el_deg)), 1.0, r))
    az = rng.uniform(0.0, 2 * np.pi, r)
    a = np.ones((r, 4))
    a[:, 0] = np.cos(el) * np.sin(az)
    a[:, 1] = np.cos(el) * np.cos(az)
    a[:, 2] = np.sin(el)
    return a


def random_receiver(rng):
    g = GeodeticPosition(rng.uniform(-1.4, 1.4), rng.uniform(-3.1, 3.1), rng.uniform(-100, 3000))
    return geodetic_to_ecef(g), g


def satellites_above(rng, receiver, geo, r, radius=26_560_000.0):
    """``r`` satellites on a sphere of ``radius`` placed above the receiver's horizon."""
    from gnss_energy.geo import enu_basis

    basis = enu_basis(geo.latitude, geo.longitude)
    sats = []
    while len(sats) < r:
        el = rng.uniform(np.radians(10), np.radians(85))
        az = rng.uniform(0, 2 * np.pi)
        d = basis.T @ np.array([np.cos(el) * np.sin(az), np.cos(el) * np.cos(az), np.sin(el)])
        # distance along d to the orbital sphere
        b = receiver @ d
        t = -b + np.sqrt(b * b - (receiver @ receiver - radius ** 2))
        sats.append(receiver + t * d)
    return np.array(sats)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
