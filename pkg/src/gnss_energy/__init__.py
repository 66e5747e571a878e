"""GPS receiver energy model and GDOP-weighted selective satellite tracking."""

from .energy import NAMURU, EnergyModelParams, OperatingPoint, PowerBreakdown, energy_saving, total_power
from .errors import (
    DegenerateGeometryError,
    DegenerateInputError,
    InsufficientMeasurementsError,
    InvalidOperatingPointError,
)
from .gdop import SelectionConfig, SelectionResult, gdop, optimize_weights, select_subset
from .geo import GeodeticPosition, ecef_to_geodetic, geodetic_to_ecef, geometry_matrix, look_angles
from .nav import AltitudeAiding, NavSolution, PseudorangeSet, solve_position

__version__ = "0.1.0"
