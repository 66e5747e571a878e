import math

import numpy as np
import pytest

from conftest import random_receiver, satellites_above
from gnss_energy.errors import DegenerateInputError, InsufficientMeasurementsError
from gnss_energy.geo import GeodeticPosition, ecef_to_geodetic, geodetic_to_ecef, geometry_matrix
from gnss_energy.gdop import gdop
from gnss_energy.nav import (
    AltitudeAiding,
    NavSolution,
    PseudorangeSet,
    predict_pseudorange,
    solution_error,
    solve_position,
)


def consistent_set(receiver, bias, sats):
    rho = [math.sqrt(sum((s[i] - receiver[i]) ** 2 for i in range(3))) + bias for s in sats]
    return PseudorangeSet.from_arrays(range(len(sats)), sats, rho)


class TestPredictPseudorange:
    def test_pure_range(self):
        rx = np.array([6378137.0, 10.0, -20.0])
        assert predict_pseudorange(rx, 0.0, rx + [20200000.0, 0, 0]) == 20200000.0

    def test_bias(self):
        rx = np.array([6378137.0, 10.0, -20.0])
        assert predict_pseudorange(rx, 300.0, rx + [20200000.0, 0, 0]) == 20200300.0

    def test_norm_oracle(self, rng):
        for _ in range(100):
            a, b = rng.normal(size=3) * 1e7, rng.normal(size=3) * 2e7
            expect = math.sqrt(sum((b[i] - a[i]) ** 2 for i in range(3)))
            # 1e-9 m is below one ulp at these ranges; allow two ulps of rounding
            assert abs(predict_pseudorange(a, 0.0, b) - expect) <= max(1e-9, 2 * math.ulp(expect))

    def test_coincident(self):
        with pytest.raises(DegenerateInputError):
            predict_pseudorange([1.0, 2.0, 3.0], 0.0, [1.0, 2.0, 3.0])


class TestPseudorangeSet:
    def test_unique_indices(self):
        with pytest.raises(ValueError):
            PseudorangeSet.from_arrays([1, 1], np.ones((2, 3)), [2e7, 2e7])

    def test_positive_ranges(self):
        with pytest.raises(ValueError):
            PseudorangeSet.from_arrays([1], np.ones((1, 3)), [-5.0])


class TestSolvePosition:
    def test_six_satellites_from_earth_center(self, rng):
        rx, g = random_receiver(rng)
        sats = satellites_above(rng, rx, g, 6)
        sol = solve_position(consistent_set(rx, 1234.5, sats))
        assert sol.converged
        assert np.linalg.norm(sol.position - rx) < 1e-6
        assert sol.clock_bias == pytest.approx(1234.5, abs=1e-6)
        assert sol.iterations <= 20

    def test_noiseless_recovery_100_geometries(self):
        rng = np.random.default_rng(2024)
        for _ in range(100):
            rx, g = random_receiver(rng)
            sats = satellites_above(rng, rx, g, int(rng.integers(4, 11)))
            bias = rng.uniform(-1e5, 1e5)
            sol = solve_position(consistent_set(rx, bias, sats))
            assert np.linalg.norm(sol.position - rx) <= 1e-6
            assert abs(sol.clock_bias - bias) <= 1e-6
            assert sol.residual_rms < 1e-6

    def test_bias_shift(self, rng):
        for _ in range(20):
            rx, g = random_receiver(rng)
            sats = satellites_above(rng, rx, g, 7)
            m = consistent_set(rx, 0.0, sats)
            shifted = PseudorangeSet.from_arrays(range(7), sats, m.ranges + 300.0)
            a, b = solve_position(m), solve_position(shifted)
            assert np.linalg.norm(a.position - b.position) < 1e-6
            assert b.clock_bias - a.clock_bias == pytest.approx(300.0, abs=1e-6)

    def test_three_satellites_unaided(self, rng):
        rx, g = random_receiver(rng)
        with pytest.raises(InsufficientMeasurementsError):
            solve_position(consistent_set(rx, 0.0, satellites_above(rng, rx, g, 3)))

    def test_altitude_aided_three_satellites(self):
        rng = np.random.default_rng(99)
        for _ in range(20):
            rx, g = random_receiver(rng)
            sats = satellites_above(rng, rx, g, 3)
            guess = np.r_[rx + rng.normal(size=3) * 2000.0, 0.0]
            sol = solve_position(consistent_set(rx, 77.0, sats), guess, AltitudeAiding(g.height))
            assert sol.converged
            assert np.linalg.norm(sol.position - rx) < 1e-5
            assert sol.clock_bias == pytest.approx(77.0, abs=1e-5)

    def test_altitude_aided_from_earth_center(self):
        rng = np.random.default_rng(5)
        rx, g = random_receiver(rng)
        sats = satellites_above(rng, rx, g, 3)
        sol = solve_position(consistent_set(rx, 0.0, sats), None, AltitudeAiding(g.height))
        assert np.linalg.norm(sol.position - rx) < 1e-5

    def test_aided_cold_start_mirror_roots(self):
        # Three ranges and a height are four equations in four unknowns with two
        # exact roots; a cold start lands on either. Both fit the data exactly.
        rng = np.random.default_rng(5)
        mirrored = 0
        for _ in range(200):
            rx, g = random_receiver(rng)
            sats = satellites_above(rng, rx, g, 3)
            sol = solve_position(consistent_set(rx, 50.0, sats), None, AltitudeAiding(g.height))
            assert sol.converged and sol.residual_rms < 1e-6
            assert ecef_to_geodetic(sol.position).height == pytest.approx(g.height, abs=1e-6)
            mirrored += np.linalg.norm(sol.position - rx) > 1e-5
        assert mirrored == 4

    def test_translation_equivariance(self, rng):
        shift = np.array([1500.0, -2500.0, 750.0])
        for _ in range(20):
            rx, g = random_receiver(rng)
            sats = satellites_above(rng, rx, g, 8)
            rho = np.array([np.linalg.norm(s - rx) for s in sats]) + rng.normal(0, 5, 8)
            guess = np.r_[rx + 100.0, 0.0]
            a = solve_position(PseudorangeSet.from_arrays(range(8), sats, rho), guess)
            b = solve_position(PseudorangeSet.from_arrays(range(8), sats + shift, rho), guess + np.r_[shift, 0])
            # 1e-9 m is under one ulp of a 2e7 m coordinate; a few ulps is the floor
            assert np.linalg.norm(b.position - (a.position + shift)) < 5e-8

    def test_gdop_at_solution(self, rng):
        rx, g = random_receiver(rng)
        sats = satellites_above(rng, rx, g, 6)
        sol = solve_position(consistent_set(rx, 0.0, sats))
        assert sol.gdop_at_solution == pytest.approx(gdop(geometry_matrix(rx, sats)), rel=1e-9)

    def test_not_converged_is_reported(self, rng):
        rx, g = random_receiver(rng)
        sats = satellites_above(rng, rx, g, 6)
        sol = solve_position(consistent_set(rx, 0.0, sats), max_iter=1)
        assert not sol.converged
        assert sol.iterations == 1

    def test_noise_scales_with_gdop(self):
        """RMS error over 2000 noisy trials is ordered like the geometry's GDOP."""
        rx = geodetic_to_ecef(GeodeticPosition(0.5, 0.3, 0.0))
        g = ecef_to_geodetic(rx)
        from gnss_energy.geo import enu_basis

        basis = enu_basis(g.latitude, g.longitude)

        def sats_at(dirs_deg):
            out = []
            for el, az in dirs_deg:
                el, az = math.radians(el), math.radians(az)
                d = basis.T @ [math.cos(el) * math.sin(az), math.cos(el) * math.cos(az), math.sin(el)]
                out.append(rx + 2.2e7 * d)
            return np.array(out)

        classes = {
            "good": sats_at([(90, 0), (15, 0), (15, 120), (15, 240), (45, 60), (45, 180)]),
            "medium": sats_at([(80, 0), (30, 10), (35, 100), (30, 200), (60, 250), (50, 330)]),
            "poor": sats_at([(70, 0), (60, 20), (55, 40), (65, 60), (50, 80), (75, 100)]),
        }
        rng = np.random.default_rng(3)
        rms, dops = {}, {}
        for name, sats in classes.items():
            truth = np.array([np.linalg.norm(s - rx) for s in sats])
            errs = []
            for _ in range(2000):
                m = PseudorangeSet.from_arrays(range(6), sats, truth + rng.normal(0, 5.0, 6))
                sol = solve_position(m, np.r_[rx, 0.0])
                errs.append(solution_error(sol, rx))
            rms[name] = math.sqrt(np.mean(np.square(errs)))
            dops[name] = sol.gdop_at_solution
        assert dops["good"] < dops["medium"] < dops["poor"]
        assert rms["good"] < rms["medium"] < rms["poor"]


class TestSolutionError:
    def _sol(self, pos):
        return NavSolution(np.asarray(pos, dtype=float), 0.0, 1, True, 0.0, 1.0)

    def test_identity(self):
        assert solution_error(self._sol([1.0, 2.0, 3.0]), [1.0, 2.0, 3.0]) == 0.0

    def test_pythagorean(self):
        assert solution_error(self._sol([4.0, 6.0, 3.0]), [1.0, 2.0, 3.0]) == 5.0

    def test_batch_mean(self, rng):
        truth = rng.normal(size=(50, 3)) * 1e6
        offs = rng.normal(size=(50, 3)) * 10
        errs = [solution_error(self._sol(t + o), t) for t, o in zip(truth, offs)]
        oracle = sum(math.sqrt(sum(c * c for c in o)) for o in offs) / 50
        assert float(np.mean(errs)) == pytest.approx(oracle, rel=1e-9)
