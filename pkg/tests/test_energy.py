import dataclasses
import json

import pytest

from gnss_energy.energy import (
    NAMURU,
    IdleParams,
    OperatingPoint,
    Procedure,
    accumulate_run_energy,
    acquisition_energy,
    energy_saving,
    load_profile,
    procedure_power,
    save_profile,
    total_power,
)
from gnss_energy.errors import InvalidOperatingPointError


def eq4(n, f):
    """Closed-form amortized Namuru power in mW."""
    return 40.87 + 0.64 * f + 17.82 * n * f


class TestNamuruConstants:
    def test_published_values(self):
        p = NAMURU
        assert (p.rf.U_r, p.rf.I_r, p.rf.t_r) == (5.0, 0.064, 0.002)
        assert (p.acquisition.U_s, p.acquisition.I_a, p.acquisition.t_a, p.acquisition.T_a) == (3.3, 0.130, 1.2, 60.0)
        assert (p.track_fit.intercept, p.track_fit.slope) == (11.88, 7.26)
        assert (p.ephemeris.I_e, p.ephemeris.t_e, p.ephemeris.t_re, p.ephemeris.T_e) == (0.131, 50.0, 36.0, 1800.0)
        assert (p.navigation_fit.intercept, p.navigation_fit.slope) == (2.0, 1.65)
        assert not p.idle.included

    def test_acquisition(self):
        assert procedure_power("acquisition", NAMURU, OperatingPoint(8, 1)) == pytest.approx(8.59, abs=0.01)

    def test_ephemeris(self):
        assert procedure_power(Procedure.EPHEMERIS, NAMURU, OperatingPoint(8, 1)) == pytest.approx(18.4, abs=0.05)

    @pytest.mark.parametrize("f", range(1, 11))
    def test_rf(self, f):
        assert procedure_power("rf", NAMURU, OperatingPoint(3, f)) == pytest.approx(0.64 * f, rel=1e-12)

    def test_track_and_navigation_fits(self):
        op = OperatingPoint(8, 2)  # L = 4 ms
        assert procedure_power("track", NAMURU, op) == pytest.approx(11.88 + 7.26 * 8 * 4)
        assert procedure_power("navigation", NAMURU, op) == pytest.approx(2.0 + 1.65 * 8 * 4)


class TestTotalPower:
    @pytest.mark.parametrize("n", range(1, 13))
    def test_matches_closed_form(self, n):
        for f in range(1, 11):
            assert total_power(NAMURU, OperatingPoint(n, f)).total == pytest.approx(eq4(n, f), abs=0.05)

    def test_eight_satellites(self):
        assert total_power(NAMURU, OperatingPoint(8, 1)).total == pytest.approx(184.07, abs=0.05)

    def test_track_dominates(self):
        bd = total_power(NAMURU, OperatingPoint(8, 1))
        others = [bd.rf, bd.acquisition, bd.ephemeris, bd.navigation, bd.idle]
        assert bd.track > max(others)

    def test_published_breakdown_uses_one_ms(self):
        # The 62 % track share is what N*L gives with L = 1 ms rather than L = 2f.
        p = NAMURU
        track = p.track_fit(8 * 1)
        total = 8.59 + 18.4 + 0.64 + track + p.navigation_fit(8 * 1)
        assert track / total == pytest.approx(0.62, abs=0.005)

    def test_seven_minus_five(self):
        d = total_power(NAMURU, OperatingPoint(7, 1)).total - total_power(NAMURU, OperatingPoint(5, 1)).total
        assert d == pytest.approx(35.64, abs=0.05)

    def test_reconstruction(self):
        op = OperatingPoint(1, 1)
        const = (procedure_power("acquisition", NAMURU, op) + procedure_power("ephemeris", NAMURU, op)
                 + NAMURU.track_fit.intercept + NAMURU.navigation_fit.intercept)
        assert const == pytest.approx(40.87, abs=0.01)
        assert 2 * (NAMURU.track_fit.slope + NAMURU.navigation_fit.slope) == pytest.approx(17.82, abs=0.01)

    def test_breakdown_sums(self):
        for n in (1, 4, 9):
            for f in (1, 5, 10):
                bd = total_power(NAMURU, OperatingPoint(n, f))
                parts = bd.as_dict()
                total = parts.pop("total")
                assert total == pytest.approx(sum(parts.values()), abs=1e-9)
                assert all(v > 0 for k, v in parts.items() if k != "idle")

    def test_affine_in_n_and_f(self):
        tp = lambda n, f: total_power(NAMURU, OperatingPoint(n, f)).total  # noqa: E731
        for f in (1, 3, 7):
            for n in range(1, 10):
                assert tp(n + 2, f) - 2 * tp(n + 1, f) + tp(n, f) == pytest.approx(0.0, abs=1e-9)
        for n in (1, 5):
            for f in range(1, 9):
                assert tp(n, f + 2) - 2 * tp(n, f + 1) + tp(n, f) == pytest.approx(0.0, abs=1e-9)

    def test_idle_flag(self):
        with_idle = dataclasses.replace(NAMURU, idle=IdleParams(P_i=0.5, included=True))
        op = OperatingPoint(8, 1)
        bd = total_power(with_idle, op)
        assert bd.idle == pytest.approx(0.5 * (1.0 - 0.002))
        assert bd.total - total_power(NAMURU, op).total == pytest.approx(bd.idle)


class TestOperatingPoint:
    @pytest.mark.parametrize("n,f", [(0, 1), (-1, 1), (2.5, 1), (4, 0.5), (4, 11)])
    def test_invalid(self, n, f):
        with pytest.raises(InvalidOperatingPointError):
            OperatingPoint(n, f)

    def test_l_is_two_f(self):
        assert OperatingPoint(4, 3).L == 6


class TestProfiles:
    def test_builtin(self):
        assert load_profile("namuru") is NAMURU

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "p.json"
        save_profile(NAMURU, path)
        assert load_profile(path) == NAMURU

    def test_alternate_profile(self, tmp_path):
        d = NAMURU.to_dict()
        d["track_fit"]["slope"] = 3.0
        d["name"] = "halved-track"
        path = tmp_path / "alt.json"
        path.write_text(json.dumps(d))
        alt = load_profile(path)
        assert alt.name == "halved-track"
        assert total_power(alt, OperatingPoint(8, 1)).track == pytest.approx(11.88 + 3.0 * 16)

    def test_rejects_nonpositive(self):
        d = NAMURU.to_dict()
        d["rf"]["I_r"] = 0.0
        with pytest.raises(ValueError):
            type(NAMURU).from_dict(d)

    def test_rejects_acquisition_slower_than_ephemeris(self):
        d = NAMURU.to_dict()
        d["acquisition"]["T_a"] = 3600.0
        with pytest.raises(ValueError):
            type(NAMURU).from_dict(d)


class TestAccumulate:
    def test_constant_eight(self):
        run = accumulate_run_energy([8] * 100, 1.0, NAMURU)
        assert run.energy_j == pytest.approx(18.407, abs=0.01)
        assert run.duration_s == 100.0

    @pytest.mark.parametrize("f", [1.0, 2.0, 5.0, 10.0])
    def test_constant_mean_equals_total(self, f):
        run = accumulate_run_energy([6] * 37, f, NAMURU)
        assert run.mean_mw == pytest.approx(total_power(NAMURU, OperatingPoint(6, f)).total, rel=1e-12)

    def test_alternating(self):
        run = accumulate_run_energy([8, 4] * 50, 1.0, NAMURU)
        avg = (total_power(NAMURU, OperatingPoint(8, 1)).total + total_power(NAMURU, OperatingPoint(4, 1)).total) / 2
        assert run.mean_mw == pytest.approx(avg, abs=1e-9)

    def test_reacquisition_charge(self):
        base = accumulate_run_energy([5] * 60, 1.0, NAMURU)
        run = accumulate_run_energy([5] * 60, 1.0, NAMURU, reacquisition_events=2)
        assert run.energy_j - base.energy_j == pytest.approx(2 * (3.3 * 0.130 * 1.2 + 5 * 0.064 * 0.002))
        assert acquisition_energy(NAMURU) == pytest.approx(0.51544)

    def test_empty(self):
        with pytest.raises(ValueError):
            accumulate_run_energy([], 1.0, NAMURU)

    def test_invalid_n(self):
        with pytest.raises(InvalidOperatingPointError):
            accumulate_run_energy([4, 0], 1.0, NAMURU)


class TestEnergySaving:
    def test_identity(self):
        assert energy_saving(150.0, 150.0) == 0.0

    def test_seven_vs_five(self):
        full = total_power(NAMURU, OperatingPoint(7, 1)).total
        sel = total_power(NAMURU, OperatingPoint(5, 1)).total
        assert energy_saving(full, sel) == pytest.approx(0.2144, abs=0.001)

    def test_seven_vs_mean_four_point_six(self):
        full = total_power(NAMURU, OperatingPoint(7, 1)).total
        # mean power is affine in N, so a mean of 4.6 tracked satellites costs eq4(4.6, 1)
        sel = accumulate_run_energy([5, 5, 5, 4, 4] * 20, 1.0, NAMURU).mean_mw
        assert energy_saving(full, sel) == pytest.approx(0.257, abs=0.002)

    @pytest.mark.parametrize("full", [0.0, -3.0])
    def test_nonpositive_full(self, full):
        with pytest.raises(ValueError):
            energy_saving(full, 10.0)
