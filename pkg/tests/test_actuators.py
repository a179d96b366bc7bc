import numpy as np
import pytest

from pneumahand.actuators import (
    BellowSpec,
    CalibrationTable,
    PneuFlexCompartmentSpec,
    TwoCompartmentFingerSpec,
    bellow_torque,
    compartment_volume,
    finger_free_pose,
    fingertip_force,
    fit_moment_arm,
    load_calibration_table,
    save_calibration_table,
)
from pneumahand.constants import R_AIR, T_AMBIENT, P_ATMOSPHERE


def arc_end_quadrature(length, theta, n=200_001):
    """Independent oracle: integrate the unit-speed constant-curvature curve."""
    s = np.linspace(0.0, length, n)
    phi = (theta / length) * s
    return np.trapezoid(np.cos(phi), s), np.trapezoid(np.sin(phi), s)


def _finger(gain_base=None, gain_tip=None, l_base=0.05, l_tip=0.04,
            stiffness=100.0, max_force=8.3):
    p_max = 250e3
    gb = gain_base if gain_base is not None else (np.pi / 2) / p_max
    gt = gain_tip if gain_tip is not None else (np.pi / 2) / p_max
    base = PneuFlexCompartmentSpec(arc_length=l_base, pressure_to_bend_gain=gb)
    tip = PneuFlexCompartmentSpec(arc_length=l_tip, pressure_to_bend_gain=gt)
    return TwoCompartmentFingerSpec(base=base, tip=tip, tip_stiffness=stiffness,
                                    max_tip_force=max_force)


class TestFingerFreePose:
    def test_straight_at_zero_pressure(self):
        xy, angle = finger_free_pose(_finger(), 0.0, 0.0)
        assert xy == pytest.approx([0.09, 0.0], abs=1e-15)
        assert angle == 0.0

    def test_two_right_angle_arcs_frozen_oracle(self):
        # arcs 0.05/0.04 m both bent 90 deg; closed form: (0.02/pi, 0.18/pi),
        # frozen from a pre-build quadrature script
        xy, angle = finger_free_pose(_finger(), 250e3, 250e3)
        assert xy[0] == pytest.approx(0.02 / np.pi, rel=1e-12)
        assert xy[1] == pytest.approx(0.18 / np.pi, rel=1e-12)
        assert angle == pytest.approx(np.pi, rel=1e-12)

    def test_matches_quadrature_oracle_at_odd_angles(self):
        spec = _finger()
        p_b, p_t = 137e3, 61e3
        th_b = spec.base.pressure_to_bend_gain * p_b
        th_t = spec.tip.pressure_to_bend_gain * p_t
        xb, yb = arc_end_quadrature(0.05, th_b)
        xt, yt = arc_end_quadrature(0.04, th_t)
        c, s = np.cos(th_b), np.sin(th_b)
        expected = (xb + c * xt - s * yt, yb + s * xt + c * yt)
        xy, _ = finger_free_pose(spec, p_b, p_t)
        assert xy == pytest.approx(expected, rel=1e-8)

    def test_base_and_tip_chambers_are_not_interchangeable(self):
        spec = _finger()
        a, _ = finger_free_pose(spec, 150e3, 0.0)
        b, _ = finger_free_pose(spec, 0.0, 150e3)
        assert np.linalg.norm(a - b) > 1e-3

    def test_continuity_one_pascal(self, model):
        spec = model.fingers["index"]
        for p in (0.0, 100e3, 249e3):
            a, _ = finger_free_pose(spec, p, p)
            b, _ = finger_free_pose(spec, p + 1.0, p + 1.0)
            assert np.linalg.norm(a - b) < 1e-5

    def test_pressure_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            finger_free_pose(_finger(), -1.0, 0.0)
        with pytest.raises(ValueError):
            finger_free_pose(_finger(), 0.0, 260e3)


class TestFingertipForce:
    def test_zero_at_free_pose(self):
        spec = _finger()
        free, _ = finger_free_pose(spec, 120e3, 80e3)
        force = fingertip_force(spec, 120e3, 80e3, free)
        assert np.linalg.norm(force) == 0.0

    def test_default_finger_hits_max_force_when_held_straight(self, model):
        spec = model.fingers["index"]
        straight, _ = finger_free_pose(spec, 0.0, 0.0)
        force = fingertip_force(spec, spec.base.max_pressure,
                                spec.tip.max_pressure, straight)
        assert np.linalg.norm(force) == pytest.approx(8.3, rel=1e-12)

    def test_linear_spring_below_clamp(self):
        spec = _finger(stiffness=50.0, max_force=1e9)
        free, _ = finger_free_pose(spec, 200e3, 150e3)
        offset = np.array([0.01, -0.005])
        f_full = fingertip_force(spec, 200e3, 150e3, free - offset)
        f_half = fingertip_force(spec, 200e3, 150e3, free - 0.5 * offset)
        assert np.linalg.norm(f_full) == pytest.approx(
            2.0 * np.linalg.norm(f_half), rel=1e-12)

    def test_direction_points_from_constraint_to_free_pose(self):
        spec = _finger(stiffness=50.0)
        free, _ = finger_free_pose(spec, 200e3, 150e3)
        constrained = free - np.array([0.02, 0.0])
        force = fingertip_force(spec, 200e3, 150e3, constrained)
        assert force[0] > 0.0 and abs(force[1]) < 1e-12

    def test_clamped_magnitude(self):
        spec = _finger(stiffness=1e6, max_force=8.3)
        free, _ = finger_free_pose(spec, 250e3, 250e3)
        force = fingertip_force(spec, 250e3, 250e3, free - np.array([0.05, 0.0]))
        assert np.linalg.norm(force) == pytest.approx(8.3, rel=1e-12)


def _bellow(area=8.8e-4):
    table = ((0.0, 0.022), (np.deg2rad(50), 0.015), (np.deg2rad(100), 0.008))
    return BellowSpec(pouch_area=area, moment_arm_table=table)


class TestBellowTorque:
    def test_zero_pressure_zero_torque(self):
        spec = _bellow()
        for angle in np.linspace(0.0, spec.max_opening, 7):
            assert bellow_torque(spec, 0.0, angle) == 0.0

    def test_paper_anchor_values(self, model):
        for i, want in enumerate((4.4, 3.2, 1.9)):
            spec = model.thumb.bellows[i]
            assert bellow_torque(spec, 250e3, np.deg2rad(20)) == pytest.approx(want, rel=1e-9)

    def test_exact_linearity_in_pressure(self):
        spec = _bellow()
        angle = np.deg2rad(37.0)
        assert bellow_torque(spec, 250e3, angle) / bellow_torque(spec, 50e3, angle) \
            == pytest.approx(5.0, rel=1e-12)

    def test_exact_linearity_in_area(self):
        angle = np.deg2rad(61.0)
        t1 = bellow_torque(_bellow(4e-4), 200e3, angle)
        t2 = bellow_torque(_bellow(8e-4), 200e3, angle)
        assert t2 == pytest.approx(2.0 * t1, rel=1e-12)

    def test_non_increasing_in_angle_dense_sweep(self):
        spec = _bellow()
        angles = np.linspace(0.0, spec.max_opening, 400)
        torques = [bellow_torque(spec, 150e3, a) for a in angles]
        assert np.all(np.diff(torques) <= 1e-12)

    def test_out_of_range_rejected(self):
        spec = _bellow()
        with pytest.raises(ValueError):
            bellow_torque(spec, 301e3, 0.1)
        with pytest.raises(ValueError):
            bellow_torque(spec, 100e3, spec.max_opening + 0.1)

    def test_table_validation(self):
        with pytest.raises(ValueError):
            BellowSpec(pouch_area=1e-4,
                       moment_arm_table=((0.0, 0.01), (0.5, 0.02)))  # increasing arm
        with pytest.raises(ValueError):
            BellowSpec(pouch_area=1e-4,
                       moment_arm_table=((0.5, 0.01), (0.2, 0.008)))  # unsorted


class TestFitMomentArm:
    def _synthetic_table(self, spec, angles_deg, pressures):
        torques = tuple(
            tuple(bellow_torque(spec, p, np.deg2rad(a)) for p in pressures)
            for a in angles_deg
        )
        return CalibrationTable(
            angles=tuple(np.deg2rad(a) for a in angles_deg),
            pressures=tuple(pressures), torques=torques)

    def test_round_trip_recovers_arms(self):
        spec = _bellow()
        angles_deg = (0.0, 25.0, 50.0, 75.0, 100.0)
        table = self._synthetic_table(spec, angles_deg, (50e3, 100e3, 150e3, 200e3, 250e3))
        fitted = fit_moment_arm(table, spec)
        for (angle, arm) in fitted:
            assert arm == pytest.approx(spec.effective_arm(angle), rel=1e-9)

    def test_zero_residual_on_proportional_data(self):
        spec = _bellow()
        table = self._synthetic_table(spec, (10.0, 60.0), (50e3, 150e3, 250e3))
        fitted = dict(fit_moment_arm(table, spec))
        for angle, arm in fitted.items():
            for p in (50e3, 150e3, 250e3):
                assert p * spec.pouch_area * arm == pytest.approx(
                    bellow_torque(spec, p, angle), rel=1e-12)

    def test_paper_protocol_anchor_row(self, model):
        # 20 deg, five pressures 50..250 kPa, torque linear up to 4.4 N m
        spec = model.thumb.bellows[0]
        pressures = tuple(np.arange(50e3, 250e3 + 1, 50e3))
        torques = tuple(4.4 * p / 250e3 for p in pressures)
        table = CalibrationTable(
            angles=(np.deg2rad(20.0), np.deg2rad(40.0)),
            pressures=pressures,
            torques=(torques, tuple(0.9 * t for t in torques)),
        )
        fitted = dict(fit_moment_arm(table, spec))
        assert fitted[np.deg2rad(20.0)] == pytest.approx(
            4.4 / (250e3 * spec.pouch_area), rel=1e-12)

    def test_single_pressure_rejected(self):
        spec = _bellow()
        table = CalibrationTable(angles=(0.1, 0.2), pressures=(100e3,),
                                 torques=((1.0,), (0.9,)))
        with pytest.raises(ValueError):
            fit_moment_arm(table, spec)

    def test_non_monotone_fit_rejected_with_offender(self):
        spec = _bellow()
        table = CalibrationTable(
            angles=(0.1, 0.5), pressures=(100e3, 200e3),
            torques=((1.0, 2.0), (1.5, 3.0)),  # arm grows 50% with angle
        )
        with pytest.raises(ValueError, match="28.6"):
            fit_moment_arm(table, spec)

    def test_calibration_csv_round_trip(self, tmp_path):
        spec = _bellow()
        table = self._synthetic_table(spec, (20.0, 60.0, 100.0), (50e3, 150e3, 250e3))
        path = tmp_path / "cal.csv"
        save_calibration_table(table, path)
        loaded = load_calibration_table(path)
        assert loaded.angles == pytest.approx(table.angles)
        assert loaded.pressures == pytest.approx(table.pressures)
        for row_a, row_b in zip(loaded.torques, table.torques):
            assert row_a == pytest.approx(row_b, rel=1e-9)

    def test_csv_bad_header_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("angle,torque\n1,2\n")
        with pytest.raises(ValueError, match=":1"):
            load_calibration_table(path)


class TestCompartmentVolume:
    def test_rest_volume_at_zero_bend(self):
        spec = PneuFlexCompartmentSpec(arc_length=0.04, pressure_to_bend_gain=1e-5,
                                       rest_volume=3e-6, volume_per_bend=1.2e-6)
        assert compartment_volume(spec, 0.0) == 3e-6

    def test_rigid_chamber_limit(self):
        spec = PneuFlexCompartmentSpec(arc_length=0.04, pressure_to_bend_gain=1e-5,
                                       rest_volume=3e-6, volume_per_bend=0.0)
        assert compartment_volume(spec, 2.0) == 3e-6

    def test_pressure_drops_as_bend_grows_at_fixed_mass(self):
        spec = PneuFlexCompartmentSpec(arc_length=0.04, pressure_to_bend_gain=1e-5,
                                       rest_volume=3e-6, volume_per_bend=1.2e-6)
        mass = 2.0 * P_ATMOSPHERE * 3e-6 / (R_AIR * T_AMBIENT)
        pressures = [
            mass * R_AIR * T_AMBIENT / compartment_volume(spec, bend)
            for bend in (0.0, 0.5, 1.0, 2.0)
        ]
        assert np.all(np.diff(pressures) < 0.0)

    def test_negative_bend_rejected(self):
        spec = PneuFlexCompartmentSpec(arc_length=0.04, pressure_to_bend_gain=1e-5)
        with pytest.raises(ValueError):
            compartment_volume(spec, -0.1)


class TestSpecInvariants:
    def test_max_free_bend_ties_gain_to_max_pressure(self):
        spec = PneuFlexCompartmentSpec(arc_length=0.05, pressure_to_bend_gain=2e-6,
                                       max_pressure=250e3)
        assert spec.max_free_bend == pytest.approx(2e-6 * 250e3)

    def test_little_finger_strictly_shorter(self, model):
        little = model.fingers["little"].total_length
        for name in ("index", "middle", "ring"):
            assert little < model.fingers[name].total_length

    def test_total_length_is_sum_of_arcs(self, model):
        for spec in model.fingers.values():
            assert spec.total_length == pytest.approx(
                spec.base.arc_length + spec.tip.arc_length)
