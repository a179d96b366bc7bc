"""Quasi-static models of the two actuator families.

PneuFlex compartments bend as constant-curvature arcs, linearly in gauge
pressure. Bellows act across a hinge with torque = pressure * pouch area *
angle-dependent moment arm. Both carry enough volume information to close
the loop with the gas law.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PneuFlexCompartmentSpec:
    """One inflatable bending compartment.

    The free bend angle is pressure_to_bend_gain * gauge pressure; the elastic
    restoring torque about the bend is bend_stiffness * theta, which makes the
    pneumatic bending torque bend_stiffness * gain * p.
    """

    arc_length: float               # m
    pressure_to_bend_gain: float    # rad/Pa
    max_pressure: float = 250e3     # Pa gauge
    bend_stiffness: float = 0.05    # N m / rad
    rest_volume: float = 3.0e-6     # m^3
    volume_per_bend: float = 1.2e-6  # m^3 / rad

    def __post_init__(self):
        if self.arc_length <= 0.0:
            raise ValueError("arc length must be positive")
        if self.pressure_to_bend_gain < 0.0 or self.bend_stiffness < 0.0:
            raise ValueError("gains must be non-negative")
        if self.rest_volume <= 0.0:
            raise ValueError("rest volume must be positive")

    @property
    def max_free_bend(self):
        """Free bend [rad] at max pressure; tied to the gain by construction."""
        return self.pressure_to_bend_gain * self.max_pressure


@dataclass(frozen=True)
class TwoCompartmentFingerSpec:
    """Finger with separately inflatable base and tip chambers."""

    base: PneuFlexCompartmentSpec
    tip: PneuFlexCompartmentSpec
    tip_stiffness: float            # N/m, Cartesian spring of the constrained tip
    max_tip_force: float = 8.3      # N

    @property
    def total_length(self):
        return self.base.arc_length + self.tip.arc_length


@dataclass(frozen=True)
class BellowSpec:
    """Stacked fabric pouches acting across a hinge joint.

    moment_arm_table maps opening angle [rad] -> effective arm [m]; angles
    strictly increasing, arms positive and non-increasing. Outside the table
    the arm clamps to the end values.
    """

    pouch_area: float                   # m^2 planform area of the air chamber
    moment_arm_table: tuple             # ((angle, arm), ...)
    pouch_count: int = 1
    max_pressure: float = 300e3         # Pa gauge
    max_opening: float = np.deg2rad(100.0)
    deflated_thickness: float = 2e-3    # m
    rest_volume: float = 2.0e-6         # m^3
    volume_per_rad: float = 1.0e-5      # m^3 / rad, wedge growth with opening

    def __post_init__(self):
        if self.pouch_area <= 0.0:
            raise ValueError("pouch area must be positive")
        if self.pouch_count < 1:
            raise ValueError("pouch count must be >= 1")
        angles = np.array([a for a, _ in self.moment_arm_table])
        arms = np.array([r for _, r in self.moment_arm_table])
        if angles.size < 2:
            raise ValueError("moment arm table needs at least two angles")
        if np.any(np.diff(angles) <= 0.0):
            raise ValueError("moment arm table angles must be strictly increasing")
        if np.any(arms <= 0.0):
            raise ValueError("moment arms must be strictly positive")
        if np.any(np.diff(arms) > 0.0):
            raise ValueError("moment arms must be non-increasing with angle")

    def effective_arm(self, opening_angle):
        """Piecewise-linear arm [m], clamped to the table ends."""
        angles = np.array([a for a, _ in self.moment_arm_table])
        arms = np.array([r for _, r in self.moment_arm_table])
        return np.interp(opening_angle, angles, arms)

    def volume(self, opening_angle):
        """Chamber volume [m^3] at an opening angle."""
        return self.rest_volume + self.volume_per_rad * np.asarray(opening_angle, dtype=float)


@dataclass(frozen=True)
class CalibrationTable:
    """Rectangular (angle, pressure) -> torque grid from a characterization rig."""

    angles: tuple          # rad
    pressures: tuple       # Pa gauge
    torques: tuple         # N m, row-major: torques[i][j] at (angles[i], pressures[j])
    provenance: str = ""

    def __post_init__(self):
        if len(set(self.angles)) != len(self.angles):
            raise ValueError("duplicate angles in calibration table")
        if len(set(self.pressures)) != len(self.pressures):
            raise ValueError("duplicate pressures in calibration table")
        for row in self.torques:
            if len(row) != len(self.pressures):
                raise ValueError("calibration table is not rectangular")
        if len(self.torques) != len(self.angles):
            raise ValueError("calibration table is not rectangular")


def finger_free_pose(spec, p_base, p_tip):
    """Planar tip position (x, y) and tip tangent angle of the free finger.

    Each compartment is a constant-curvature arc with bend angle
    gain * gauge pressure; the tip arc is chained onto the base arc. x runs
    along the straight finger, y is the bending (palmar) direction.
    """
    for p, comp, name in ((p_base, spec.base, "base"), (p_tip, spec.tip, "tip")):
        if p < 0.0 or p > comp.max_pressure:
            raise ValueError(f"{name} pressure {p:.0f} Pa outside [0, {comp.max_pressure:.0f}]")
    th_b = spec.base.pressure_to_bend_gain * p_base
    th_t = spec.tip.pressure_to_bend_gain * p_tip
    xb, yb = _arc_endpoint(spec.base.arc_length, th_b)
    xt, yt = _arc_endpoint(spec.tip.arc_length, th_t)
    c, s = np.cos(th_b), np.sin(th_b)
    return np.array([xb + c * xt - s * yt, yb + s * xt + c * yt]), th_b + th_t


def _arc_endpoint(length, theta):
    """Endpoint of a unit-speed constant-curvature arc from the origin."""
    if abs(theta) < 1e-12:
        return length, 0.5 * length * theta  # second order in theta, exact at 0
    r = length / theta
    return r * np.sin(theta), r * (1.0 - np.cos(theta))


def fingertip_force(spec, p_base, p_tip, constrained_tip):
    """Force [N] the finger exerts when its tip is held at `constrained_tip`.

    Linear Cartesian spring from the constrained point toward the free pose,
    magnitude clamped to max_tip_force. Zero exactly at the free pose.
    """
    free_xy, _ = finger_free_pose(spec, p_base, p_tip)
    delta = free_xy - np.asarray(constrained_tip, dtype=float)
    dist = float(np.hypot(*delta))
    if dist == 0.0:
        return np.zeros(2)
    magnitude = min(spec.tip_stiffness * dist, spec.max_tip_force)
    return delta / dist * magnitude


def bellow_torque(spec, p, opening_angle):
    """Hinge torque [N m] of a bellow at gauge pressure `p` and opening angle.

    Proportional to pressure and pouch area, falling with opening angle
    through the moment-arm table.
    """
    if np.any(np.asarray(p) < 0.0) or np.any(np.asarray(p) > spec.max_pressure):
        raise ValueError("pressure outside [0, max_pressure]")
    ang = np.asarray(opening_angle)
    if np.any(ang < 0.0) or np.any(ang > spec.max_opening + 1e-12):
        raise ValueError("opening angle outside [0, max_opening]")
    tau = np.asarray(p, dtype=float) * spec.pouch_area * spec.effective_arm(opening_angle)
    return float(tau) if tau.ndim == 0 else tau


def fit_moment_arm(table, spec):
    """Recover the moment-arm table from a torque calibration grid.

    Per angle, the arm is the least-squares slope of torque against
    pressure * pouch_area, regressed through the origin. Rejects degenerate
    tables and fits where the arm grows with angle by more than 5% of the
    previous arm.
    """
    if len(table.pressures) < 2:
        raise ValueError("calibration table needs at least two pressures per angle")
    if len(table.angles) < 2:
        raise ValueError("calibration table needs at least two angles")
    x = np.asarray(table.pressures, dtype=float) * spec.pouch_area
    arms = []
    for angle, row in zip(table.angles, table.torques):
        tau = np.asarray(row, dtype=float)
        arm = float(np.dot(tau, x) / np.dot(x, x))
        if arm <= 0.0:
            raise ValueError(f"fitted arm at angle {angle:.3f} rad is not positive")
        arms.append(arm)
    offenders = [
        table.angles[i + 1]
        for i in range(len(arms) - 1)
        if arms[i + 1] > arms[i] * 1.05
    ]
    if offenders:
        raise ValueError(
            "fitted moment arm increases with angle at: "
            + ", ".join(f"{np.rad2deg(a):.1f} deg" for a in offenders)
        )
    return tuple((float(a), arm) for a, arm in zip(table.angles, arms))


def compartment_volume(spec, bend):
    """Chamber volume [m^3] of a compartment at bend angle `bend` [rad]."""
    bend = np.asarray(bend, dtype=float)
    if np.any(bend < 0.0):
        raise ValueError("bend angle must be non-negative")
    v = spec.rest_volume + spec.volume_per_bend * bend
    return float(v) if v.ndim == 0 else v


# --- calibration table text format: the same schema `experiments` emits -----

CALIBRATION_HEADER = "angle_deg,pressure_kpa,torque_nm"


def save_calibration_table(table, path):
    lines = [CALIBRATION_HEADER]
    for angle, row in zip(table.angles, table.torques):
        for p, tau in zip(table.pressures, row):
            lines.append(f"{np.rad2deg(angle):.6g},{p / 1e3:.6g},{tau:.9g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_calibration_table(path, provenance=None):
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not raw or raw[0].replace(" ", "") != CALIBRATION_HEADER:
        raise ValueError(f"{path}:1: expected header '{CALIBRATION_HEADER}'")
    cells = {}
    for i, ln in enumerate(raw[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 3:
            raise ValueError(f"{path}:{i}: expected 3 comma-separated values")
        try:
            a, p, tau = (float(v) for v in parts)
        except ValueError as exc:
            raise ValueError(f"{path}:{i}: {exc}") from None
        cells[(np.deg2rad(a), p * 1e3)] = tau
    angles = sorted({a for a, _ in cells})
    pressures = sorted({p for _, p in cells})
    try:
        torques = tuple(tuple(cells[(a, p)] for p in pressures) for a in angles)
    except KeyError:
        raise ValueError(f"{path}: grid is not rectangular") from None
    return CalibrationTable(
        angles=tuple(angles), pressures=tuple(pressures), torques=torques,
        provenance=provenance or str(path),
    )
