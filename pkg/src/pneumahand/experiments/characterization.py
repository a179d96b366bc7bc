"""Actuator characterization protocols on the rig geometry.

Finger: sweep both chamber pressures 0..250 kPa in 50 kPa steps (36 cells),
record the free tip position per cell, then measure the force against a tip
constraint for the three max-inflation cases. Bellow: hold the hinge at
20..100 deg in 20 deg steps, inflate 50..250 kPa in 50 kPa steps, measure
force at a 5 cm radius. Regulation noise follows the pressure sensor's
3-sigma accuracy; a chamber is only re-regulated when its target changes,
which is why the fully-flexed finger case measures exactly zero force.
"""

import numpy as np
from scipy.spatial import ConvexHull

from ..actuators import bellow_torque, finger_free_pose, fingertip_force
from .report import ExperimentReport

PRESSURE_GRID = tuple(float(p) for p in np.arange(0.0, 250e3 + 1, 50e3))
ANGLE_GRID_DEG = (20.0, 40.0, 60.0, 80.0, 100.0)
BELLOW_PRESSURES = tuple(float(p) for p in np.arange(50e3, 250e3 + 1, 50e3))
RIG_RADIUS = 0.05   # m, force sensor contact at 5 cm from the hinge

CASES = ("base", "tip", "both")


def _regulated(rng, target, sigma, max_pressure):
    """Realized chamber pressure after noisy closed-loop regulation."""
    return float(np.clip(target + sigma * rng.standard_normal(), 0.0, max_pressure))


def run_finger_characterization(model, finger="index", repetitions=5,
                                seed=None, config_digest=""):
    """Free workspace plus constrained-tip forces of one two-compartment finger."""
    spec = model.fingers[finger]
    if seed is None:
        seed = 0
    rng = np.random.default_rng(seed)
    sigma = _sensor_sigma()
    report = ExperimentReport(
        experiment=f"finger_characterization[{finger}]",
        seed=seed,
        config_digest=config_digest,
        columns=("p_base_kpa", "p_tip_kpa", "tip_x_mm", "tip_y_mm",
                 "case", "force_mean_n", "force_std_n"),
    )
    p_max = spec.base.max_pressure
    workspace = []
    stds = []
    for p_b in PRESSURE_GRID:
        for p_t in PRESSURE_GRID:
            free_xy, _ = finger_free_pose(spec, p_b, p_t)
            workspace.append(free_xy)
            forces = {case: [] for case in CASES}
            for _ in range(repetitions):
                pre_b = _regulated(rng, p_b, sigma, p_max)
                pre_t = _regulated(rng, p_t, sigma, p_max)
                constraint, _ = finger_free_pose(spec, pre_b, pre_t)
                for case in CASES:
                    # only chambers whose target changes get re-regulated
                    got_b, got_t = pre_b, pre_t
                    if case in ("base", "both") and p_b != p_max:
                        got_b = _regulated(rng, p_max, sigma, p_max)
                    if case in ("tip", "both") and p_t != p_max:
                        got_t = _regulated(rng, p_max, sigma, p_max)
                    force = fingertip_force(spec, got_b, got_t, constraint)
                    forces[case].append(float(np.hypot(*force)))
            for case in CASES:
                arr = np.asarray(forces[case])
                stds.append(arr.std())
                report.add_cell(
                    p_base_kpa=p_b / 1e3, p_tip_kpa=p_t / 1e3,
                    tip_x_mm=free_xy[0] * 1e3, tip_y_mm=free_xy[1] * 1e3,
                    case=case,
                    force_mean_n=float(arr.mean()),
                    force_std_n=float(arr.std()),
                )
    workspace = np.asarray(workspace)
    hull = ConvexHull(workspace)
    report.notes["workspace_hull_mm"] = (workspace[hull.vertices] * 1e3).tolist()
    report.notes["n_pressure_combinations"] = len(PRESSURE_GRID) ** 2

    def cell_mean(pb, pt, case):
        for cell in report.cells:
            if cell["p_base_kpa"] == pb and cell["p_tip_kpa"] == pt and cell["case"] == case:
                return cell["force_mean_n"]
        raise KeyError((pb, pt, case))

    extended = cell_mean(0.0, 0.0, "both")
    flexed = cell_mean(250.0, 250.0, "both")
    report.verdict(
        "extended_force_anchor",
        abs(extended - spec.max_tip_force) <= 0.02 * spec.max_tip_force,
        f"mean {extended:.3f} N vs {spec.max_tip_force} N",
    )
    report.verdict("flexed_force_zero", flexed <= 1e-9, f"mean {flexed:.3e} N")
    report.verdict("per_cell_std", max(stds) <= 0.1, f"max std {max(stds):.3f} N")
    report.verdict("grid_size", len(PRESSURE_GRID) ** 2 == 36,
                   f"{len(PRESSURE_GRID) ** 2} combinations")
    return report


_BELLOW_NAMES = ("proximal", "middle", "distal")


def _bellow_by_name(model, bellow):
    if bellow not in _BELLOW_NAMES:
        raise ValueError(f"unknown bellow '{bellow}', expected one of {_BELLOW_NAMES}")
    return model.thumb.bellows[_BELLOW_NAMES.index(bellow)]


def _sensor_sigma():
    # 3-sigma accuracy bound of the 250 kPa sensor
    return 0.014 * 250e3 / 3.0


def run_bellow_characterization(model, bellow="proximal", repetitions=5,
                                seed=None, config_digest=""):
    """Torque grid of one thumb bellow on the hinged-wing rig."""
    spec = _bellow_by_name(model, bellow)
    if seed is None:
        seed = 0
    rng = np.random.default_rng(seed)
    sigma = _sensor_sigma()
    report = ExperimentReport(
        experiment=f"bellow_characterization[{bellow}]",
        seed=seed,
        config_digest=config_digest,
        columns=("angle_deg", "pressure_kpa", "torque_mean_nm", "torque_std_nm",
                 "force_at_rig_n"),
    )
    stds = []
    by_angle = {}
    for angle_deg in ANGLE_GRID_DEG:
        angle = np.deg2rad(angle_deg)
        for p in BELLOW_PRESSURES:
            taus = []
            for _ in range(repetitions):
                realized = _regulated(rng, p, sigma, spec.max_pressure)
                force = bellow_torque(spec, realized, angle) / RIG_RADIUS
                taus.append(force * RIG_RADIUS)
            taus = np.asarray(taus)
            stds.append(taus.std())
            by_angle.setdefault(angle_deg, []).append((p, taus.mean()))
            report.add_cell(
                angle_deg=angle_deg, pressure_kpa=p / 1e3,
                torque_mean_nm=float(taus.mean()),
                torque_std_nm=float(taus.std()),
                force_at_rig_n=float(taus.mean() / RIG_RADIUS),
            )
    # per-angle straight-line fit of torque against pressure
    tau_max = max(m for cells in by_angle.values() for _, m in cells)
    max_intercept = 0.0
    slopes = {}
    for angle_deg, cells in by_angle.items():
        ps = np.asarray([p for p, _ in cells])
        ts = np.asarray([t for _, t in cells])
        slope, intercept = np.polyfit(ps, ts, 1)
        slopes[angle_deg] = float(slope)
        max_intercept = max(max_intercept, abs(intercept))
    report.notes["torque_vs_pressure_slope_nm_per_pa"] = slopes
    report.notes["pouch_area_m2"] = spec.pouch_area
    anchor = dict(by_angle[20.0])[250e3]
    report.notes["torque_at_20deg_250kpa_nm"] = float(anchor)
    report.verdict("per_cell_std", max(stds) < 0.1, f"max std {max(stds):.4f} N m")
    report.verdict("pressure_linearity_intercept",
                   max_intercept < 0.01 * tau_max,
                   f"max |intercept| {max_intercept:.4f} N m vs tau_max {tau_max:.2f}")
    return report


def run_all_bellow_characterizations(model, repetitions=5, seed=None,
                                     config_digest=""):
    """All three thumb bellows plus the torque-vs-area fit across them."""
    reports = {}
    anchors = []
    areas = []
    for i, name in enumerate(_BELLOW_NAMES):
        rep = run_bellow_characterization(
            model, name, repetitions,
            seed=None if seed is None else seed + i,
            config_digest=config_digest)
        reports[name] = rep
        anchors.append(rep.notes["torque_at_20deg_250kpa_nm"])
        areas.append(rep.notes["pouch_area_m2"])
    slope, intercept = np.polyfit(areas, anchors, 1)
    for rep in reports.values():
        rep.notes["torque_vs_area_slope_nm_per_m2"] = float(slope)
        rep.notes["torque_vs_area_intercept_nm"] = float(intercept)
    return reports
