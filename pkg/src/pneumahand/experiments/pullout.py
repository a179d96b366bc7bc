"""Reduced-order object pull-out model.

A sphere sits in the closed hand; every digit whose centerline presses into
the sphere (through the soft pulp layer) exerts its clamped spring force at
its deepest point, pointing inward. Pulling in a direction is resisted by
the digits forming a barrier on the far side, projected on the pull axis;
directions with no barrier digit are resisted by friction on the total grip
force. The barrier topology is a property of the grasp, so it is classified
once on the noiseless pass; sensor noise then perturbs only the forces.
Four direction gains are calibrated to the measured means; the remaining
two directions are model extrapolation.
"""

import numpy as np

from ..constants import R_AIR, T_AMBIENT
from ..hand import DIGITS, digit_polyline, hand_equilibrium
from .report import ExperimentReport

DIRECTIONS = {
    "distal": np.array([1.0, 0.0, 0.0]),
    "proximal": np.array([-1.0, 0.0, 0.0]),
    "radial": np.array([0.0, 1.0, 0.0]),
    "ulnar": np.array([0.0, -1.0, 0.0]),
    "palmar": np.array([0.0, 0.0, 1.0]),
    "dorsal": np.array([0.0, 0.0, -1.0]),
}
ANCHORED = ("distal", "ulnar", "radial", "palmar")
_BLOCK_COS = 0.2
PULP_MARGIN = 0.010   # m, soft pulp/glove layer that carries side contacts


class NoGraspError(ValueError):
    pass


def _digit_forces(model, joints, center, radius, margin=PULP_MARGIN):
    """Per-digit (force magnitude, inward normal) for digits pressing the sphere.

    Wrap contact: the deepest point of the digit's centerline within
    `radius + margin` of the center carries the digit's clamped spring
    force, pointing inward.
    """
    contacts = {}
    reach = radius + margin
    for digit in DIGITS:
        pts = digit_polyline(model, joints, digit, samples_per_arc=40)
        dists = np.linalg.norm(pts - center, axis=1)
        k = int(np.argmin(dists))
        dist = float(dists[k])
        if dist >= reach:
            continue
        depth = reach - dist
        if digit == "thumb":
            stiffness = model.thumb.tip_stiffness
            fmax = model.thumb.max_tip_force
        else:
            spec = model.fingers[digit]
            stiffness = spec.tip_stiffness
            fmax = spec.max_tip_force
        magnitude = min(stiffness * depth, fmax)
        offset = pts[k] - center
        inward = -offset / dist if dist > 0.0 else np.array([0.0, 0.0, -1.0])
        contacts[digit] = (magnitude, inward)
    return contacts


def _blocking_sets(contacts):
    """Which digits form the barrier per direction, from the nominal grasp."""
    sets = {}
    for name, u in DIRECTIONS.items():
        sets[name] = tuple(
            d for d, (_, n) in contacts.items() if -(n @ u) > _BLOCK_COS
        )
    return sets


def _raw_resistance(contacts, mu, blocking):
    """Barrier-plus-friction resistance per direction, before calibration."""
    raw = {}
    for name, u in DIRECTIONS.items():
        blockers = [d for d in blocking[name] if d in contacts]
        if blockers:
            raw[name] = float(sum(
                contacts[d][0] * max(-(contacts[d][1] @ u), 0.0) for d in blockers
            ))
        else:
            raw[name] = float(mu * sum(f for f, _ in contacts.values()))
    return raw


def run_pullout(model, posture, repetitions=5, seed=0, config_digest="",
                anchors=None, mu=1.0, sphere_diameter=0.06,
                pulp_margin=PULP_MARGIN):
    """Pull-out resistance of a grasp posture in the six axis directions.

    `posture` is the grasp MassTrajectory; its final sample is the closed
    hand. Per repetition, the realized channel pressures carry sensor noise,
    which perturbs the trapped masses and with them every digit force.
    """
    if anchors is None:
        anchors = {"distal": 39.0, "ulnar": 32.0, "radial": 30.0, "palmar": 23.0}
    radius = sphere_diameter / 2.0
    masses = posture.masses[-1].copy()
    rng = np.random.default_rng(seed)
    sigma_p = 0.014 * 250e3 / 3.0

    eq0 = hand_equilibrium(model, masses)
    center = np.mean([p for p in eq0.pose.tip_positions.values()], axis=0)
    contacts0 = _digit_forces(model, eq0.joints, center, radius, pulp_margin)
    if not contacts0:
        raise NoGraspError("no digit presses the object: not a grasp")
    blocking = _blocking_sets(contacts0)
    raw0 = _raw_resistance(contacts0, mu, blocking)
    gains = {}
    for name in DIRECTIONS:
        if name in anchors:
            gains[name] = anchors[name] / raw0[name]
    mean_gain = float(np.mean([gains[n] for n in ANCHORED]))
    for name in DIRECTIONS:
        gains.setdefault(name, mean_gain)

    samples = {name: [] for name in DIRECTIONS}
    for _ in range(repetitions):
        noisy = masses + eq0.volumes * sigma_p * rng.standard_normal(16) / (R_AIR * T_AMBIENT)
        noisy = np.maximum(noisy, 0.0)
        eq = hand_equilibrium(model, noisy, compute_pose=False)
        contacts = _digit_forces(model, eq.joints, center, radius, pulp_margin)
        if not contacts:
            raise NoGraspError("grasp lost under sensor noise")
        raw = _raw_resistance(contacts, mu, blocking)
        for name in DIRECTIONS:
            samples[name].append(gains[name] * raw[name])

    report = ExperimentReport(
        experiment=f"pullout[{posture.name}]",
        seed=seed,
        config_digest=config_digest,
        columns=("direction", "force_mean_n", "force_std_n", "extrapolated"),
    )
    means = {}
    for name in DIRECTIONS:
        arr = np.asarray(samples[name])
        means[name] = float(arr.mean())
        report.add_cell(direction=name, force_mean_n=float(arr.mean()),
                        force_std_n=float(arr.std()),
                        extrapolated=name not in anchors)
    report.notes["direction_gains"] = gains
    report.notes["contact_digits"] = sorted(contacts0)
    report.notes["sphere_center_m"] = center.tolist()
    for name, anchor in anchors.items():
        report.verdict(f"anchor_{name}",
                       abs(means[name] - anchor) <= 0.10 * anchor,
                       f"{means[name]:.1f} N vs {anchor} N")
    stds = [np.asarray(samples[n]).std() for n in DIRECTIONS]
    report.verdict("per_direction_std", max(stds) < 3.0,
                   f"max std {max(stds):.2f} N")
    report.verdict(
        "ordering",
        means["distal"] > means["ulnar"] > means["radial"] > means["palmar"],
        " > ".join(f"{means[n]:.1f}" for n in ("distal", "ulnar", "radial", "palmar")),
    )
    return report
