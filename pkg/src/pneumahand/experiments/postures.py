"""The shipped posture library: 33 taxonomy grasps, 10 thumb-opposition
postures, 3 in-hand rotation synergies.

Taxonomy grasps are authored as per-channel activations (fraction of each
joint's travel) and converted to air masses through the equilibrium inverse.
Opposition postures are authored against the model itself: the non-thumb
channels present the target, then a deterministic multi-start search places
the thumb on it.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..control import MassTrajectory
from ..hand import (
    Channel,
    N_CHANNELS,
    _thumb_chain,
    kapandji_targets,
    masses_for_joints,
)

C = Channel

# (IB, IT, MB, MT, RB, RT, LB, LT, TP, TM, TD, TT, PB, AIM, AMR, ARL)
# activation fractions of each channel's joint travel
TAXONOMY_GRASPS = {
    "large_diameter":    (.55, .50, .55, .50, .55, .50, .55, .50, .45, .35, .40, .45, .25, .30, .30, .30),
    "small_diameter":    (.75, .70, .75, .70, .75, .70, .75, .70, .50, .40, .55, .60, .30, .10, .10, .10),
    "medium_wrap":       (.65, .60, .65, .60, .65, .60, .65, .60, .45, .35, .50, .50, .30, .10, .10, .10),
    "adducted_thumb":    (.60, .55, .60, .55, .60, .55, .60, .55, .20, .05, .30, .30, .20, .00, .00, .00),
    "light_tool":        (.70, .65, .70, .65, .70, .65, .70, .65, .30, .10, .35, .50, .25, .05, .05, .05),
    "prismatic_4_finger": (.50, .60, .50, .60, .50, .60, .50, .60, .60, .50, .50, .50, .35, .15, .15, .15),
    "prismatic_3_finger": (.50, .60, .50, .60, .50, .60, .15, .10, .60, .50, .50, .50, .30, .15, .15, .00),
    "prismatic_2_finger": (.50, .60, .50, .60, .10, .10, .10, .10, .62, .50, .52, .50, .30, .10, .00, .00),
    "palmar_pinch":      (.45, .55, .10, .10, .05, .05, .05, .05, .60, .45, .50, .55, .25, .00, .00, .00),
    "power_disk":        (.50, .70, .50, .70, .50, .70, .50, .70, .50, .40, .45, .50, .40, .80, .80, .80),
    "power_sphere":      (.55, .80, .55, .78, .55, .78, .55, .80, .55, .45, .55, .60, .50, .35, .35, .35),
    "precision_disk":    (.45, .60, .45, .60, .45, .60, .45, .60, .55, .50, .50, .55, .35, .70, .70, .70),
    "precision_sphere":  (.50, .60, .50, .60, .50, .60, .50, .60, .55, .45, .50, .50, .40, .50, .50, .50),
    "tripod":            (.50, .60, .50, .65, .10, .10, .10, .10, .60, .50, .50, .55, .30, .20, .00, .00),
    "fixed_hook":        (.55, .85, .55, .85, .55, .85, .55, .85, .05, .05, .10, .20, .15, .00, .00, .00),
    "lateral":           (.65, .60, .65, .60, .65, .60, .65, .60, .25, .00, .45, .65, .20, .00, .00, .00),
    "index_finger_extension": (.15, .05, .75, .80, .75, .80, .75, .80, .45, .30, .50, .50, .30, .20, .00, .00),
    "extension_type":    (.35, .25, .35, .25, .35, .25, .35, .25, .45, .40, .35, .30, .20, .50, .50, .50),
    "distal_type":       (.45, .95, .45, .95, .45, .95, .45, .95, .30, .15, .50, .80, .25, .00, .00, .00),
    "writing_tripod":    (.50, .55, .55, .60, .15, .10, .10, .10, .65, .50, .50, .50, .30, .35, .00, .00),
    "tripod_variation":  (.55, .60, .50, .70, .20, .20, .10, .10, .60, .45, .55, .50, .30, .25, .10, .00),
    "parallel_extension": (.40, .10, .40, .10, .40, .10, .40, .10, .40, .35, .40, .35, .35, .10, .10, .10),
    "adduction_grip":    (.35, .30, .50, .45, .10, .10, .10, .10, .10, .05, .15, .15, .10, .90, .00, .00),
    "tip_pinch":         (.50, .65, .15, .15, .15, .15, .15, .15, .65, .50, .55, .65, .25, .00, .00, .00),
    "lateral_tripod":    (.50, .60, .60, .55, .15, .10, .10, .10, .30, .05, .50, .60, .30, .15, .00, .00),
    "sphere_4_finger":   (.55, .60, .55, .60, .55, .60, .55, .60, .50, .45, .50, .50, .45, .70, .70, .70),
    "quadpod":           (.50, .62, .50, .62, .50, .62, .20, .15, .58, .48, .50, .52, .35, .40, .40, .00),
    "sphere_3_finger":   (.55, .62, .55, .62, .50, .60, .15, .10, .55, .45, .50, .52, .40, .50, .50, .00),
    "stick":             (.70, .75, .70, .75, .70, .75, .70, .75, .35, .20, .45, .55, .30, .05, .05, .05),
    "palmar":            (.45, .40, .45, .40, .45, .40, .45, .40, .10, .10, .20, .25, .30, .00, .00, .00),
    "ring":              (.65, .70, .30, .30, .30, .30, .30, .30, .55, .40, .50, .55, .25, .00, .00, .00),
    "ventral":           (.60, .50, .60, .50, .60, .50, .60, .50, .40, .30, .45, .40, .35, .20, .20, .20),
    "inferior_pincer":   (.40, .75, .10, .10, .10, .10, .10, .10, .50, .35, .45, .70, .20, .25, .00, .00),
}

# how the non-thumb channels present each opposition target (degrees)
KAPANDJI_PRESENTATIONS = (
    {C.INDEX_BASE: 30, C.INDEX_TIP: 30},
    {C.INDEX_BASE: 45, C.INDEX_TIP: 55},
    {C.INDEX_BASE: 60, C.INDEX_TIP: 90},
    {C.MIDDLE_BASE: 65, C.MIDDLE_TIP: 95},
    {C.RING_BASE: 65, C.RING_TIP: 95, C.PALM_BELLOW: 30},
    {C.LITTLE_BASE: 60, C.LITTLE_TIP: 90, C.PALM_BELLOW: 30},
    {C.LITTLE_BASE: 70, C.LITTLE_TIP: 110, C.PALM_BELLOW: 30},
    {C.LITTLE_BASE: 60, C.LITTLE_TIP: 80, C.PALM_BELLOW: 30},
    {C.LITTLE_BASE: 40, C.LITTLE_TIP: 40, C.PALM_BELLOW: 30},
    {C.PALM_BELLOW: 30},
)

# deterministic multi-start fractions for the thumb placement search
_SEARCH_STARTS = (
    (0.2, 0.2, 0.2, 0.2), (0.5, 0.5, 0.5, 0.5), (0.8, 0.4, 0.6, 0.3),
    (0.3, 0.7, 0.3, 0.7), (0.6, 0.1, 0.8, 0.8), (0.9, 0.9, 0.5, 0.5),
    (0.1, 0.1, 0.9, 0.9), (0.9, 0.2, 0.2, 0.9), (1.0, 0.0, 1.0, 0.5),
    (0.7, 0.0, 0.9, 0.2),
)

KAPANDJI_NAMES = tuple(f"kapandji_{i:02d}" for i in range(1, 11))

ROTATION_SYNERGIES = ("rotate_proximal_distal", "rotate_dorsal_palmar",
                      "rotate_radial_ulnar")

_LIBRARY_CACHE = {}


@dataclass(frozen=True)
class PostureLibrary:
    """Named synergies: the 33 taxonomy grasps, 10 opposition postures and
    3 in-hand rotations."""

    entries: dict    # name -> MassTrajectory

    def __post_init__(self):
        missing = [n for n in self.expected_names() if n not in self.entries]
        if missing:
            raise ValueError(f"library missing entries: {missing}")
        if len(self.entries) != 46:
            raise ValueError(f"library must hold exactly 46 entries, got {len(self.entries)}")

    @staticmethod
    def expected_names():
        return tuple(TAXONOMY_GRASPS) + KAPANDJI_NAMES + ROTATION_SYNERGIES

    @property
    def taxonomy_names(self):
        return tuple(TAXONOMY_GRASPS)

    @property
    def kapandji_names(self):
        return KAPANDJI_NAMES

    @property
    def rotation_names(self):
        return ROTATION_SYNERGIES

    def __getitem__(self, name):
        return self.entries[name]

    def __contains__(self, name):
        return name in self.entries

    def names(self):
        return tuple(self.entries)


def _ramp_trajectory(name, model, target_joints, rise=1.5, hold=2.0, steps=4):
    """Rest -> target ramp with a final hold sample."""
    rest = np.zeros(N_CHANNELS)
    times, rows = [], []
    for k in range(steps + 1):
        f = k / steps
        joints = rest + f * (np.asarray(target_joints) - rest)
        times.append(f * rise)
        rows.append(masses_for_joints(model, joints))
    times.append(hold)
    rows.append(rows[-1])
    return MassTrajectory(name=name, times=np.asarray(times),
                          masses=np.asarray(rows), author="library")


def taxonomy_joints(model, name):
    fractions = np.asarray(TAXONOMY_GRASPS[name])
    return fractions * model.joint_limits


def author_kapandji_posture(model, target_index):
    """Joint vector that touches opposition target `target_index` (0-based).

    The presentation channels are fixed; the four thumb channels come from a
    deterministic multi-start bounded search minimizing tip-to-target
    distance. Returns (joints, distance).
    """
    labels = [label for label, _ in kapandji_targets(model)]
    label = labels[target_index]
    joints = np.zeros(N_CHANNELS)
    for ch, deg in KAPANDJI_PRESENTATIONS[target_index].items():
        joints[ch] = np.deg2rad(deg)
    target = dict(kapandji_targets(model, joints))[label]
    lims = model.joint_limits[C.THUMB_PROXIMAL:C.THUMB_TIP + 1]

    def cost(x):
        j = joints.copy()
        j[C.THUMB_PROXIMAL:C.THUMB_TIP + 1] = x
        tip, _ = _thumb_chain(model, j)
        return float(np.sum((tip - target) ** 2))

    best = None
    for frac in _SEARCH_STARTS:
        res = minimize(cost, lims * np.asarray(frac),
                       bounds=[(0.0, l) for l in lims], method="L-BFGS-B")
        if best is None or res.fun < best.fun:
            best = res
    joints[C.THUMB_PROXIMAL:C.THUMB_TIP + 1] = best.x
    return joints, float(np.sqrt(best.fun))


def _kapandji_trajectory(model, index):
    """Two-phase synergy: present the target, then bring the thumb in."""
    joints, _ = author_kapandji_posture(model, index)
    present = joints.copy()
    present[C.THUMB_PROXIMAL:C.THUMB_TIP + 1] = 0.0
    rest = masses_for_joints(model, np.zeros(N_CHANNELS))
    times = [0.0, 1.0, 2.0, 2.5]
    rows = [rest,
            masses_for_joints(model, present),
            masses_for_joints(model, joints),
            masses_for_joints(model, joints)]
    return MassTrajectory(name=KAPANDJI_NAMES[index], times=np.asarray(times),
                          masses=np.asarray(rows), author="library")


def _oscillation(name, model, base_fracs, moving, lo, hi, cycles=2, period=1.5):
    """In-hand rotation synergy: a subset of channels oscillates while the
    rest hold a light grasp."""
    base = np.asarray(base_fracs) * model.joint_limits
    times, rows = [0.0], [masses_for_joints(model, np.zeros(N_CHANNELS))]
    t = 0.5
    times.append(t)
    rows.append(masses_for_joints(model, base))
    for k in range(2 * cycles):
        t += period / 2
        joints = base.copy()
        phase = lo if k % 2 == 0 else hi
        for ch in moving:
            joints[ch] = phase * model.joint_limits[ch]
        times.append(t)
        rows.append(masses_for_joints(model, joints))
    t += 0.5
    times.append(t)
    rows.append(masses_for_joints(model, base))
    return MassTrajectory(name=name, times=np.asarray(times),
                          masses=np.asarray(rows), author="library")


_HOLD = (.40, .35, .40, .35, .40, .35, .40, .35, .40, .30, .40, .40, .30, .20, .20, .20)


def build_default_library(model, cache=True):
    """The shipped 46-entry library, authored against `model`."""
    key = id(model)
    if cache and key in _LIBRARY_CACHE:
        return _LIBRARY_CACHE[key]
    entries = {}
    for name in TAXONOMY_GRASPS:
        entries[name] = _ramp_trajectory(name, model, taxonomy_joints(model, name))
    for i in range(10):
        entries[KAPANDJI_NAMES[i]] = _kapandji_trajectory(model, i)
    entries["rotate_proximal_distal"] = _oscillation(
        "rotate_proximal_distal", model, _HOLD,
        (C.LITTLE_BASE, C.LITTLE_TIP, C.INDEX_BASE, C.INDEX_TIP), 0.15, 0.65)
    entries["rotate_dorsal_palmar"] = _oscillation(
        "rotate_dorsal_palmar", model, _HOLD,
        (C.INDEX_BASE, C.INDEX_TIP, C.MIDDLE_BASE, C.MIDDLE_TIP), 0.2, 0.7)
    entries["rotate_radial_ulnar"] = _oscillation(
        "rotate_radial_ulnar", model, _HOLD,
        (C.THUMB_TIP, C.THUMB_MIDDLE, C.INDEX_BASE, C.MIDDLE_BASE,
         C.RING_BASE, C.LITTLE_BASE), 0.2, 0.6)
    library = PostureLibrary(entries=entries)
    if cache:
        _LIBRARY_CACHE[key] = library
    return library
