"""16-channel hand assembly: channel map, kinematics, quasi-static equilibrium.

Channels are mechanically decoupled: each bellow joint and each finger
compartment settles where its pneumatic torque balances the elastic hinge,
given the air mass trapped in its chamber. The solver treats all 16 channels
in one vectorized bisection.

Frames: x distal (wrist -> fingertips), y radial (toward the thumb side),
z the palmar normal. Fingers curl toward +z; the palm bellow folds the ulnar
scaffold (ring + little) toward +z.
"""

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .constants import R_AIR, T_AMBIENT, P_ATMOSPHERE
from .actuators import (
    BellowSpec,
    PneuFlexCompartmentSpec,
    TwoCompartmentFingerSpec,
    _arc_endpoint,
    fingertip_force,
)


class Channel(IntEnum):
    """The 16 actuated channels, with stable wire codes."""

    INDEX_BASE = 0
    INDEX_TIP = 1
    MIDDLE_BASE = 2
    MIDDLE_TIP = 3
    RING_BASE = 4
    RING_TIP = 5
    LITTLE_BASE = 6
    LITTLE_TIP = 7
    THUMB_PROXIMAL = 8
    THUMB_MIDDLE = 9
    THUMB_DISTAL = 10
    THUMB_TIP = 11
    PALM_BELLOW = 12
    ABDUCTION_INDEX_MIDDLE = 13
    ABDUCTION_MIDDLE_RING = 14
    ABDUCTION_RING_LITTLE = 15


N_CHANNELS = 16

FINGER_ORDER = ("index", "middle", "ring", "little")
FINGER_CHANNELS = {
    "index": (Channel.INDEX_BASE, Channel.INDEX_TIP),
    "middle": (Channel.MIDDLE_BASE, Channel.MIDDLE_TIP),
    "ring": (Channel.RING_BASE, Channel.RING_TIP),
    "little": (Channel.LITTLE_BASE, Channel.LITTLE_TIP),
}
ULNAR_FINGERS = ("ring", "little")
BELLOW_CHANNELS = (
    Channel.THUMB_PROXIMAL, Channel.THUMB_MIDDLE, Channel.THUMB_DISTAL,
    Channel.PALM_BELLOW,
    Channel.ABDUCTION_INDEX_MIDDLE, Channel.ABDUCTION_MIDDLE_RING,
    Channel.ABDUCTION_RING_LITTLE,
)
COMPARTMENT_CHANNELS = (
    Channel.INDEX_BASE, Channel.INDEX_TIP, Channel.MIDDLE_BASE, Channel.MIDDLE_TIP,
    Channel.RING_BASE, Channel.RING_TIP, Channel.LITTLE_BASE, Channel.LITTLE_TIP,
    Channel.THUMB_TIP,
)
DIGITS = ("thumb",) + FINGER_ORDER


@dataclass(frozen=True)
class ThumbSpec:
    """Thumb chain: three mounted bellows plus one PneuFlex tip compartment.

    The three mounting angles are the anchors of the whole chain: the
    proximal hinge axis lies in the palm plane, rotated toward radial by the
    first angle; the middle hinge axis is the palm normal tipped dorsal by
    the second angle within the pouch plane; the distal hinge axis is the
    flexion axis twisted toward palmar by the third angle about the thumb's
    longitudinal axis.
    """

    bellows: tuple                      # (proximal, middle, distal) BellowSpec
    tip: PneuFlexCompartmentSpec
    mount: tuple                        # (3,) position in the palm frame
    rest_direction_deg: float           # thumb longitudinal axis, from +x toward +y
    segment_lengths: tuple              # (mount->J2, J2->J3, J3->tip arc)
    mounting_angles_deg: tuple = (30.0, 90.0, 45.0)
    pronation_deg: float = 15.0         # twist of the thumb column about its
                                        # longitudinal axis; flexion then sweeps
                                        # across the palm instead of straight up
    tip_pronation_deg: float = 60.0     # extra twist of the tip compartment's
                                        # curl plane (pulp facing)
    tip_stiffness: float = 180.0        # N/m, not a measured value
    max_tip_force: float = 10.0


@dataclass(frozen=True)
class HandModel:
    fingers: dict                       # name -> TwoCompartmentFingerSpec
    finger_mounts: dict                 # name -> (3,) tuple
    thumb: ThumbSpec
    palm: BellowSpec                    # max_opening is the 30 deg flexion limit
    abductions: tuple                   # 3 BellowSpec (IM, MR, RL)
    hinge_stiffness: dict               # Channel -> N m / rad, bellow joints only
    palm_fold_point: tuple = (0.0, 0.0, 0.0)
    kapandji_tolerance: float = 5e-3    # m
    finger_radius: float = 8e-3         # m, radial offset of side targets

    def __post_init__(self):
        little = self.fingers["little"].total_length
        for name in ("index", "middle", "ring"):
            if little >= self.fingers[name].total_length:
                raise ValueError("little finger must be strictly shorter")
        object.__setattr__(self, "_eq", _equilibrium_params(self))

    def bellow_spec(self, channel):
        ch = Channel(channel)
        if ch == Channel.THUMB_PROXIMAL:
            return self.thumb.bellows[0]
        if ch == Channel.THUMB_MIDDLE:
            return self.thumb.bellows[1]
        if ch == Channel.THUMB_DISTAL:
            return self.thumb.bellows[2]
        if ch == Channel.PALM_BELLOW:
            return self.palm
        if ch == Channel.ABDUCTION_INDEX_MIDDLE:
            return self.abductions[0]
        if ch == Channel.ABDUCTION_MIDDLE_RING:
            return self.abductions[1]
        if ch == Channel.ABDUCTION_RING_LITTLE:
            return self.abductions[2]
        raise ValueError(f"{ch.name} is not a bellow channel")

    def compartment_spec(self, channel):
        ch = Channel(channel)
        if ch == Channel.THUMB_TIP:
            return self.thumb.tip
        for name, (base, tip) in FINGER_CHANNELS.items():
            if ch == base:
                return self.fingers[name].base
            if ch == tip:
                return self.fingers[name].tip
        raise ValueError(f"{ch.name} is not a compartment channel")

    @property
    def joint_limits(self):
        return self._eq["limit"].copy()

    def rest_volumes(self):
        """Chamber volumes at the all-zero pose, for plant initialization."""
        return self.channel_volumes(np.zeros(N_CHANNELS))

    def channel_volumes(self, joints):
        p = self._eq
        return p["v0"] + p["dv"] * np.asarray(joints, dtype=float)


@dataclass(frozen=True)
class HandPose:
    """Joint vector plus the derived digit-tip and Kapandji-target frames."""

    joints: np.ndarray                  # (16,) rad
    tip_positions: dict                 # digit -> (3,) np.ndarray
    tip_directions: dict                # digit -> (3,) unit np.ndarray
    kapandji_points: tuple              # ((label, (3,) np.ndarray), ...) * 10
    timestamp: float = 0.0


@dataclass
class ExternalLoad:
    """Per-channel torques [N m] and optional planar finger tip constraints."""

    torques: np.ndarray = field(default_factory=lambda: np.zeros(N_CHANNELS))
    tip_constraints: dict = field(default_factory=dict)  # finger name -> (x, y)

    def __post_init__(self):
        self.torques = np.asarray(self.torques, dtype=float)
        if not np.all(np.isfinite(self.torques)):
            raise ValueError("external load torques must be finite")


# --- small rotation helpers -------------------------------------------------

def _rot_axis(axis, angle):
    """Rotation matrix about a unit axis (Rodrigues)."""
    x, y, z = axis
    c, s = np.cos(angle), np.sin(angle)
    C = 1.0 - c
    return np.array([
        [c + x * x * C, x * y * C - z * s, x * z * C + y * s],
        [y * x * C + z * s, c + y * y * C, y * z * C - x * s],
        [z * x * C - y * s, z * y * C + x * s, c + z * z * C],
    ])


def _rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def palm_rotation(model, palm_angle):
    """Rigid rotation of the ulnar scaffold: about -x so ulnar moves palmar."""
    return _rot_axis(np.array([-1.0, 0.0, 0.0]), palm_angle)


def _finger_spread(joints):
    """Signed palm-plane rotation per finger from the three abduction joints.

    Each abduction bellow opens the spread angle between its two neighbours,
    pushing both apart symmetrically.
    """
    im = joints[Channel.ABDUCTION_INDEX_MIDDLE]
    mr = joints[Channel.ABDUCTION_MIDDLE_RING]
    rl = joints[Channel.ABDUCTION_RING_LITTLE]
    return {
        "index": +0.5 * im,
        "middle": -0.5 * im + 0.5 * mr,
        "ring": -0.5 * mr + 0.5 * rl,
        "little": -0.5 * rl,
    }


def _finger_frame(model, name, joints):
    """(mount, direction, curl normal, radial normal) of one finger in world."""
    spread = _finger_spread(joints)[name]
    mount = np.asarray(model.finger_mounts[name], dtype=float)
    d = _rot_z(spread) @ np.array([1.0, 0.0, 0.0])
    n = np.array([0.0, 0.0, 1.0])
    if name in ULNAR_FINGERS:
        R = palm_rotation(model, joints[Channel.PALM_BELLOW])
        rel = mount - np.asarray(model.palm_fold_point)
        mount = np.asarray(model.palm_fold_point) + R @ rel
        d = R @ d
        n = R @ n
    radial = np.cross(n, d)
    return mount, d, n, radial


def _finger_arc_points(spec, th_base, th_tip):
    """Planar junction point, tip point and tangents of the two-arc finger."""
    xb, yb = _arc_endpoint(spec.base.arc_length, th_base)
    xt, yt = _arc_endpoint(spec.tip.arc_length, th_tip)
    c, s = np.cos(th_base), np.sin(th_base)
    junction = np.array([xb, yb])
    tip = junction + np.array([c * xt - s * yt, s * xt + c * yt])
    return junction, tip, th_base, th_base + th_tip


def _arc_point_at(length, theta, frac):
    """Point a fraction `frac` along a constant-curvature arc."""
    return _arc_endpoint(length * frac, theta * frac)


def _thumb_axes(thumb):
    """Rest triad and the three local hinge axes from the mounting angles."""
    a_palm, a_pouch, a_twist = np.deg2rad(thumb.mounting_angles_deg)
    phi = np.deg2rad(thumb.rest_direction_deg)
    e1 = np.array([np.cos(phi), np.sin(phi), 0.0])     # longitudinal
    e3 = np.array([0.0, 0.0, 1.0])                     # palmar normal at rest
    e2 = np.cross(e3, e1)
    E0 = np.column_stack([e1, e2, e3])
    # pronation twists the curl plane toward the palm centre
    E0 = _rot_axis(e1, np.deg2rad(thumb.pronation_deg)) @ E0
    # proximal: in the palm plane, toward radial from the finger axis
    a1_local = E0.T @ np.array([np.cos(a_palm), np.sin(a_palm), 0.0])
    # middle: palm normal tipped dorsal within the pouch plane
    a2_local = np.array([0.0, -np.sin(a_pouch), np.cos(a_pouch)])
    # distal: flexion axis twisted toward palmar about the longitudinal axis
    a3_local = np.array([0.0, -np.cos(a_twist), np.sin(a_twist)])
    return E0, (a1_local, a2_local, a3_local)


def _thumb_chain(model, joints):
    """Thumb tip position/direction by transporting the scaffold triad."""
    thumb = model.thumb
    E0, axes = _thumb_axes(thumb)
    th = (
        joints[Channel.THUMB_PROXIMAL],
        joints[Channel.THUMB_MIDDLE],
        joints[Channel.THUMB_DISTAL],
    )
    R = E0
    p = np.asarray(thumb.mount, dtype=float).copy()
    for axis_local, angle, seg in zip(axes, th, thumb.segment_lengths):
        axis_world = R @ axis_local
        R = _rot_axis(axis_world, angle) @ R
        p = p + R @ np.array([seg, 0.0, 0.0])
    # the tip compartment is mounted with its curl plane twisted further
    # about the longitudinal axis (pulp facing)
    R = R @ _rot_axis(np.array([1.0, 0.0, 0.0]), np.deg2rad(thumb.tip_pronation_deg))
    th_tip = joints[Channel.THUMB_TIP]
    xa, ya = _arc_endpoint(thumb.tip.arc_length, th_tip)
    tip = p + R @ np.array([xa, 0.0, ya])
    tip_dir = R @ np.array([np.cos(th_tip), 0.0, np.sin(th_tip)])
    return tip, tip_dir


def forward_kinematics(model, joints, timestamp=0.0):
    """Pose of the whole hand at a joint vector. Deterministic and pure."""
    joints = np.asarray(joints, dtype=float)
    limits = model._eq["limit"]
    if np.any(joints < -1e-12) or np.any(joints > limits + 1e-9):
        bad = [Channel(i).name for i in range(N_CHANNELS)
               if joints[i] < -1e-12 or joints[i] > limits[i] + 1e-9]
        raise ValueError(f"joints out of limits: {', '.join(bad)}")
    tips, dirs = {}, {}
    for name in FINGER_ORDER:
        base_ch, tip_ch = FINGER_CHANNELS[name]
        mount, d, n, _ = _finger_frame(model, name, joints)
        _, tip_xy, _, tip_angle = _finger_arc_points(
            model.fingers[name], joints[base_ch], joints[tip_ch])
        tips[name] = mount + tip_xy[0] * d + tip_xy[1] * n
        dirs[name] = np.cos(tip_angle) * d + np.sin(tip_angle) * n
    tips["thumb"], dirs["thumb"] = _thumb_chain(model, joints)
    points = kapandji_targets(model, joints=joints, _tips=tips)
    return HandPose(
        joints=joints.copy(),
        tip_positions=tips,
        tip_directions=dirs,
        kapandji_points=points,
        timestamp=timestamp,
    )


KAPANDJI_LABELS = (
    "index_proximal_radial",
    "index_middle_radial",
    "index_tip",
    "middle_tip",
    "ring_tip",
    "little_tip",
    "little_distal_crease",
    "little_middle_crease",
    "little_base",
    "distal_palmar_crease",
)


def kapandji_targets(model, joints=None, _tips=None):
    """The ten thumb-opposition target points, anchored to the posed hand.

    Targets ride on the hand: finger targets move with finger joints, and
    targets five to ten ride the ulnar scaffold, so they move rigidly with
    the palm bellow.
    """
    if joints is None:
        joints = np.zeros(N_CHANNELS)
    joints = np.asarray(joints, dtype=float)

    def on_finger(name, compartment, frac, radial_offset=0.0):
        base_ch, tip_ch = FINGER_CHANNELS[name]
        spec = model.fingers[name]
        mount, d, n, radial = _finger_frame(model, name, joints)
        th_b, th_t = joints[base_ch], joints[tip_ch]
        if compartment == "base":
            x, y = _arc_point_at(spec.base.arc_length, th_b, frac)
        else:
            junction, _, a_junction, _ = _finger_arc_points(spec, th_b, th_t)
            xa, ya = _arc_point_at(spec.tip.arc_length, th_t, frac)
            c, s = np.cos(a_junction), np.sin(a_junction)
            x = junction[0] + c * xa - s * ya
            y = junction[1] + s * xa + c * ya
        return mount + x * d + y * n + radial_offset * radial

    def fingertip(name):
        if _tips is not None:
            return _tips[name]
        base_ch, tip_ch = FINGER_CHANNELS[name]
        mount, d, n, _ = _finger_frame(model, name, joints)
        _, tip_xy, _, _ = _finger_arc_points(
            model.fingers[name], joints[base_ch], joints[tip_ch])
        return mount + tip_xy[0] * d + tip_xy[1] * n

    r = model.finger_radius
    ring_mount, _, _, _ = _finger_frame(model, "ring", joints)
    little_mount, _, _, _ = _finger_frame(model, "little", joints)
    palmar_crease = 0.5 * (ring_mount + little_mount) - np.array([0.012, 0.0, 0.0])
    pts = (
        on_finger("index", "base", 0.5, radial_offset=r),
        on_finger("index", "tip", 0.35, radial_offset=r),
        fingertip("index"),
        fingertip("middle"),
        fingertip("ring"),
        fingertip("little"),
        on_finger("little", "tip", 0.6),
        on_finger("little", "base", 1.0),
        little_mount,
        palmar_crease,
    )
    return tuple(zip(KAPANDJI_LABELS, pts))


# --- quasi-static equilibrium ------------------------------------------------

_PAD_ANGLE = 1e9  # sentinel knot far beyond any joint limit


def _equilibrium_params(model):
    """Per-channel torque/volume parameters for the vectorized solver.

    Bellows: residual(theta) = max(p_gauge, 0) * C(theta) - K * theta with
    C = pouch_area * arm(theta). Compartments: the pneumatic bending torque
    is bend_stiffness * gain * p against the elastic bend_stiffness * theta,
    which is the same residual with a constant C = bend_stiffness * gain and
    K = bend_stiffness.
    """
    limit = np.zeros(N_CHANNELS)
    v0 = np.zeros(N_CHANNELS)
    dv = np.zeros(N_CHANNELS)
    k_spring = np.zeros(N_CHANNELS)
    knot_count = 2
    for ch in BELLOW_CHANNELS:
        knot_count = max(knot_count, len(model.bellow_spec(ch).moment_arm_table))
    knots = np.full((N_CHANNELS, knot_count), _PAD_ANGLE)
    knots[:, 0] = 0.0
    c_vals = np.zeros((N_CHANNELS, knot_count))
    for ch in COMPARTMENT_CHANNELS:
        spec = model.compartment_spec(ch)
        limit[ch] = spec.max_free_bend
        v0[ch] = spec.rest_volume
        dv[ch] = spec.volume_per_bend
        k_spring[ch] = spec.bend_stiffness
        c_vals[ch, :] = spec.bend_stiffness * spec.pressure_to_bend_gain
        knots[ch, 1] = _PAD_ANGLE
    for ch in BELLOW_CHANNELS:
        spec = model.bellow_spec(ch)
        limit[ch] = spec.max_opening
        v0[ch] = spec.rest_volume
        dv[ch] = spec.volume_per_rad
        k_spring[ch] = model.hinge_stiffness[ch]
        angles = [a for a, _ in spec.moment_arm_table]
        arms = [r for _, r in spec.moment_arm_table]
        n = len(angles)
        knots[ch, :n] = angles
        c_vals[ch, :n] = np.asarray(arms) * spec.pouch_area
        c_vals[ch, n:] = c_vals[ch, n - 1]
    return {"limit": limit, "v0": v0, "dv": dv, "k": k_spring,
            "knots": knots, "c": c_vals, "rows": np.arange(N_CHANNELS)}


def _interp_rows(x, knots, vals, rows=None):
    """Row-wise piecewise-linear interpolation, clamped to the end knots."""
    idx = np.sum(x[:, None] >= knots[:, 1:], axis=1)
    idx = np.minimum(idx, knots.shape[1] - 2)
    if rows is None:
        rows = np.arange(knots.shape[0])
    x0 = knots[rows, idx]
    x1 = knots[rows, idx + 1]
    y0 = vals[rows, idx]
    y1 = vals[rows, idx + 1]
    t = np.clip((x - x0) / (x1 - x0), 0.0, 1.0)
    return y0 + t * (y1 - y0)


def _residual(params, theta, masses, torques, temperature):
    p_abs = masses * R_AIR * temperature / (params["v0"] + params["dv"] * theta)
    p_gauge = np.maximum(p_abs - P_ATMOSPHERE, 0.0)
    c = _interp_rows(theta, params["knots"], params["c"], params["rows"])
    return p_gauge * c - params["k"] * theta - torques


def solve_equilibrium_angles(model, masses, torques=None,
                             temperature=T_AMBIENT, iterations=60):
    """Joint angles where pneumatic torque balances hinge elasticity and load.

    Lockstep bisection over all 16 channels; the residual is monotone
    decreasing in the angle, so a sign change on [0, limit] brackets the
    unique root. Without a sign change the boundary with the smaller
    |residual| is returned.
    """
    masses = np.asarray(masses, dtype=float)
    if masses.shape != (N_CHANNELS,):
        raise ValueError(f"expected {N_CHANNELS} channel masses")
    if np.any(masses < 0.0):
        raise ValueError("air masses must be non-negative")
    if torques is None:
        torques = np.zeros(N_CHANNELS)
    torques = np.asarray(torques, dtype=float)
    if not np.all(np.isfinite(torques)):
        raise ValueError("load torques must be finite")
    params = model._eq
    lo = np.zeros(N_CHANNELS)
    hi = params["limit"].copy()
    r_lo = _residual(params, lo, masses, torques, temperature)
    r_hi = _residual(params, hi, masses, torques, temperature)
    bracketed = (r_lo > 0.0) & (r_hi < 0.0)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        r_mid = _residual(params, mid, masses, torques, temperature)
        go_up = r_mid > 0.0
        lo = np.where(bracketed & go_up, mid, lo)
        hi = np.where(bracketed & ~go_up, mid, hi)
    theta = 0.5 * (lo + hi)
    # unbracketed channels sit on the boundary with the smaller residual
    boundary = np.where(np.abs(r_lo) <= np.abs(r_hi), 0.0, params["limit"])
    theta = np.where(bracketed, theta, boundary)
    return theta


def joint_equilibrium(model, channel, air_mass, load_torque=0.0,
                      temperature=T_AMBIENT):
    """Equilibrium (angle, absolute pressure) of a single channel.

    The channel's chamber holds `air_mass` kg; `load_torque` opposes opening.
    """
    if air_mass < 0.0:
        raise ValueError("air mass must be non-negative")
    if not np.isfinite(load_torque):
        raise ValueError("load torque must be finite")
    ch = Channel(channel)
    masses = atmospheric_channel_masses(model, temperature)
    masses[ch] = air_mass
    torques = np.zeros(N_CHANNELS)
    torques[ch] = load_torque
    theta = solve_equilibrium_angles(model, masses, torques, temperature)
    v = model._eq["v0"][ch] + model._eq["dv"][ch] * theta[ch]
    p_abs = air_mass * R_AIR * temperature / v
    return float(theta[ch]), float(p_abs)


def atmospheric_channel_masses(model, temperature=T_AMBIENT):
    """Per-channel air mass at rest (gauge pressure zero, joints at zero)."""
    return P_ATMOSPHERE * model.rest_volumes() / (R_AIR * temperature)


def mass_for_joint(model, channel, theta, temperature=T_AMBIENT):
    """Air mass that holds channel `channel` at angle `theta` with no load."""
    ch = Channel(channel)
    params = model._eq
    if theta < 0.0 or theta > params["limit"][ch] + 1e-12:
        raise ValueError(f"{ch.name}: angle {theta:.4f} outside [0, {params['limit'][ch]:.4f}]")
    c = float(_interp_rows(np.full(N_CHANNELS, theta), params["knots"], params["c"])[ch])
    p_gauge = params["k"][ch] * theta / c
    v = params["v0"][ch] + params["dv"][ch] * theta
    return float((p_gauge + P_ATMOSPHERE) * v / (R_AIR * temperature))


def masses_for_joints(model, joints, temperature=T_AMBIENT):
    """Vector version of mass_for_joint over all 16 channels."""
    joints = np.asarray(joints, dtype=float)
    return np.array([
        mass_for_joint(model, ch, float(joints[ch]), temperature)
        for ch in range(N_CHANNELS)
    ])


@dataclass(frozen=True)
class HandEquilibrium:
    joints: np.ndarray          # (16,) rad
    pressures: np.ndarray       # (16,) absolute Pa
    volumes: np.ndarray         # (16,) m^3
    tip_forces: dict            # finger name -> planar force vector (N)
    pose: HandPose = None       # present unless compute_pose=False


def hand_equilibrium(model, masses, load=None, temperature=T_AMBIENT,
                     timestamp=0.0, compute_pose=True):
    """Full-hand equilibrium under per-channel air masses and external loads.

    Bellow joints and compartment bends settle independently; constrained
    finger tips additionally report their Cartesian spring force. With
    `compute_pose=False` only joints, pressures and volumes are returned,
    which is what the plant feedback path needs every tick.
    """
    load = load if load is not None else ExternalLoad()
    try:
        theta = solve_equilibrium_angles(model, masses, load.torques, temperature)
    except ValueError as exc:
        raise ValueError(f"equilibrium failed: {exc}") from exc
    params = model._eq
    volumes = params["v0"] + params["dv"] * theta
    pressures = np.asarray(masses, dtype=float) * R_AIR * temperature / volumes
    pose = forward_kinematics(model, theta, timestamp=timestamp) if compute_pose else None
    forces = {}
    for name, constrained in load.tip_constraints.items():
        base_ch, tip_ch = FINGER_CHANNELS[name]
        spec = model.fingers[name]
        p_b = min(max((pressures[base_ch] - P_ATMOSPHERE), 0.0), spec.base.max_pressure)
        p_t = min(max((pressures[tip_ch] - P_ATMOSPHERE), 0.0), spec.tip.max_pressure)
        forces[name] = fingertip_force(spec, p_b, p_t, constrained)
    return HandEquilibrium(joints=theta, pose=pose, pressures=pressures,
                           volumes=volumes, tip_forces=forces)


def pose_distance(a, b):
    """Joint-space L2 distance between two poses."""
    return float(np.linalg.norm(a.joints - b.joints))


def digit_polyline(model, joints, digit, samples_per_arc=8):
    """World-frame points along a digit's centerline at a joint vector.

    Fingers: both compartment arcs; thumb: the scaffold segments plus the
    tip arc. Used for wrap-contact queries and schematic rendering.
    """
    joints = np.asarray(joints, dtype=float)
    if digit == "thumb":
        thumb = model.thumb
        E0, axes = _thumb_axes(thumb)
        th = (joints[Channel.THUMB_PROXIMAL], joints[Channel.THUMB_MIDDLE],
              joints[Channel.THUMB_DISTAL])
        R = E0
        p = np.asarray(thumb.mount, dtype=float).copy()
        pts = [p.copy()]
        for axis_local, angle, seg in zip(axes, th, thumb.segment_lengths):
            axis_world = R @ axis_local
            R = _rot_axis(axis_world, angle) @ R
            p = p + R @ np.array([seg, 0.0, 0.0])
            pts.append(p.copy())
        R = R @ _rot_axis(np.array([1.0, 0.0, 0.0]),
                          np.deg2rad(thumb.tip_pronation_deg))
        th_tip = joints[Channel.THUMB_TIP]
        for k in range(1, samples_per_arc + 1):
            f = k / samples_per_arc
            xa, ya = _arc_point_at(thumb.tip.arc_length, th_tip, f)
            pts.append(p + R @ np.array([xa, 0.0, ya]))
        return np.asarray(pts)
    base_ch, tip_ch = FINGER_CHANNELS[digit]
    spec = model.fingers[digit]
    mount, d, n, _ = _finger_frame(model, digit, joints)
    th_b, th_t = joints[base_ch], joints[tip_ch]
    pts = [mount.copy()]
    for k in range(1, samples_per_arc + 1):
        f = k / samples_per_arc
        x, y = _arc_point_at(spec.base.arc_length, th_b, f)
        pts.append(mount + x * d + y * n)
    junction, _, a_junction, _ = _finger_arc_points(spec, th_b, th_t)
    c, s = np.cos(a_junction), np.sin(a_junction)
    for k in range(1, samples_per_arc + 1):
        f = k / samples_per_arc
        xa, ya = _arc_point_at(spec.tip.arc_length, th_t, f)
        x = junction[0] + c * xa - s * ya
        y = junction[1] + s * xa + c * ya
        pts.append(mount + x * d + y * n)
    return np.asarray(pts)
