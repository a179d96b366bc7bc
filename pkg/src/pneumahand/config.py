"""Config loading, defaults, and construction of the default hand model.

One JSON document configures the plant, the controller and the hand
geometry. Anything the source paper pins down numerically (torque anchors,
mounting angles, little-finger shortening, sensor accuracy, valve rate) has
its anchor encoded here; everything else is desk-scale modeling choice and
marked as such in the default file.
"""

import copy
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .constants import P_ATMOSPHERE, P_SUPPLY_GAUGE
from .actuators import (
    BellowSpec,
    PneuFlexCompartmentSpec,
    TwoCompartmentFingerSpec,
    finger_free_pose,
)
from .hand import Channel, HandModel, ThumbSpec, N_CHANNELS
from .pneumatics import PneumaticPlant, PressureSensorModel, Reservoir

ENV_CONFIG = "PNEUMAHAND_CONFIG"

CONFIG_FORMAT = "pneumahand.config"
CONFIG_MAJOR = 1

# Moment-arm function shared by all bellows; per-bellow pouch areas scale it.
_ARM_ANGLES_DEG = (0.0, 20.0, 40.0, 60.0, 80.0, 100.0)
_ARM_METERS = (0.022, 0.020, 0.017, 0.014, 0.011, 0.008)

DEFAULT_CONFIG = {
    "format": CONFIG_FORMAT,
    "version": 1,
    "pneumatics": {
        "supply_gauge_pa": P_SUPPLY_GAUGE,
        "atmosphere_pa": P_ATMOSPHERE,
        "inflate_coeff": 5e-10,      # kg/(s Pa), per valve; scalar or list of 16
        "vent_coeff": 5e-10,
        "substep_s": 1e-3,
        "max_switch_rate_hz": 300.0,
        "sensor": {
            "full_scale_pa": 250e3,
            "accuracy_fraction": 0.014,
            "seed": 12345,
        },
    },
    "controller": {
        "tick_rate_hz": 300.0,
        "hysteresis_band_kg": 2e-6,
        # controller-side mirror of the valve coefficients; mismatch them to
        # study estimator drift
        "inflate_coeff": 5e-10,
        "vent_coeff": 5e-10,
    },
    "hand": {
        "finger_lengths_m": {
            "index": 0.080, "middle": 0.085, "ring": 0.080, "little": 0.062,
        },
        "base_fraction": 0.45,
        "finger_mounts_m": {
            "index": [0.090, 0.033, 0.0],
            "middle": [0.093, 0.011, 0.0],
            "ring": [0.090, -0.011, 0.0],
            "little": [0.083, -0.033, 0.0],
        },
        "base_max_bend_deg": 100.0,
        "tip_max_bend_deg": 150.0,
        "compartment_max_pressure_pa": 250e3,
        "bend_stiffness_nm_per_rad": 0.05,
        "base_rest_volume_m3": 3.0e-6,
        "tip_rest_volume_m3": 3.3e-6,
        "volume_per_bend_m3_per_rad": 1.2e-6,
        "max_tip_force_n": 8.3,
        "arm_table_deg": list(_ARM_ANGLES_DEG),
        "arm_table_m": list(_ARM_METERS),
        "bellow_max_pressure_pa": 300e3,
        "bellow_deflated_thickness_m": 2e-3,
        # torque anchors at (20 deg, 250 kPa) fix the three thumb pouch areas
        "thumb_torque_anchors_nm": [4.4, 3.2, 1.9],
        "anchor_angle_deg": 20.0,
        "anchor_pressure_pa": 250e3,
        "thumb": {
            "mount_m": [0.025, 0.048, 0.0],
            "rest_direction_deg": 45.0,
            # proximal and middle bellows stack at the CMC, the distal sits
            # at the MCP after the metacarpal segment
            "segment_lengths_m": [0.008, 0.045, 0.030],
            "mounting_angles_deg": [30.0, 90.0, 45.0],
            "pronation_deg": 45.0,
            "tip_pronation_deg": 30.0,
            "pouch_counts": [3, 3, 2],
            "max_opening_deg": 100.0,
            "free_opening_deg": 90.0,   # opening at 250 kPa free inflation
            "tip_arc_length_m": 0.035,
            "tip_max_bend_deg": 90.0,
            "tip_rest_volume_m3": 2.5e-6,
            "tip_stiffness_n_per_m": 180.0,
            "max_tip_force_n": 10.0,
        },
        "palm": {
            "max_opening_deg": 30.0,    # CMC flexion limit
            "free_opening_deg": 30.0,
            "pouch_count": 1,           # same pouch shape as the proximal bellow
        },
        "abduction": {
            "pouch_area_m2": 3.0e-4,
            "pouch_count": 2,
            "max_opening_deg": 20.0,
            "free_opening_deg": 20.0,
        },
        "kapandji_tolerance_m": 0.005,
        "finger_radius_m": 0.008,
    },
    "experiments": {
        "friction_mu": 1.0,
        "repetitions": 5,
        "pullout_anchors_n": {
            "distal": 39.0, "ulnar": 32.0, "radial": 30.0, "palmar": 23.0,
        },
        "sphere_diameter_m": 0.06,
    },
}


class ConfigError(ValueError):
    pass


def _merge(base, override, path, source):
    for key, value in override.items():
        if key not in base:
            raise ConfigError(f"{source}: unknown config key '{'.'.join(path + [key])}'")
        if isinstance(base[key], dict) and isinstance(value, dict):
            _merge(base[key], value, path + [key], source)
        else:
            base[key] = value


def load_config(path=None):
    """Defaults, optionally overridden by a JSON file (or $PNEUMAHAND_CONFIG)."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return cfg
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}:1: config root must be an object")
    fmt = data.get("format", CONFIG_FORMAT)
    if fmt != CONFIG_FORMAT:
        raise ConfigError(f"{path}:1: unknown format '{fmt}'")
    version = data.get("version", CONFIG_MAJOR)
    if int(version) != CONFIG_MAJOR:
        raise ConfigError(f"{path}:1: unsupported config version {version}")
    _merge(cfg, data, [], str(path))
    return cfg


def save_config(cfg, path):
    Path(path).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")


def config_digest(cfg):
    """Short stable digest identifying a configuration."""
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


def _per_channel(value, name):
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return np.full(N_CHANNELS, float(arr))
    if arr.shape != (N_CHANNELS,):
        raise ConfigError(f"{name} must be a scalar or a list of {N_CHANNELS}")
    return arr


def _arm_table(angles_deg, arms, lo_deg, hi_deg, n=3):
    """Restrict the shared arm function to a joint's working range."""
    sample_deg = np.linspace(lo_deg, hi_deg, n)
    sampled = np.interp(sample_deg, angles_deg, arms)
    return tuple((float(np.deg2rad(a)), float(r)) for a, r in zip(sample_deg, sampled))


def _bellow(area, count, table, max_opening_deg, hcfg):
    return BellowSpec(
        pouch_area=area,
        pouch_count=count,
        moment_arm_table=table,
        max_pressure=hcfg["bellow_max_pressure_pa"],
        max_opening=float(np.deg2rad(max_opening_deg)),
        deflated_thickness=hcfg["bellow_deflated_thickness_m"],
        rest_volume=area * hcfg["bellow_deflated_thickness_m"] * count,
        volume_per_rad=0.5 * area ** 1.5,
    )


def _hinge_stiffness(spec, free_pressure, free_opening):
    """Stiffness that puts the free inflation at `free_opening` under
    `free_pressure` gauge (torque balance at the pictured opening)."""
    return free_pressure * spec.pouch_area * spec.effective_arm(free_opening) / free_opening


def build_hand_model(cfg):
    h = cfg["hand"]
    arm_deg = np.asarray(h["arm_table_deg"], dtype=float)
    arm_m = np.asarray(h["arm_table_m"], dtype=float)

    # -- fingers --------------------------------------------------------
    gain_base = np.deg2rad(h["base_max_bend_deg"]) / h["compartment_max_pressure_pa"]
    gain_tip = np.deg2rad(h["tip_max_bend_deg"]) / h["compartment_max_pressure_pa"]
    fingers = {}
    for name, length in h["finger_lengths_m"].items():
        base = PneuFlexCompartmentSpec(
            arc_length=h["base_fraction"] * length,
            pressure_to_bend_gain=gain_base,
            max_pressure=h["compartment_max_pressure_pa"],
            bend_stiffness=h["bend_stiffness_nm_per_rad"],
            rest_volume=h["base_rest_volume_m3"],
            volume_per_bend=h["volume_per_bend_m3_per_rad"],
        )
        tip = PneuFlexCompartmentSpec(
            arc_length=(1.0 - h["base_fraction"]) * length,
            pressure_to_bend_gain=gain_tip,
            max_pressure=h["compartment_max_pressure_pa"],
            bend_stiffness=h["bend_stiffness_nm_per_rad"],
            rest_volume=h["tip_rest_volume_m3"],
            volume_per_bend=h["volume_per_bend_m3_per_rad"],
        )
        # calibrate the Cartesian tip spring: full inflation against the
        # straight-finger constraint exerts exactly max_tip_force
        probe = TwoCompartmentFingerSpec(base=base, tip=tip, tip_stiffness=1.0,
                                         max_tip_force=h["max_tip_force_n"])
        straight, _ = finger_free_pose(probe, 0.0, 0.0)
        curled, _ = finger_free_pose(probe, base.max_pressure, tip.max_pressure)
        stiffness = h["max_tip_force_n"] / float(np.linalg.norm(curled - straight))
        fingers[name] = TwoCompartmentFingerSpec(
            base=base, tip=tip, tip_stiffness=stiffness,
            max_tip_force=h["max_tip_force_n"],
        )

    # -- thumb bellows: pouch areas from the three torque anchors --------
    t = h["thumb"]
    anchor_arm = float(np.interp(h["anchor_angle_deg"], arm_deg, arm_m))
    areas = [
        tau / (h["anchor_pressure_pa"] * anchor_arm)
        for tau in h["thumb_torque_anchors_nm"]
    ]
    thumb_table = _arm_table(arm_deg, arm_m, 0.0, t["max_opening_deg"],
                             n=len(arm_deg))
    thumb_bellows = tuple(
        _bellow(area, count, thumb_table, t["max_opening_deg"], h)
        for area, count in zip(areas, t["pouch_counts"])
    )
    thumb_tip = PneuFlexCompartmentSpec(
        arc_length=t["tip_arc_length_m"],
        pressure_to_bend_gain=np.deg2rad(t["tip_max_bend_deg"]) / h["compartment_max_pressure_pa"],
        max_pressure=h["compartment_max_pressure_pa"],
        bend_stiffness=h["bend_stiffness_nm_per_rad"],
        rest_volume=t["tip_rest_volume_m3"],
        volume_per_bend=h["volume_per_bend_m3_per_rad"],
    )
    thumb = ThumbSpec(
        bellows=thumb_bellows,
        tip=thumb_tip,
        mount=tuple(t["mount_m"]),
        rest_direction_deg=t["rest_direction_deg"],
        segment_lengths=tuple(t["segment_lengths_m"]),
        mounting_angles_deg=tuple(t["mounting_angles_deg"]),
        pronation_deg=t["pronation_deg"],
        tip_pronation_deg=t["tip_pronation_deg"],
        tip_stiffness=t["tip_stiffness_n_per_m"],
        max_tip_force=t["max_tip_force_n"],
    )

    # -- palm and abduction bellows --------------------------------------
    p = h["palm"]
    palm_table = _arm_table(arm_deg, arm_m, 0.0, p["max_opening_deg"])
    palm = _bellow(areas[0], p["pouch_count"], palm_table, p["max_opening_deg"], h)
    a = h["abduction"]
    abd_table = _arm_table(arm_deg, arm_m, 0.0, a["max_opening_deg"])
    abductions = tuple(
        _bellow(a["pouch_area_m2"], a["pouch_count"], abd_table,
                a["max_opening_deg"], h)
        for _ in range(3)
    )

    free_p = h["anchor_pressure_pa"]
    hinge = {
        Channel.THUMB_PROXIMAL: _hinge_stiffness(thumb_bellows[0], free_p, np.deg2rad(t["free_opening_deg"])),
        Channel.THUMB_MIDDLE: _hinge_stiffness(thumb_bellows[1], free_p, np.deg2rad(t["free_opening_deg"])),
        Channel.THUMB_DISTAL: _hinge_stiffness(thumb_bellows[2], free_p, np.deg2rad(t["free_opening_deg"])),
        Channel.PALM_BELLOW: _hinge_stiffness(palm, free_p, np.deg2rad(p["free_opening_deg"])),
        Channel.ABDUCTION_INDEX_MIDDLE: _hinge_stiffness(abductions[0], free_p, np.deg2rad(a["free_opening_deg"])),
        Channel.ABDUCTION_MIDDLE_RING: _hinge_stiffness(abductions[1], free_p, np.deg2rad(a["free_opening_deg"])),
        Channel.ABDUCTION_RING_LITTLE: _hinge_stiffness(abductions[2], free_p, np.deg2rad(a["free_opening_deg"])),
    }

    return HandModel(
        fingers=fingers,
        finger_mounts={k: tuple(v) for k, v in h["finger_mounts_m"].items()},
        thumb=thumb,
        palm=palm,
        abductions=abductions,
        hinge_stiffness=hinge,
        kapandji_tolerance=h["kapandji_tolerance_m"],
        finger_radius=h["finger_radius_m"],
    )


def build_sensor(cfg):
    s = cfg["pneumatics"]["sensor"]
    return PressureSensorModel(
        full_scale=s["full_scale_pa"],
        accuracy_fraction=s["accuracy_fraction"],
        noise_seed=s["seed"],
    )


def build_plant(cfg, model):
    pn = cfg["pneumatics"]
    return PneumaticPlant(
        volumes=model.rest_volumes(),
        inflate_coeff=_per_channel(pn["inflate_coeff"], "pneumatics.inflate_coeff"),
        vent_coeff=_per_channel(pn["vent_coeff"], "pneumatics.vent_coeff"),
        supply=Reservoir(pn["atmosphere_pa"] + pn["supply_gauge_pa"]),
        atmosphere=Reservoir(pn["atmosphere_pa"]),
        max_switch_rate=pn["max_switch_rate_hz"],
    )


def default_config_path():
    return Path(__file__).parent / "data" / "default_config.json"
