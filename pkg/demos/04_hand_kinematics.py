"""Whole-hand kinematics: palm hollowing, thumb chain, opposition targets."""

import numpy as np

from pneumahand.config import build_hand_model, load_config
from pneumahand.hand import (Channel, N_CHANNELS, forward_kinematics,
                             hand_equilibrium, joint_equilibrium,
                             mass_for_joint, masses_for_joints)

C = Channel
model = build_hand_model(load_config())

flat = forward_kinematics(model, np.zeros(N_CHANNELS))
print("flat hand fingertips [mm]:")
for digit, tip in flat.tip_positions.items():
    print(f"  {digit:7s} {np.round(tip*1e3, 1)}")

# palm hollowing folds the ulnar scaffold toward palmar
joints = np.zeros(N_CHANNELS)
joints[C.PALM_BELLOW] = np.deg2rad(30.0)
hollow = forward_kinematics(model, joints)
moved = hollow.tip_positions["little"] - flat.tip_positions["little"]
print(f"\npalm at 30 deg moves the little fingertip by {np.round(moved*1e3,1)} mm")

# anteposition lifts the thumb out of the palm plane
joints = np.zeros(N_CHANNELS)
joints[C.THUMB_PROXIMAL] = np.deg2rad(60.0)
ante = forward_kinematics(model, joints)
print(f"thumb anteposition 60 deg: tip palmar height "
      f"{ante.tip_positions['thumb'][2]*1e3:.0f} mm")

# mass in, angle out: the quasi-static equilibrium of one bellow joint
print("\nproximal thumb bellow, equilibrium angle vs trapped air mass:")
for frac in (0.2, 0.4, 0.6, 0.8, 1.0):
    m = mass_for_joint(model, C.THUMB_PROXIMAL, frac * np.deg2rad(90.0))
    theta, p = joint_equilibrium(model, C.THUMB_PROXIMAL, m)
    print(f"  m={m*1e6:7.1f} mg -> {np.rad2deg(theta):5.1f} deg at "
          f"{(p-101325)/1e3:5.1f} kPa gauge")

# the ten opposition targets ride the posed hand
masses = masses_for_joints(model, 0.3 * model.joint_limits)
eq = hand_equilibrium(model, masses)
print("\nopposition targets on a partially closed hand [mm]:")
for label, point in eq.pose.kapandji_points:
    print(f"  {label:24s} {np.round(point*1e3, 1)}")
