"""Bellow actuators: torque grids, proportionality, moment-arm recovery."""

import numpy as np

from pneumahand.actuators import CalibrationTable, bellow_torque, fit_moment_arm
from pneumahand.config import build_hand_model, load_config

model = build_hand_model(load_config())
names = ("proximal", "middle", "distal")

print("torque [N m] at 250 kPa over opening angle:")
angles = np.deg2rad(np.arange(20.0, 101.0, 20.0))
print("deg:    " + "  ".join(f"{np.rad2deg(a):5.0f}" for a in angles))
for name, spec in zip(names, model.thumb.bellows):
    row = "  ".join(f"{bellow_torque(spec, 250e3, a):5.2f}" for a in angles)
    print(f"{name:9s}" + row)

print("\nproportional to pressure (proximal, 20 deg):")
for p in np.arange(50e3, 250e3 + 1, 50e3):
    tau = bellow_torque(model.thumb.bellows[0], p, np.deg2rad(20))
    print(f"  {p/1e3:5.0f} kPa -> {tau:5.2f} N m   (tau/p = {tau/p*1e6:.3f} per MPa)")

print("\nproportional to pouch area (20 deg, 250 kPa):")
for name, spec in zip(names, model.thumb.bellows):
    tau = bellow_torque(spec, 250e3, np.deg2rad(20))
    print(f"  {name:9s} area {spec.pouch_area*1e4:5.1f} cm^2 -> {tau:.2f} N m")

# a synthetic rig table round-trips through the least-squares arm fit
spec = model.thumb.bellows[1]
pressures = tuple(np.arange(50e3, 250e3 + 1, 50e3))
cal_angles = tuple(np.deg2rad(a) for a in (20.0, 40.0, 60.0, 80.0, 100.0))
table = CalibrationTable(
    angles=cal_angles, pressures=pressures,
    torques=tuple(tuple(bellow_torque(spec, p, a) for p in pressures)
                  for a in cal_angles))
fitted = fit_moment_arm(table, spec)
print("\nmoment arm recovered from the synthetic rig table (middle bellow):")
for angle, arm in fitted:
    true = spec.effective_arm(angle)
    print(f"  {np.rad2deg(angle):5.0f} deg: fitted {arm*1e3:.3f} mm, "
          f"true {true*1e3:.3f} mm, error {abs(arm-true):.2e}")
