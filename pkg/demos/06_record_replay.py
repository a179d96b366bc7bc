"""Synergies: record a setpoint stream, replay it at different speeds."""

import numpy as np

from pneumahand.config import build_hand_model, load_config
from pneumahand.control import Recorder, replay_setpoints
from pneumahand.experiments import build_default_library, replay_pose_trace
from pneumahand.hand import Channel, N_CHANNELS, masses_for_joints

C = Channel
model = build_hand_model(load_config())

# record three slider moves with change-compression
rec = Recorder("pinch_wave", author="demo")
rest = masses_for_joints(model, np.zeros(N_CHANNELS))
for t, frac in ((0.0, 0.0), (0.5, 0.4), (1.0, 0.7), (1.5, 0.7), (2.0, 0.2)):
    joints = np.zeros(N_CHANNELS)
    joints[C.INDEX_BASE] = frac * model.joint_limits[C.INDEX_BASE]
    joints[C.THUMB_DISTAL] = frac * model.joint_limits[C.THUMB_DISTAL]
    rec.observe(t, masses_for_joints(model, joints))
traj = rec.finish(created="demo")
print(f"recorded '{traj.name}': {traj.times.size} samples "
      f"(the duplicate at t=1.5 was compressed away), {traj.duration:.1f} s")

print("\nzero-order-hold replay at three speeds:")
for scale in (0.5, 1.0, 2.0):
    halfway = replay_setpoints(traj, traj.duration * scale / 2, scale)
    print(f"  scale {scale:3.1f}: duration {traj.duration*scale:3.1f} s, "
          f"index-base mass at half-time {halfway[C.INDEX_BASE]*1e6:.2f} mg")

# the shipped library: 33 grasps + 10 opposition postures + 3 rotations
library = build_default_library(model)
print(f"\ndefault library: {len(library.names())} entries")
print("  taxonomy grasps:", ", ".join(library.taxonomy_names[:8]), "...")
print("  in-hand:        ", ", ".join(library.rotation_names))

trace = replay_pose_trace(model, library["power_sphere"])
final = trace[-1]
print(f"\npower_sphere final joints (deg): fingers "
      f"{np.round(np.rad2deg(final[:8]), 0)}, thumb "
      f"{np.round(np.rad2deg(final[8:12]), 0)}, palm "
      f"{np.rad2deg(final[12]):.0f}")
