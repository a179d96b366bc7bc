"""Two-compartment finger: the two-arc workspace and constrained-tip forces."""

import numpy as np

from pneumahand.actuators import finger_free_pose, fingertip_force
from pneumahand.config import build_hand_model, load_config

model = build_hand_model(load_config())
spec = model.fingers["index"]

print(f"index finger: base {spec.base.arc_length*1e3:.0f} mm + "
      f"tip {spec.tip.arc_length*1e3:.0f} mm, "
      f"tip spring {spec.tip_stiffness:.0f} N/m, clamp {spec.max_tip_force} N")

# the 36-point pressure grid of the characterization protocol
grid = np.arange(0.0, 250e3 + 1, 50e3)
print("\ntip position (mm) over the pressure grid (rows: base kPa, cols: tip kPa):")
header = "        " + "  ".join(f"{p/1e3:6.0f}" for p in grid)
print(header)
for p_b in grid:
    cells = []
    for p_t in grid:
        xy, _ = finger_free_pose(spec, p_b, p_t)
        cells.append(f"({xy[0]*1e3:3.0f},{xy[1]*1e3:3.0f})")
    print(f"{p_b/1e3:6.0f}  " + " ".join(cells))

# strongest fully extended, weakest fully flexed
straight, _ = finger_free_pose(spec, 0.0, 0.0)
curled, _ = finger_free_pose(spec, 250e3, 250e3)
f_max = fingertip_force(spec, 250e3, 250e3, straight)
f_min = fingertip_force(spec, 250e3, 250e3, curled)
print(f"\nfully inflated against the extended posture: {np.linalg.norm(f_max):.1f} N")
print(f"fully inflated at its own free pose:          {np.linalg.norm(f_min):.1f} N")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pts = np.array([finger_free_pose(spec, pb, pt)[0] for pb in grid for pt in grid])
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(pts[:, 0] * 1e3, pts[:, 1] * 1e3, "o", ms=4)
    ax.set_xlabel("x [mm]"), ax.set_ylabel("y palmar [mm]")
    ax.set_title("fingertip workspace (36 pressure combinations)")
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig("finger_workspace.png", dpi=120)
    print("\nsaved finger_workspace.png")
except ImportError:
    pass
