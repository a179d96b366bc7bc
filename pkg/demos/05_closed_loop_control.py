"""Closed-loop air-mass control: bang-bang convergence, drift, recalibration."""

import numpy as np

from pneumahand.config import (build_hand_model, build_plant, build_sensor,
                               load_config)
from pneumahand.control import ControlLoop, ControllerConfig
from pneumahand.hand import Channel, N_CHANNELS, mass_for_joint

C = Channel
cfg = load_config()
model = build_hand_model(cfg)
loop = ControlLoop(
    model, build_plant(cfg, model), build_sensor(cfg),
    ControllerConfig(
        tick_rate=cfg["controller"]["tick_rate_hz"],
        hysteresis_band=cfg["controller"]["hysteresis_band_kg"],
        inflate_coeff=np.full(N_CHANNELS, cfg["controller"]["inflate_coeff"]),
        vent_coeff=np.full(N_CHANNELS, cfg["controller"]["vent_coeff"]),
    ),
)

ch = C.THUMB_PROXIMAL
setpoints = loop.plant.mass.copy()
setpoints[ch] = mass_for_joint(model, ch, np.deg2rad(75.0))
print(f"setpoint step on {ch.name}: {setpoints[ch]*1e6:.1f} mg "
      f"(band {loop.cfg.hysteresis_band*1e6:.1f} mg)")

for second in range(4):
    trace = loop.run(lambda t: setpoints, duration=1.0)
    r = trace[-1]
    print(f"  t={loop.t:4.1f}s  mass={r.true_mass[ch]*1e6:7.2f} mg  "
          f"err={(r.true_mass[ch]-setpoints[ch])*1e6:+7.3f} mg  "
          f"joint={np.rad2deg(r.joints[ch]):5.1f} deg  "
          f"valves={'I' if r.inflate_open[ch] else '·'}{'V' if r.vent_open[ch] else '·'}")

switches = [s for s in loop.plant.bank.switch_log if s[1] == ch]
print(f"valve transitions on this channel: {len(switches)} "
      f"(all spaced >= {1/loop.plant.bank.max_switch_rate*1e3:.2f} ms)")

# estimator drift under sensor noise, then a recalibration
print("\nalternating inflate/vent cycles, estimate error growth:")
rest = loop.plant.mass.copy()
high = rest.copy()
high[C.INDEX_BASE] *= 1.5
worst = 0.0
for k in range(3000):
    sp = high if (k // 25) % 2 == 0 else rest
    r = loop.tick(sp)
    worst = max(worst, abs(r.estimated_mass[C.INDEX_BASE] - r.true_mass[C.INDEX_BASE]))
    if (k + 1) % 1000 == 0:
        print(f"  after {k+1:5d} ticks: error envelope {worst*1e9:.2f} ug")

event = loop.recalibrate(C.INDEX_BASE)
err = abs(loop.estimator.estimated_mass[C.INDEX_BASE] - loop.plant.mass[C.INDEX_BASE])
print(f"recalibrated at t={event['t']:.1f}s -> estimate error {err*1e9:.3f} ug")
