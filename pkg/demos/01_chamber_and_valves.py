"""Chamber physics: ideal-gas closure, linear valve flow, vent decay, sensor noise."""

import numpy as np

from pneumahand.constants import R_AIR, T_AMBIENT, P_ATMOSPHERE
from pneumahand.pneumatics import (PneumaticPlant, PressureSensorModel,
                                   chamber_pressure, read_pressure,
                                   valve_mass_flow)

# a 20 mL chamber at two atmospheres
V = 2.0e-5
m = 2.0 * P_ATMOSPHERE * V / (R_AIR * T_AMBIENT)
print(f"chamber: V={V*1e6:.0f} mL  m={m*1e6:.1f} mg  p={chamber_pressure(m, V, T_AMBIENT)/1e3:.1f} kPa abs")

# the whole forward model: flow linear in the pressure difference
for dp in (50e3, 100e3, 200e3):
    print(f"valve flow at dp={dp/1e3:.0f} kPa: {valve_mass_flow(P_ATMOSPHERE+dp, P_ATMOSPHERE, 5e-10)*1e6:.2f} mg/s")

# vent an over-pressurized chamber: exponential decay toward atmosphere
plant = PneumaticPlant([V], 5e-10, 5e-10, initial_mass=[m])
plant.bank.vent_open[:] = True
tau = V / (5e-10 * R_AIR * T_AMBIENT)
print(f"\nventing, time constant {tau:.2f} s:")
t = 0.0
for _ in range(6):
    for _ in range(800):
        plant.step(1e-3)
    t += 0.8
    gauge = plant.pressures[0] - P_ATMOSPHERE
    print(f"  t={t:.1f}s  gauge={gauge/1e3:7.2f} kPa")

# the pressure sensor: 1.4% of 250 kPa full scale is a 3-sigma bound
sensor = PressureSensorModel()
ticks = np.arange(50_000)
readings = read_pressure(np.full(ticks.size, 100e3), sensor, ticks,
                         np.zeros(ticks.size, dtype=int))
err = readings - 100e3
print(f"\nsensor noise: std={err.std():.0f} Pa (sigma={sensor.sigma:.0f}), "
      f"within 3.5 kPa: {(np.abs(err) <= 3500).mean()*100:.2f}%")
