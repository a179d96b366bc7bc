"""Physical constants shared across the simulator."""

# Specific gas constant of dry air [J/(kg K)]
R_AIR = 287.05

# Ambient conditions; the plant is isothermal at T_AMBIENT.
T_AMBIENT = 293.15          # K
P_ATMOSPHERE = 101325.0     # Pa absolute

# Default supply reservoir, gauge. Must exceed the 300 kPa bellow maximum
# so every actuator state is reachable.
P_SUPPLY_GAUGE = 400e3      # Pa


def gauge(p_abs):
    """Absolute -> gauge pressure [Pa]."""
    return p_abs - P_ATMOSPHERE


def absolute(p_gauge):
    """Gauge -> absolute pressure [Pa]."""
    return p_gauge + P_ATMOSPHERE
