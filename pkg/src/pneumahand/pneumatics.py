"""Ideal-gas chamber plant, binary valve bank, reservoirs, noisy pressure sensing.

The controlled quantity everywhere is the air mass inside a chamber; pressure
is always derived from mass, volume and temperature through the ideal gas law.
The plant is isothermal and quasi-static: volumes are imposed from outside
(by the hand equilibrium solver), never integrated here.
"""

from dataclasses import dataclass, replace

import numpy as np

from .constants import R_AIR, T_AMBIENT, P_ATMOSPHERE, P_SUPPLY_GAUGE
from .noise import standard_normal


def chamber_pressure(mass, volume, temperature):
    """Absolute pressure [Pa] of `mass` kg of air in `volume` m^3 at `temperature` K.

    Pure ideal-gas closure p = m R T / V. Accepts scalars or arrays.
    """
    volume = np.asarray(volume, dtype=float)
    temperature = np.asarray(temperature, dtype=float)
    mass = np.asarray(mass, dtype=float)
    if np.any(volume <= 0.0):
        raise ValueError("chamber volume must be strictly positive")
    if np.any(temperature <= 0.0):
        raise ValueError("temperature must be strictly positive")
    if np.any(mass < 0.0):
        raise ValueError("air mass cannot be negative")
    p = mass * R_AIR * temperature / volume
    return float(p) if p.ndim == 0 else p


def mass_for_pressure(p_abs, volume, temperature=T_AMBIENT):
    """Air mass [kg] that produces absolute pressure `p_abs` in `volume`."""
    return p_abs * np.asarray(volume, dtype=float) / (R_AIR * temperature)


def atmospheric_mass(volume, temperature=T_AMBIENT):
    """Mass at equilibrium with the atmosphere (gauge pressure zero)."""
    return mass_for_pressure(P_ATMOSPHERE, volume, temperature)


@dataclass(frozen=True)
class ChamberState:
    """Air mass, volume and temperature of one actuator chamber.

    Pressure is derived, never stored, so it can not drift out of sync with
    the gas law.
    """

    mass: float            # kg
    volume: float          # m^3, strictly positive
    temperature: float = T_AMBIENT

    def __post_init__(self):
        if self.volume <= 0.0:
            raise ValueError("chamber volume must be strictly positive")
        if self.temperature <= 0.0:
            raise ValueError("temperature must be strictly positive")
        if self.mass < 0.0:
            raise ValueError("air mass cannot be negative")

    @property
    def pressure(self):
        """Absolute pressure [Pa]."""
        return chamber_pressure(self.mass, self.volume, self.temperature)

    def with_volume(self, volume):
        """Externally imposed volume change; mass is untouched (compliance)."""
        return replace(self, volume=volume)


@dataclass(frozen=True)
class Reservoir:
    """Constant-pressure source/sink [Pa absolute]."""

    pressure: float


SUPPLY = Reservoir(P_ATMOSPHERE + P_SUPPLY_GAUGE)
ATMOSPHERE = Reservoir(P_ATMOSPHERE)


@dataclass(frozen=True)
class PressureSensorModel:
    """Gauge pressure sensor; accuracy is the 3-sigma bound on full scale."""

    full_scale: float = 250e3       # Pa
    accuracy_fraction: float = 0.014
    noise_seed: int = 12345

    @property
    def sigma(self):
        return self.accuracy_fraction * self.full_scale / 3.0


def read_pressure(true_p, sensor, tick, channel=0):
    """Noisy pressure reading, deterministic for fixed (seed, tick, channel).

    `true_p` and `channel` may be arrays to read a whole sensor bank at once.
    """
    z = standard_normal(sensor.noise_seed, tick, channel)
    out = np.asarray(true_p, dtype=float) + sensor.sigma * z
    if out.ndim == 0:
        return float(out)
    return out


def valve_mass_flow(upstream_p, downstream_p, flow_coefficient):
    """Mass flow [kg/s] through an open valve, linear in the pressure difference.

    Positive flow runs upstream -> downstream; a negative difference simply
    reverses the flow. This is the whole forward model: no choked regime.
    """
    if np.any(np.asarray(flow_coefficient) <= 0.0):
        raise ValueError("flow coefficient must be positive")
    return flow_coefficient * (np.asarray(upstream_p, dtype=float) - np.asarray(downstream_p, dtype=float))


class ValveBank:
    """Per-channel inflate/vent valve pairs with a switch-rate limit.

    A command that would toggle a valve faster than `max_switch_rate` is
    deferred: the valve keeps its previous state for this tick. Every applied
    transition is appended to `switch_log` as (time, channel, valve, state).
    """

    def __init__(self, n_channels, max_switch_rate=300.0):
        self.n_channels = n_channels
        self.max_switch_rate = float(max_switch_rate)
        self.inflate_open = np.zeros(n_channels, dtype=bool)
        self.vent_open = np.zeros(n_channels, dtype=bool)
        self._last_switch = {
            "inflate": np.full(n_channels, -np.inf),
            "vent": np.full(n_channels, -np.inf),
        }
        self.switch_log = []

    @property
    def min_interval(self):
        return 1.0 / self.max_switch_rate

    def _apply(self, name, current, wanted, now):
        wanted = np.asarray(wanted, dtype=bool)
        last = self._last_switch[name]
        # small slack so switching exactly at 1/rate is legal
        allowed = (now - last) >= self.min_interval - 1e-12
        toggle = (wanted != current) & allowed
        new = np.where(toggle, wanted, current)
        last[toggle] = now
        for ch in np.nonzero(toggle)[0]:
            self.switch_log.append((now, int(ch), name, bool(new[ch])))
        return new

    def command(self, inflate_open, vent_open, now):
        """Request valve states at time `now`; returns the applied states."""
        self.inflate_open = self._apply("inflate", self.inflate_open, inflate_open, now)
        self.vent_open = self._apply("vent", self.vent_open, vent_open, now)
        return self.inflate_open.copy(), self.vent_open.copy()


def assert_switch_rate(switch_log, max_rate):
    """Raise if any single valve in a trace toggled faster than `max_rate`."""
    seen = {}
    for t, ch, valve, _state in switch_log:
        key = (ch, valve)
        if key in seen and (t - seen[key]) < 1.0 / max_rate - 1e-12:
            raise AssertionError(
                f"valve {valve}[{ch}] switched after {t - seen[key]:.6f}s "
                f"(< {1.0 / max_rate:.6f}s)"
            )
        seen[key] = t


def _step_masses(mass, pressure, inflate_open, vent_open, dt,
                 supply_p, atmosphere_p, inflate_coeff, vent_coeff):
    """Explicit-Euler mass update for a channel array. Returns new masses."""
    flow_in = np.where(inflate_open, valve_mass_flow(supply_p, pressure, inflate_coeff), 0.0)
    flow_vent = np.where(vent_open, valve_mass_flow(atmosphere_p, pressure, vent_coeff), 0.0)
    return np.maximum(mass + dt * (flow_in + flow_vent), 0.0)


def step_plant(chambers, bank, volumes, dt,
               inflate_coeff, vent_coeff,
               supply=SUPPLY, atmosphere=ATMOSPHERE):
    """Advance every chamber by one explicit-Euler step of length `dt`.

    `volumes` are the externally supplied chamber volumes for this step;
    pressure is recomputed from the new mass and the supplied volume. Both
    valves open at once is fine: the two flows just add up.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    volumes = np.asarray(volumes, dtype=float)
    mass = np.array([c.mass for c in chambers])
    temp = np.array([c.temperature for c in chambers])
    p = chamber_pressure(mass, volumes, temp)
    new_mass = _step_masses(mass, p, bank.inflate_open, bank.vent_open, dt,
                            supply.pressure, atmosphere.pressure,
                            np.asarray(inflate_coeff, dtype=float),
                            np.asarray(vent_coeff, dtype=float))
    return tuple(
        ChamberState(mass=float(m), volume=float(v), temperature=float(t))
        for m, v, t in zip(new_mass, volumes, temp)
    )


class PneumaticPlant:
    """Array-backed plant for the 16-channel closed loop.

    Owns masses, volumes, the valve bank and the reservoirs. One owner
    mutates it per tick; it carries no locks.
    """

    def __init__(self, volumes, inflate_coeff, vent_coeff,
                 supply=SUPPLY, atmosphere=ATMOSPHERE,
                 max_switch_rate=300.0, temperature=T_AMBIENT,
                 initial_mass=None):
        self.volumes = np.asarray(volumes, dtype=float).copy()
        n = self.volumes.size
        self.inflate_coeff = np.broadcast_to(np.asarray(inflate_coeff, dtype=float), (n,)).copy()
        self.vent_coeff = np.broadcast_to(np.asarray(vent_coeff, dtype=float), (n,)).copy()
        self.supply = supply
        self.atmosphere = atmosphere
        self.temperature = float(temperature)
        self.bank = ValveBank(n, max_switch_rate)
        if initial_mass is None:
            initial_mass = atmospheric_mass(self.volumes, self.temperature)
        self.mass = np.asarray(initial_mass, dtype=float).copy()

    @property
    def n_channels(self):
        return self.volumes.size

    @property
    def pressures(self):
        """Absolute pressures [Pa] from the gas law."""
        return chamber_pressure(self.mass, self.volumes, self.temperature)

    def set_volumes(self, volumes):
        """Quasi-static volume update from the hand solver; mass untouched."""
        self.volumes = np.asarray(volumes, dtype=float).copy()

    def command_valves(self, inflate_open, vent_open, now):
        return self.bank.command(inflate_open, vent_open, now)

    def step(self, dt, substep=1e-3):
        """Integrate one controller tick, subdividing so each Euler step <= substep."""
        if dt <= 0.0:
            raise ValueError("dt must be positive")
        n_sub = max(1, int(np.ceil(dt / substep - 1e-12)))
        h = dt / n_sub
        for _ in range(n_sub):
            p = chamber_pressure(self.mass, self.volumes, self.temperature)
            self.mass = _step_masses(
                self.mass, p, self.bank.inflate_open, self.bank.vent_open, h,
                self.supply.pressure, self.atmosphere.pressure,
                self.inflate_coeff, self.vent_coeff,
            )
        return self.mass.copy()

    def snapshot(self):
        return {
            "mass": self.mass.tolist(),
            "volumes": self.volumes.tolist(),
            "inflate_open": self.bank.inflate_open.tolist(),
            "vent_open": self.bank.vent_open.tolist(),
        }

    def restore(self, snap):
        self.mass = np.asarray(snap["mass"], dtype=float).copy()
        self.volumes = np.asarray(snap["volumes"], dtype=float).copy()
        self.bank.inflate_open = np.asarray(snap["inflate_open"], dtype=bool).copy()
        self.bank.vent_open = np.asarray(snap["vent_open"], dtype=bool).copy()
