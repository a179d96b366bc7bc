"""Air-mass control: estimation from noisy pressure, hysteresis switching,
recalibration, and synergy record/replay.

The estimator integrates the same linear flow model as the plant, but from
measured pressures and with its own coefficients; coefficient mismatch and
sensor noise are exactly what makes the estimate drift over long runs.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .constants import P_ATMOSPHERE, R_AIR, T_AMBIENT
from .hand import N_CHANNELS, hand_equilibrium
from .pneumatics import read_pressure

MASS_CHANGE_EPSILON = 1e-7  # kg, recording change-compression threshold


@dataclass(frozen=True)
class ControllerConfig:
    tick_rate: float = 300.0            # Hz, aligned to the valve limit
    hysteresis_band: float = 2e-6       # kg, full width of the deadband
    inflate_coeff: np.ndarray = field(default_factory=lambda: np.full(N_CHANNELS, 5e-10))
    vent_coeff: np.ndarray = field(default_factory=lambda: np.full(N_CHANNELS, 5e-10))

    def __post_init__(self):
        if self.hysteresis_band <= 0.0:
            raise ValueError("hysteresis band must be positive")
        if self.tick_rate <= 0.0:
            raise ValueError("tick rate must be positive")
        object.__setattr__(self, "inflate_coeff",
                           np.asarray(self.inflate_coeff, dtype=float))
        object.__setattr__(self, "vent_coeff",
                           np.asarray(self.vent_coeff, dtype=float))

    @property
    def dt(self):
        return 1.0 / self.tick_rate


@dataclass(frozen=True)
class MassEstimatorState:
    estimated_mass: np.ndarray
    last_measured_pressure: np.ndarray      # Pa absolute
    open_time_inflate: np.ndarray           # accumulated seconds
    open_time_vent: np.ndarray

    @classmethod
    def initial(cls, mass, pressure):
        n = np.asarray(mass).size
        return cls(
            estimated_mass=np.asarray(mass, dtype=float).copy(),
            last_measured_pressure=np.asarray(pressure, dtype=float).copy(),
            open_time_inflate=np.zeros(n),
            open_time_vent=np.zeros(n),
        )


def estimate_step(est, measured_p_abs, inflate_open, vent_open, dt, cfg,
                  supply_p_abs, atmosphere_p_abs=P_ATMOSPHERE):
    """Integrate the controller's forward model against measured pressures."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    measured_p_abs = np.asarray(measured_p_abs, dtype=float)
    flow = np.where(inflate_open, cfg.inflate_coeff * (supply_p_abs - measured_p_abs), 0.0)
    flow += np.where(vent_open, cfg.vent_coeff * (atmosphere_p_abs - measured_p_abs), 0.0)
    return replace(
        est,
        estimated_mass=np.maximum(est.estimated_mass + flow * dt, 0.0),
        last_measured_pressure=measured_p_abs.copy(),
        open_time_inflate=est.open_time_inflate + np.where(inflate_open, dt, 0.0),
        open_time_vent=est.open_time_vent + np.where(vent_open, dt, 0.0),
    )


def control_step(estimated_mass, setpoints, cfg):
    """Hysteresis bang-bang: inflate below the band, vent above, rest inside.

    Returns wanted (inflate_open, vent_open); the valve bank applying them
    defers any toggle that would exceed the hardware switch rate.
    """
    estimated_mass = np.asarray(estimated_mass, dtype=float)
    setpoints = np.asarray(setpoints, dtype=float)
    half = 0.5 * cfg.hysteresis_band
    inflate = estimated_mass < setpoints - half
    vent = estimated_mass > setpoints + half
    return inflate, vent


# --- synergy record / replay -------------------------------------------------

@dataclass(frozen=True)
class MassTrajectory:
    """Time-stamped per-channel air-mass setpoints; the unit of a synergy."""

    name: str
    times: np.ndarray           # (n,) s, strictly increasing
    masses: np.ndarray          # (n, 16) kg
    author: str = ""
    created: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        masses = np.asarray(self.masses, dtype=float)
        if times.size == 0:
            raise ValueError("trajectory must contain at least one sample")
        if np.any(np.diff(times) <= 0.0):
            raise ValueError("trajectory timestamps must be strictly increasing")
        if masses.shape != (times.size, N_CHANNELS):
            raise ValueError(f"trajectory must carry {N_CHANNELS} channels per sample")
        if np.any(masses < 0.0):
            raise ValueError("trajectory masses must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "masses", masses)

    @property
    def duration(self):
        return float(self.times[-1])


class Recorder:
    """Samples an operator's setpoint stream with change-compression."""

    def __init__(self, name, author=""):
        self.name = name
        self.author = author
        self._times = []
        self._masses = []

    def observe(self, t, setpoints):
        setpoints = np.asarray(setpoints, dtype=float)
        if self._masses and np.max(np.abs(setpoints - self._masses[-1])) <= MASS_CHANGE_EPSILON:
            return False
        if self._times and t <= self._times[-1]:
            return False
        self._times.append(float(t))
        self._masses.append(setpoints.copy())
        return True

    def finish(self, created=""):
        if not self._times:
            raise ValueError("nothing recorded")
        t0 = self._times[0]
        return MassTrajectory(
            name=self.name,
            times=np.asarray(self._times) - t0 if t0 else np.asarray(self._times),
            masses=np.asarray(self._masses),
            author=self.author,
            created=created,
        )


def replay_setpoints(traj, t, time_scale=1.0):
    """Zero-order-hold setpoints of a trajectory at scaled time `t`."""
    if time_scale <= 0.0:
        raise ValueError("time scale must be positive")
    idx = np.searchsorted(traj.times * time_scale, t + 1e-12) - 1
    return traj.masses[max(int(idx), 0)].copy()


def scale_trajectory(traj, time_scale):
    """Stretch timestamps by `time_scale`; values untouched."""
    if time_scale <= 0.0:
        raise ValueError("time scale must be positive")
    return replace(traj, times=traj.times * time_scale, masses=traj.masses.copy())


# --- closed loop -------------------------------------------------------------

class HardwareFault(RuntimeError):
    pass


@dataclass
class TickResult:
    tick: int
    t: float
    true_mass: np.ndarray
    estimated_mass: np.ndarray
    measured_gauge: np.ndarray
    setpoints: np.ndarray
    inflate_open: np.ndarray
    vent_open: np.ndarray
    joints: np.ndarray
    pose: object


class ControlLoop:
    """One simulated hand: plant + estimator + bang-bang + quasi-static pose.

    Single owner per tick; everything downstream of (seed, initial state,
    setpoint stream) is deterministic.
    """

    def __init__(self, model, plant, sensor, cfg, substep=1e-3):
        self.model = model
        self.plant = plant
        self.sensor = sensor
        self.cfg = cfg
        self.substep = substep
        self.tick_index = 0
        self.events = []
        self._channel_ids = np.arange(N_CHANNELS)
        eq = hand_equilibrium(model, plant.mass, compute_pose=False)
        plant.set_volumes(eq.volumes)
        self.last_equilibrium = eq
        self.estimator = MassEstimatorState.initial(plant.mass, plant.pressures)

    @property
    def t(self):
        return self.tick_index * self.cfg.dt

    def measure_gauge(self):
        true_gauge = self.plant.pressures - P_ATMOSPHERE
        return read_pressure(true_gauge, self.sensor, self.tick_index,
                             self._channel_ids)

    def tick(self, setpoints, load=None, valve_override=None, compute_pose=False):
        """Advance one controller tick toward `setpoints` (kg per channel).

        `valve_override` maps channel -> (inflate, vent) and bypasses the
        bang-bang for that channel (used by recalibration). Pose assembly is
        skipped unless requested; joints and volumes are always computed.
        """
        now = self.t
        measured_gauge = self.measure_gauge()
        measured_abs = measured_gauge + P_ATMOSPHERE
        inflate, vent = control_step(self.estimator.estimated_mass, setpoints, self.cfg)
        if valve_override:
            for ch, (i_open, v_open) in valve_override.items():
                inflate[ch] = i_open
                vent[ch] = v_open
        applied_inflate, applied_vent = self.plant.command_valves(inflate, vent, now)
        self.estimator = estimate_step(
            self.estimator, measured_abs, applied_inflate, applied_vent,
            self.cfg.dt, self.cfg, self.plant.supply.pressure,
            self.plant.atmosphere.pressure,
        )
        self.plant.step(self.cfg.dt, self.substep)
        eq = hand_equilibrium(self.model, self.plant.mass, load,
                              timestamp=now + self.cfg.dt,
                              compute_pose=compute_pose)
        self.plant.set_volumes(eq.volumes)
        self.last_equilibrium = eq
        self.tick_index += 1
        return TickResult(
            tick=self.tick_index,
            t=self.t,
            true_mass=self.plant.mass.copy(),
            estimated_mass=self.estimator.estimated_mass.copy(),
            measured_gauge=np.asarray(measured_gauge, dtype=float),
            setpoints=np.asarray(setpoints, dtype=float).copy(),
            inflate_open=applied_inflate,
            vent_open=applied_vent,
            joints=eq.joints.copy(),
            pose=eq.pose,
        )

    def recalibrate(self, channel, gauge_threshold=500.0, hold_time=0.5,
                    timeout=30.0):
        """Vent a channel to atmosphere, then re-zero its mass estimate.

        The channel is held venting until the measured gauge pressure,
        averaged over a `hold_time` window, stays under `gauge_threshold`
        (the threshold sits below the sensor's 1-sigma noise, so it must be
        tested on the window mean, not raw samples). The estimate is then
        reset to the atmospheric-equilibrium mass of the current volume.
        """
        ch = int(channel)
        setpoints = self.estimator.estimated_mass.copy()
        window = max(1, int(round(hold_time * self.cfg.tick_rate)))
        readings = []
        elapsed = 0.0
        while True:
            if elapsed > timeout:
                raise HardwareFault(
                    f"channel {ch}: vent did not reach {gauge_threshold:.0f} Pa "
                    f"within {timeout:.1f}s")
            result = self.tick(setpoints, valve_override={ch: (False, True)})
            elapsed += self.cfg.dt
            readings.append(result.measured_gauge[ch])
            if len(readings) >= window and \
                    np.mean(readings[-window:]) < gauge_threshold:
                break
        reset_mass = P_ATMOSPHERE * self.plant.volumes[ch] / (R_AIR * T_AMBIENT)
        est = self.estimator.estimated_mass.copy()
        est[ch] = reset_mass
        self.estimator = replace(self.estimator, estimated_mass=est)
        event = {"type": "recalibrated", "channel": ch, "t": self.t,
                 "reset_mass": reset_mass}
        self.events.append(event)
        return event

    def run(self, setpoint_fn, duration, load_fn=None):
        """Drive the loop for `duration` seconds; returns the tick trace."""
        trace = []
        n = int(round(duration * self.cfg.tick_rate))
        for _ in range(n):
            sp = setpoint_fn(self.t)
            load = load_fn(self.t) if load_fn else None
            trace.append(self.tick(sp, load))
        return trace
