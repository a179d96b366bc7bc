"""Streaming session service: one simulation loop, many observers, at most
one operator.

SessionCore is synchronous and fully deterministic: commands are queued and
applied at tick boundaries in arrival order; telemetry is decimated from the
control rate, but a frame is always emitted on a mode transition. The
asyncio/websockets layer below it only moves messages.
"""

import asyncio
import json
import time
from collections import deque
from pathlib import Path

import numpy as np

from . import wire
from .config import (build_hand_model, build_plant, build_sensor, config_digest,
                     load_config)
from .control import ControlLoop, ControllerConfig, Recorder, replay_setpoints
from .experiments import build_default_library
from .formats import load_trajectory, save_trajectory
from .hand import Channel, N_CHANNELS

MODES = ("idle", "live", "recording", "replaying", "experiment")
SESSION_FORMAT = "pneumahand.session"


class SessionCore:
    """Simulation session state machine; exactly one mode at a time."""

    def __init__(self, cfg=None, library_dir=None, session_path=None,
                 telemetry_rate=30.0):
        self.cfg = cfg if cfg is not None else load_config()
        self.digest = config_digest(self.cfg)
        self.model = build_hand_model(self.cfg)
        self.plant = build_plant(self.cfg, self.model)
        self.sensor = build_sensor(self.cfg)
        ctrl = self.cfg["controller"]
        self.controller_cfg = ControllerConfig(
            tick_rate=ctrl["tick_rate_hz"],
            hysteresis_band=ctrl["hysteresis_band_kg"],
            inflate_coeff=np.full(N_CHANNELS, ctrl["inflate_coeff"]),
            vent_coeff=np.full(N_CHANNELS, ctrl["vent_coeff"]),
        )
        if self.controller_cfg.tick_rate > self.plant.bank.max_switch_rate:
            raise ValueError("controller tick rate exceeds the valve switch rate")
        self.loop = ControlLoop(self.model, self.plant, self.sensor,
                                self.controller_cfg,
                                substep=self.cfg["pneumatics"]["substep_s"])
        self.telemetry_div = max(1, int(round(
            self.controller_cfg.tick_rate / telemetry_rate)))
        self.setpoints = self.plant.mass.copy()
        self.mode = "idle"
        self.operator = None
        self.clients = set()
        self.recorder = None
        self.replaying = None           # (traj, scale, start_t)
        self.clock_offset = 0.0
        self.pending = deque()
        self.library_dir = Path(library_dir) if library_dir else None
        self.session_path = Path(session_path) if session_path else None
        self.library = dict(build_default_library(self.model).entries)
        if self.library_dir and self.library_dir.is_dir():
            for path in sorted(self.library_dir.glob("*.traj")):
                traj = load_trajectory(path)
                self.library[traj.name or path.stem] = traj
        if self.session_path and self.session_path.exists():
            self._restore_session()

    # -- clients ---------------------------------------------------------

    @property
    def clock(self):
        return self.clock_offset + self.loop.t

    def client_connected(self, client_id):
        self.clients.add(client_id)

    def client_gone(self, client_id):
        self.clients.discard(client_id)
        if self.operator == client_id:
            self._release(client_id)

    def submit(self, client_id, msg):
        """Queue a decoded command message; applied at the next tick boundary."""
        self.pending.append((client_id, msg))

    # -- command handling -------------------------------------------------

    def _require_operator(self, client_id):
        if self.operator != client_id:
            raise wire.WireError("not-operator", "command requires the operator role")

    def _release(self, client_id):
        self.operator = None
        if self.mode == "recording" and self.recorder is not None:
            self.recorder = None
        if self.mode in ("live", "recording"):
            self.mode = "idle"

    def _apply(self, client_id, msg):
        name = msg["name"]
        args = msg.get("args", {})
        if name == "claim_operator":
            if self.operator is not None and self.operator != client_id:
                raise wire.WireError("role-conflict",
                                     "another client already holds the operator role")
            self.operator = client_id
            if self.mode == "idle":
                self.mode = "live"
            return {"role": "operator"}
        if name == "release_operator":
            self._require_operator(client_id)
            self._release(client_id)
            return {"role": "observer"}
        if name == "get_library":
            return {"entries": sorted(self.library)}
        if name == "save_session":
            self.save_session()
            return {"path": str(self.session_path) if self.session_path else None}
        self._require_operator(client_id)
        if name == "set_setpoint":
            if self.mode == "replaying":
                raise wire.WireError("channel-busy", "sliders are locked during replay")
            ch = self._channel(args.get("channel"))
            mass = float(args.get("mass", -1.0))
            if not np.isfinite(mass) or mass < 0.0:
                raise wire.WireError("bad-argument", "mass must be a non-negative number")
            self.setpoints[ch] = mass
            return {"channel": Channel(ch).name, "mass": mass}
        if name == "start_record":
            if self.mode != "live":
                raise wire.WireError("bad-mode", f"cannot record while {self.mode}")
            rec_name = str(args.get("name", "")).strip()
            if not rec_name:
                raise wire.WireError("bad-argument", "recording needs a name")
            self.recorder = Recorder(rec_name, author=str(client_id))
            self.mode = "recording"
            return {"recording": rec_name}
        if name == "stop_record":
            if self.mode != "recording" or self.recorder is None:
                raise wire.WireError("bad-mode", "not recording")
            traj = self.recorder.finish(created=f"t={self.clock:.3f}")
            self.recorder = None
            self.library[traj.name] = traj
            if self.library_dir:
                self.library_dir.mkdir(parents=True, exist_ok=True)
                save_trajectory(traj, self.library_dir / f"{traj.name}.traj",
                                config_digest=self.digest)
            self.mode = "live"
            return {"stored": traj.name, "samples": int(traj.times.size)}
        if name == "replay":
            if self.mode != "live":
                raise wire.WireError("bad-mode", f"cannot replay while {self.mode}")
            entry = args.get("name")
            if entry not in self.library:
                raise wire.WireError("unknown-entry", f"no library entry '{entry}'")
            scale = float(args.get("scale", 1.0))
            if scale <= 0.0:
                raise wire.WireError("bad-argument", "scale must be positive")
            self.replaying = (self.library[entry], scale, self.loop.t)
            self.mode = "replaying"
            return {"replaying": entry, "scale": scale}
        if name == "stop_replay":
            if self.mode != "replaying":
                raise wire.WireError("bad-mode", "not replaying")
            self._end_replay()
            return {"stopped": True}
        if name == "recalibrate":
            if self.mode == "replaying":
                raise wire.WireError("channel-busy", "channel busy: replay in progress")
            ch = self._channel(args.get("channel"))
            event = self.loop.recalibrate(ch)
            self.setpoints[ch] = self.loop.estimator.estimated_mass[ch]
            return event
        if name == "run_experiment":
            return self._run_experiment(args)
        raise wire.WireError("unknown-command", f"unhandled command {name}")

    def _channel(self, value):
        try:
            if isinstance(value, str):
                return Channel[value].value
            return Channel(int(value)).value
        except (KeyError, ValueError):
            raise wire.WireError("bad-argument", f"unknown channel {value!r}") from None

    def _run_experiment(self, args):
        from .experiments import run_kapandji
        kind = args.get("kind")
        if kind != "kapandji":
            raise wire.WireError("bad-argument", f"unknown experiment {kind!r}")
        previous = self.mode
        self.mode = "experiment"
        try:
            lib = build_default_library(self.model)
            report = run_kapandji(self.model, lib, config_digest=self.digest)
            return {"experiment": "kapandji", "score": report.notes["score"]}
        finally:
            self.mode = previous

    def _end_replay(self):
        traj, scale, t0 = self.replaying
        self.setpoints = replay_setpoints(traj, traj.duration * scale, scale)
        self.replaying = None
        self.mode = "live"

    # -- stepping ---------------------------------------------------------

    def tick(self):
        """One controller tick: apply queued commands, advance, emit frames.

        Returns (replies, frames): replies as (client_id, message), frames as
        telemetry dicts for broadcast.
        """
        replies = []
        mode_before = self.mode
        while self.pending:
            client_id, msg = self.pending.popleft()
            try:
                detail = self._apply(client_id, msg)
                replies.append((client_id, wire.ack(msg["id"], detail)))
            except wire.WireError as exc:
                replies.append((client_id, wire.error(msg["id"], exc.code, exc.detail)))

        if self.mode == "replaying":
            traj, scale, t0 = self.replaying
            elapsed = self.loop.t - t0
            if elapsed > traj.duration * scale:
                self._end_replay()
            else:
                self.setpoints = replay_setpoints(traj, elapsed, scale)

        want_frame = (self.loop.tick_index % self.telemetry_div == 0
                      or self.mode != mode_before)
        result = self.loop.tick(self.setpoints, compute_pose=want_frame)
        if self.mode == "recording" and self.recorder is not None:
            self.recorder.observe(result.t, self.setpoints)
        frames = []
        if want_frame:
            pose = result.pose
            distances = [
                float(np.linalg.norm(pose.tip_positions["thumb"] - point)) * 1e3
                for _, point in pose.kapandji_points
            ]
            frames.append(wire.telemetry(
                tick=result.tick,
                t=self.clock,
                mode=self.mode,
                masses=result.true_mass,
                setpoints=self.setpoints,
                pressures_gauge=result.measured_gauge,
                joints=result.joints,
                tips={d: p for d, p in pose.tip_positions.items()},
                kapandji_mm=distances,
                operator_held=self.operator is not None,
                clients=len(self.clients),
            ))
        return replies, frames

    # -- persistence ------------------------------------------------------

    def save_session(self):
        if not self.session_path:
            return
        state = {
            "format": SESSION_FORMAT,
            "version": 1,
            "clock": self.clock,
            "config_digest": self.digest,
            "library": sorted(self.library),
        }
        self.session_path.parent.mkdir(parents=True, exist_ok=True)
        self.session_path.write_text(json.dumps(state, indent=2) + "\n")

    def _restore_session(self):
        try:
            state = json.loads(self.session_path.read_text())
        except json.JSONDecodeError as exc:
            raise ValueError(f"{self.session_path}:{exc.lineno}: {exc.msg}") from None
        if state.get("format") != SESSION_FORMAT:
            raise ValueError(f"{self.session_path}: not a session file")
        if int(state.get("version", 0)) != 1:
            raise ValueError(f"{self.session_path}: unsupported session version")
        self.clock_offset = float(state.get("clock", 0.0))


async def serve(core, host="127.0.0.1", port=8765, real_time=True):
    """Run the websocket service until cancelled."""
    import websockets

    connections = {}
    next_client = [0]

    async def handler(ws):
        client_id = f"client-{next_client[0]}"
        next_client[0] += 1
        connections[client_id] = ws
        core.client_connected(client_id)
        try:
            async for raw in ws:
                try:
                    msg = wire.decode(raw)
                except wire.WireError as exc:
                    await ws.send(wire.encode(wire.error(None, exc.code, exc.detail)))
                    continue
                if msg["type"] == "command":
                    core.submit(client_id, msg)
        finally:
            connections.pop(client_id, None)
            core.client_gone(client_id)

    async def simulate():
        dt = core.controller_cfg.dt
        next_deadline = time.monotonic()
        while True:
            replies, frames = core.tick()
            for client_id, message in replies:
                ws = connections.get(client_id)
                if ws is not None:
                    await ws.send(wire.encode(message))
            for frame in frames:
                encoded = wire.encode(frame)
                for ws in list(connections.values()):
                    try:
                        await ws.send(encoded)
                    except Exception:
                        pass
            if real_time:
                next_deadline += dt
                delay = next_deadline - time.monotonic()
                if delay > 0:
                    await asyncio.sleep(delay)
                else:
                    next_deadline = time.monotonic()
            else:
                await asyncio.sleep(0)

    server = await websockets.serve(handler, host, port)
    sim_task = asyncio.create_task(simulate())
    try:
        await asyncio.Future()
    finally:
        sim_task.cancel()
        core.save_session()
        server.close()
        await server.wait_closed()
