"""Wire protocol: versioned JSON messages over a bidirectional socket.

Three shapes: Telemetry (state broadcast), Command (operator -> service),
Ack/Error (exactly one per command). Unknown major versions are rejected.
"""

import json

WIRE_VERSION = 1

COMMANDS = (
    "claim_operator", "release_operator",
    "set_setpoint", "start_record", "stop_record",
    "replay", "stop_replay", "recalibrate",
    "get_library", "run_experiment", "save_session",
)


class WireError(ValueError):
    def __init__(self, code, detail):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail


def telemetry(tick, t, mode, masses, setpoints, pressures_gauge, joints,
              tips, kapandji_mm, operator_held, clients=0):
    return {
        "v": WIRE_VERSION,
        "type": "telemetry",
        "tick": int(tick),
        "t": float(t),
        "mode": mode,
        "mass": [float(x) for x in masses],
        "setpoint": [float(x) for x in setpoints],
        "pressure": [float(x) for x in pressures_gauge],
        "joint": [float(x) for x in joints],
        "tips": {d: [float(v) for v in p] for d, p in tips.items()},
        "kapandji_mm": [float(x) for x in kapandji_mm],
        "operator_held": bool(operator_held),
        "clients": int(clients),
    }


def command(name, cmd_id, /, **args):
    return {"v": WIRE_VERSION, "type": "command", "id": cmd_id,
            "name": name, "args": args}


def ack(cmd_id, detail=None):
    msg = {"v": WIRE_VERSION, "type": "ack", "id": cmd_id, "status": "ok"}
    if detail is not None:
        msg["detail"] = detail
    return msg


def error(cmd_id, code, detail):
    return {"v": WIRE_VERSION, "type": "error", "id": cmd_id,
            "status": "error", "code": code, "detail": detail}


def encode(msg):
    return json.dumps(msg, separators=(",", ":"))


def decode(text):
    try:
        msg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireError("malformed", f"not valid JSON: {exc.msg}") from None
    if not isinstance(msg, dict):
        raise WireError("malformed", "message must be an object")
    version = msg.get("v")
    if not isinstance(version, int) or version != WIRE_VERSION:
        raise WireError("version", f"unsupported wire version {version!r}")
    mtype = msg.get("type")
    if mtype not in ("telemetry", "command", "ack", "error"):
        raise WireError("malformed", f"unknown message type {mtype!r}")
    if mtype == "command":
        if msg.get("name") not in COMMANDS:
            raise WireError("unknown-command", f"unknown command {msg.get('name')!r}")
        if "id" not in msg:
            raise WireError("malformed", "command carries no id")
        msg.setdefault("args", {})
        if not isinstance(msg["args"], dict):
            raise WireError("malformed", "command args must be an object")
    return msg
