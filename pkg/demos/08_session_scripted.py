"""Scripted session: an operator claims the board, slides, records, replays.

Drives SessionCore directly (no sockets); `pneumahand serve` exposes the
same state machine over websockets for the mixing-board frontend.
"""

from pneumahand import wire
from pneumahand.config import load_config
from pneumahand.hand import Channel
from pneumahand.service import SessionCore

C = Channel
core = SessionCore(load_config())
cmd_id = [0]


def send(client, name, /, **args):
    cmd_id[0] += 1
    core.submit(client, wire.command(name, cmd_id[0], **args))
    replies, _ = core.tick()
    for _, reply in replies:
        status = reply["status"]
        detail = reply.get("detail", reply.get("code"))
        print(f"  {client} <- {status}: {detail}")
    return replies


print("observer tries to move a slider (must be rejected):")
send("viewer", "set_setpoint", channel="INDEX_BASE", mass=2e-5)

print("operator claims the board:")
send("op", "claim_operator")

print("second claim conflicts:")
send("viewer", "claim_operator")

print("operator records a short synergy:")
send("op", "start_record", name="demo_wave")
for factor in (1.3, 1.6, 1.1):
    target = float(core.plant.mass[C.MIDDLE_BASE] * factor)
    send("op", "set_setpoint", channel="MIDDLE_BASE", mass=target)
    for _ in range(30):
        core.tick()
send("op", "stop_record")

print("replay it at half speed (scale 2):")
send("op", "replay", name="demo_wave", scale=2.0)
frames = 0
while core.mode == "replaying":
    _, new_frames = core.tick()
    frames += len(new_frames)
print(f"  replay finished after {frames} telemetry frames, mode={core.mode}")

print("slider moves were locked during replay:")
send("op", "replay", name="demo_wave")
replies = send("op", "set_setpoint", channel="MIDDLE_BASE", mass=1e-5)
while core.mode == "replaying":
    core.tick()

print("release and hand over:")
send("op", "release_operator")
send("viewer", "claim_operator")
print(f"final mode: {core.mode}, clock {core.clock:.2f} s")
