"""Versioned on-disk formats: synergy trajectories and simulation traces.

Line-delimited text with a '#' header block (format id, name, config digest,
seed), then one sample per line. Floats are written with repr precision so a
load/save round trip is bit-exact; files diff cleanly under git.
"""

import numpy as np

from .control import MassTrajectory
from .hand import Channel, N_CHANNELS

TRAJECTORY_FORMAT = "pneumahand.trajectory"
TRACE_FORMAT = "pneumahand.trace"
FORMAT_MAJOR = 1

_CHANNEL_NAMES = ",".join(ch.name for ch in Channel)


class FormatError(ValueError):
    pass


def _write_header(fh, fmt, fields):
    fh.write(f"# {fmt} v{FORMAT_MAJOR}\n")
    for key, value in fields.items():
        fh.write(f"# {key}: {value}\n")


def _parse_header(lines, path, expected_fmt):
    if not lines or not lines[0].startswith("# "):
        raise FormatError(f"{path}:1: missing format header")
    head = lines[0][2:].strip().rsplit(" v", 1)
    if len(head) != 2 or head[0] != expected_fmt:
        raise FormatError(f"{path}:1: expected '{expected_fmt}' file, got '{lines[0][2:].strip()}'")
    try:
        major = int(head[1].split(".")[0])
    except ValueError:
        raise FormatError(f"{path}:1: bad version '{head[1]}'") from None
    if major != FORMAT_MAJOR:
        raise FormatError(f"{path}:1: unsupported major version {major}")
    meta = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=2):
        if not line.startswith("#"):
            body_start = i - 1
            break
        if ":" in line:
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        body_start = i
    return meta, body_start


def save_trajectory(traj, path, config_digest="", seed=""):
    with open(path, "w") as fh:
        _write_header(fh, TRAJECTORY_FORMAT, {
            "name": traj.name,
            "author": traj.author,
            "created": traj.created,
            "config": config_digest,
            "seed": seed,
            "channels": _CHANNEL_NAMES,
        })
        for t, row in zip(traj.times, traj.masses):
            fh.write(" ".join([repr(float(t))] + [repr(float(m)) for m in row]) + "\n")


def load_trajectory(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    meta, body_start = _parse_header(lines, path, TRAJECTORY_FORMAT)
    times, masses = [], []
    for i, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 1 + N_CHANNELS:
            raise FormatError(f"{path}:{i}: expected {1 + N_CHANNELS} columns, got {len(parts)}")
        try:
            values = [float(v) for v in parts]
        except ValueError as exc:
            raise FormatError(f"{path}:{i}: {exc}") from None
        times.append(values[0])
        masses.append(values[1:])
    if not times:
        raise FormatError(f"{path}: trajectory has no samples")
    try:
        return MassTrajectory(
            name=meta.get("name", ""),
            times=np.asarray(times),
            masses=np.asarray(masses),
            author=meta.get("author", ""),
            created=meta.get("created", ""),
        )
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None


def save_trace(path, times, setpoints, masses, joints, config_digest="", seed="",
               name=""):
    """Telemetry trace: per line t, 16 setpoints, 16 true masses, 16 joints."""
    times = np.asarray(times, dtype=float)
    setpoints = np.asarray(setpoints, dtype=float)
    masses = np.asarray(masses, dtype=float)
    joints = np.asarray(joints, dtype=float)
    with open(path, "w") as fh:
        _write_header(fh, TRACE_FORMAT, {
            "name": name,
            "config": config_digest,
            "seed": seed,
            "channels": _CHANNEL_NAMES,
            "columns": "t setpoint*16 mass*16 joint*16",
        })
        for k in range(times.size):
            row = [times[k], *setpoints[k], *masses[k], *joints[k]]
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_trace(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    meta, body_start = _parse_header(lines, path, TRACE_FORMAT)
    rows = []
    for i, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 1 + 3 * N_CHANNELS:
            raise FormatError(f"{path}:{i}: expected {1 + 3 * N_CHANNELS} columns")
        rows.append([float(v) for v in parts])
    data = np.asarray(rows)
    if data.size == 0:
        raise FormatError(f"{path}: trace has no samples")
    n = N_CHANNELS
    return {
        "meta": meta,
        "t": data[:, 0],
        "setpoints": data[:, 1:1 + n],
        "masses": data[:, 1 + n:1 + 2 * n],
        "joints": data[:, 1 + 2 * n:1 + 3 * n],
    }
