"""Counter-based deterministic Gaussian noise.

Sensor noise must be a pure function of (seed, tick, channel) so that any
simulated trace can be reproduced bit-exactly from its header. A splitmix64
hash of the counters feeds a Box-Muller transform; no generator state is
carried between calls.
"""

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix(z):
    # uint64 wraparound is the point of the mix; silence numpy's scalar warning
    with np.errstate(over="ignore"):
        z = (z + _GAMMA) & _MASK
        z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
        z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
        return z ^ (z >> np.uint64(31))


def _hash64(seed, a, b, lane):
    h = _mix(np.uint64(seed) & _MASK)
    h = _mix(h ^ (np.asarray(a, dtype=np.uint64) & _MASK))
    h = _mix(h ^ (np.asarray(b, dtype=np.uint64) & _MASK))
    h = _mix(h ^ (np.uint64(lane) & _MASK))
    return h


def _uniform(h):
    # (0, 1]: never 0, so log() below is safe
    return (np.asarray(h, dtype=np.float64) + 1.0) * 2.0**-64


def standard_normal(seed, tick, channel=0):
    """One N(0,1) draw, deterministic in (seed, tick, channel).

    `tick` and `channel` may be arrays (broadcast), which gives a whole
    sensor bank one vectorized call per tick.
    """
    tick = np.asarray(tick)
    channel = np.asarray(channel)
    u1 = _uniform(_hash64(seed, tick, channel, 0))
    u2 = _uniform(_hash64(seed, tick, channel, 1))
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    if z.ndim == 0:
        return float(z)
    return z
