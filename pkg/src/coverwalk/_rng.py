"""Counter-based pseudo-random streams (SplitMix64 in counter mode).

Each Monte Carlo replica draws from its own stream; stream keys are derived
from (seed, stream_id) so replicas are independent of scheduling order.  The
i-th draw of a stream is ``mix64(key + i * GOLDEN)``, a pure function of
(key, i), which lets the numba kernel and the vectorized numpy fallback
consume exactly the same values.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB

# 2^-53; doubles are built from the top 53 bits of the mixed counter.
_INV53 = 1.0 / 9007199254740992.0


def mix64(z: int) -> int:
    """Finalizer of SplitMix64 on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, stream_id: int) -> int:
    """64-bit key of stream ``stream_id`` under ``seed``."""
    base = mix64((seed & MASK64) * GOLDEN + 1)
    return mix64(base + (stream_id & MASK64) * GOLDEN)


def stream_keys(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Vectorized ``stream_key`` for streams offset..offset+count-1."""
    base = np.uint64(mix64((seed & MASK64) * GOLDEN + 1))
    ids = np.arange(offset, offset + count, dtype=np.uint64)
    return _mix64_vec(base + ids * np.uint64(GOLDEN))


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def stream_doubles(key: int, start: int, count: int) -> np.ndarray:
    """Draws ``start+1 .. start+count`` of the stream, as doubles in [0, 1)."""
    counters = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    bits = _mix64_vec(np.uint64(key) + counters * np.uint64(GOLDEN))
    return (bits >> np.uint64(11)).astype(np.float64) * _INV53
