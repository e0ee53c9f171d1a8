"""Pure numpy implementations of the hot kernels.

These are the reference semantics for ``_ckernels.pyx``; both backends must
produce bit-identical output for identical input.
"""

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = 0xFFFFFFFFFFFFFFFF

_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53

_CHUNK = 1 << 18


def mix64(z):
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> _U30)) * np.uint64(MIX1)
    z = (z ^ (z >> _U27)) * np.uint64(MIX2)
    return z ^ (z >> _U31)


def _mix64_int(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def row_key(seed: int, row: int) -> int:
    return _mix64_int(seed + GAMMA * (row + 1))


def replicate_keys(seed: int, row: int, start: int, stop: int) -> np.ndarray:
    k1 = np.uint64(row_key(seed, row))
    reps = np.arange(start + 1, stop + 1, dtype=np.uint64)
    return mix64(k1 + np.uint64(GAMMA) * reps)


def uniforms(keys: np.ndarray, index: int) -> np.ndarray:
    """Uniform draw number ``index`` of every stream in ``keys``, on [0, 1)."""
    bits = mix64(keys + np.uint64((GAMMA * (index + 1)) & MASK64))
    return (bits >> _U11).astype(np.float64) * _INV53


def geometric_from_uniform(u: np.ndarray, q: float) -> np.ndarray:
    """Smallest j with q**(j+1) <= 1 - u, powers built by repeated products."""
    thresh = 1.0 - u
    j = np.zeros(u.shape, dtype=np.int64)
    tail = np.full(u.shape, q)
    idx = np.nonzero(tail > thresh)[0]
    while idx.size:
        tail[idx] = tail[idx] * q
        j[idx] += 1
        idx = idx[tail[idx] > thresh[idx]]
    return j


def pb_dp(p: np.ndarray) -> np.ndarray:
    p = np.ascontiguousarray(p, dtype=np.float64)
    k = p.shape[0]
    out = np.zeros(k + 1)
    out[0] = 1.0
    for i in range(k):
        pi = p[i]
        qi = 1.0 - pi
        out[1 : i + 2] = out[1 : i + 2] * qi + out[0 : i + 1] * pi
        out[0] = out[0] * qi
    return out


def simulate_sums(p: np.ndarray, geometric: bool, seed: int, row: int,
                  reps: int) -> np.ndarray:
    p = np.ascontiguousarray(p, dtype=np.float64)
    sums = np.zeros(reps, dtype=np.int64)
    for start in range(0, reps, _CHUNK):
        stop = min(start + _CHUNK, reps)
        keys = replicate_keys(seed, row, start, stop)
        acc = sums[start:stop]
        for k in range(p.shape[0]):
            u = uniforms(keys, k)
            if geometric:
                acc += geometric_from_uniform(u, 1.0 - p[k])
            else:
                acc += u < p[k]
    return sums
