"""Counter-based uniform streams (SplitMix64 in counter mode).

A stream is addressed by ``(seed, row, replicate)``; draw number ``i`` of that
stream is a pure function of the four integers, so simulations can be split
across workers in any order and still reproduce bit for bit.

Splitting rule, all arithmetic mod 2**64, ``mix`` the SplitMix64 finalizer
and ``G = 0x9E3779B97F4A7C15``::

    row_key   = mix(seed + G * (row + 1))
    stream    = mix(row_key + G * (replicate + 1))
    draw(i)   = mix(stream + G * (i + 1))
    uniform   = (draw(i) >> 11) * 2**-53          # in [0, 1)

In a row-sum simulation, cell ``k`` (0-based) of replicate ``r`` consumes
``draw(k)`` of stream ``(seed, row.n_index, r)``.
"""

from __future__ import annotations

from ._pykernels import GAMMA, MASK64, _mix64_int, row_key

_INV53 = 1.0 / 9007199254740992.0


def stream_key(seed: int, row: int, replicate: int) -> int:
    return _mix64_int(row_key(seed & MASK64, row) + GAMMA * (replicate + 1))


def counter_uniform(key: int, index: int) -> float:
    return (_mix64_int(key + GAMMA * (index + 1)) >> 11) * _INV53


class CounterStream:
    """Sequential view of one counter-addressed stream."""

    def __init__(self, seed: int, row: int = 0, replicate: int = 0):
        self.seed = seed
        self.row = row
        self.replicate = replicate
        self.key = stream_key(seed, row, replicate)
        self.counter = 0

    def uniform_at(self, index: int) -> float:
        return counter_uniform(self.key, index)

    def next_uniform(self) -> float:
        u = counter_uniform(self.key, self.counter)
        self.counter += 1
        return u

    def __repr__(self):
        return (f"CounterStream(seed={self.seed}, row={self.row}, "
                f"replicate={self.replicate}, counter={self.counter})")
