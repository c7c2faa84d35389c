"""Numeric primitives, seeded random streams and the dataset container.

Random numbers come from xoshiro256++ seeded through splitmix64, so every
experiment is bit-reproducible from a 64-bit seed regardless of platform or
numpy version.  Gaussians use the Box-Muller transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_TWO_M53 = 2.0 ** -53


def check_dims(a, b):
    """Raise ``ValueError`` unless ``a`` and ``b`` have the same length."""
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} != {len(b)}")


def dot(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_dims(a, b)
    return float(a @ b)


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 generator; returns ``(new_state, output)``."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def splitmix64(x: int) -> int:
    """First splitmix64 output for generator state ``x``."""
    return splitmix64_next(x & MASK64)[1]


def fnv1a64(data: bytes | str, h: int = FNV_OFFSET) -> int:
    """64-bit FNV-1a.  Pass a previous hash as ``h`` to continue a prefix."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class RngStream:
    """xoshiro256++ stream.  Single owner; not safe to share across threads.

    Uniform floats take the top 53 bits of one output.  ``normal`` uses
    Box-Muller: each pair of normals consumes exactly two uniforms, the
    second normal of the pair is cached for the next call.
    """

    def __init__(self, seed: int):
        self.origin_seed = seed & MASK64
        sm = self.origin_seed
        s = []
        for _ in range(4):
            sm, out = splitmix64_next(sm)
            s.append(out)
        self.s = s
        self._cached_normal = None

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s0 + s3) & MASK64, 23) + s0) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def uniform(self) -> float:
        """Uniform draw in [0, 1)."""
        return (self.next_u64() >> 11) * _TWO_M53

    def below(self, n: int) -> int:
        """Integer in [0, n) as ``floor(uniform() * n)``."""
        return int(self.uniform() * n)

    def normal(self) -> float:
        if self._cached_normal is not None:
            z, self._cached_normal = self._cached_normal, None
            return z
        u1 = 1.0 - self.uniform()  # (0, 1], keeps log finite
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        self._cached_normal = radius * math.sin(angle)
        return radius * math.cos(angle)

    def normals(self, n: int) -> np.ndarray:
        """``n`` successive ``normal()`` draws (same values, inlined loop)."""
        out = np.empty(n, dtype=np.float64)
        i = 0
        if n and self._cached_normal is not None:
            out[0], self._cached_normal = self._cached_normal, None
            i = 1
        s0, s1, s2, s3 = self.s
        log, sqrt, cos, sin, two_pi = math.log, math.sqrt, math.cos, math.sin, 2.0 * math.pi
        while i < n:
            u = []
            for _ in range(2):
                x = (s0 + s3) & MASK64
                u.append(((((x << 23) | (x >> 41)) & MASK64) + s0) & MASK64)
                t = (s1 << 17) & MASK64
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = ((s3 << 45) | (s3 >> 19)) & MASK64
            radius = sqrt(-2.0 * log(1.0 - (u[0] >> 11) * _TWO_M53))
            angle = two_pi * ((u[1] >> 11) * _TWO_M53)
            out[i] = radius * cos(angle)
            if i + 1 < n:
                out[i + 1] = radius * sin(angle)
            else:
                self._cached_normal = radius * sin(angle)
            i += 2
        self.s = [s0, s1, s2, s3]
        return out

    def __repr__(self):
        return f"RngStream(origin_seed={self.origin_seed:#018x})"


def rng_new(seed: int) -> RngStream:
    return RngStream(seed)


def sample_standard_normal(rng: RngStream) -> float:
    return rng.normal()


def derive_seed(master: int, tags) -> int:
    return splitmix64((master & MASK64) ^ fnv1a64("/".join(str(t) for t in tags)))


def rng_derive(master: int, tags) -> RngStream:
    """Independent stream for an experiment cell named by ``tags``."""
    return RngStream(derive_seed(master, tags))


# Vectorised xoshiro256++: one independent stream per row, stepped in lockstep.
# Matches RngStream bit for bit; used where thousands of short per-example
# streams are needed (test-time feature masks).

def _rotl_arr(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


class RngBatch:
    def __init__(self, seeds):
        seeds = np.asarray(seeds, dtype=np.uint64)
        state = np.empty((4, seeds.shape[0]), dtype=np.uint64)
        sm = seeds.copy()
        for i in range(4):
            sm = sm + np.uint64(GOLDEN_GAMMA)
            z = sm.copy()
            z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
            state[i] = z ^ (z >> np.uint64(31))
        self.s = state

    def next_u64(self) -> np.ndarray:
        s0, s1, s2, s3 = self.s
        result = _rotl_arr(s0 + s3, 23) + s0
        t = s1 << np.uint64(17)
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        self.s[3] = _rotl_arr(s3, 45)
        return result

    def uniform(self) -> np.ndarray:
        return (self.next_u64() >> np.uint64(11)).astype(np.float64) * _TWO_M53


@dataclass
class Dataset:
    """Ordered labelled examples: ``X`` is (n, d) float64, ``y`` holds +/-1."""

    X: np.ndarray
    y: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2:
            raise ValueError("X must be a 2-d array")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(
                f"{self.X.shape[0]} feature rows but {self.y.shape[0]} labels")
        if not np.all(np.isfinite(self.X)):
            raise ValueError("features must be finite")
        if not np.all((self.y == 1) | (self.y == -1)):
            raise ValueError("labels must be -1 or +1")

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.X.shape[0]

    def __iter__(self):
        return zip(self.X, self.y)
