"""Counter-based splittable randomness.

Every random quantity in this package is a pure function of a 64-bit
stream key and a 64-bit counter, via a double-round SplitMix64-style
mixer.  That gives random access (any counter, any order), bulk
vectorized generation, and reproducibility: the same (key, counter)
always yields the same word, no matter what was drawn before.

Stream keys are derived by chaining tag/level/index components onto a
master seed with `derive`.  The tag constants below partition the key
space between the subsystems; positions may be negative and enter
counters mod 2**64.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# stream tags (first component after the master seed)
TAG_XI = 1          # driving bit-vector words, per (level, position)
TAG_INC = 2         # per-slot chain increments, levels >= 2, real slots
TAG_PRE = 3         # per-slot chain increments, virtual pre-range slots
TAG_PHASE = 4       # one cycle-phase draw per level
TAG_X0 = 5          # fresh fair signs for depth-0 positions
TAG_BLOCK = 6       # block innovation trees, per (level, anchor)
TAG_DRAW = 7        # generic measure-sampling draws
TAG_START = 8       # uniform chain starts
TAG_REPLICATE = 9   # per-replicate sub-seeds in campaigns


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a Python int (mod 2**64)."""
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return x


def extend(key: int, *parts: int) -> int:
    """Chain further integer components onto an existing stream key."""
    for p in parts:
        key = mix64(key ^ mix64((int(p) + _GOLDEN) & _MASK))
    return key


def derive(*parts: int) -> int:
    """Chain integer components into one 64-bit stream key."""
    return extend(0, *parts)


def word_at(key: int, counter: int) -> int:
    """The single 64-bit word of stream `key` at `counter`."""
    return mix64(mix64((key + (int(counter) * _GOLDEN)) & _MASK) ^ key)


def _mix64_arr(x: np.ndarray) -> np.ndarray:
    x = np.atleast_1d(x).copy()  # 0-d inputs would warn on uint64 wrap
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def words(key: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized `word_at` over an integer array of counters."""
    c = np.asarray(counters).astype(np.int64, copy=False).view(np.uint64) \
        if np.asarray(counters).dtype != np.uint64 else np.asarray(counters)
    z = c * np.uint64(_GOLDEN)
    z = z + np.uint64(key)
    return _mix64_arr(_mix64_arr(z) ^ np.uint64(key))


def words_keyed(keys: np.ndarray, counter: int = 0) -> np.ndarray:
    """Vectorized over an array of stream keys at a fixed counter."""
    k = np.asarray(keys).astype(np.int64, copy=False).view(np.uint64) \
        if np.asarray(keys).dtype != np.uint64 else np.asarray(keys)
    z = k + np.uint64((counter * _GOLDEN) & _MASK)
    return _mix64_arr(_mix64_arr(z) ^ k)


def extend_arr(keys, parts) -> np.ndarray:
    """Vectorized `extend(key, part)`; `keys` and `parts` broadcast."""
    k = np.asarray(keys)
    k = k.astype(np.int64, copy=False).view(np.uint64) if k.dtype != np.uint64 else k
    p = np.asarray(parts)
    p = p.astype(np.int64, copy=False).view(np.uint64) if p.dtype != np.uint64 else p
    inner = _mix64_arr(p + np.uint64(_GOLDEN))
    return _mix64_arr(k ^ inner)


def uniform_index(key: int, n: int, counter: int = 0) -> int:
    """Exact uniform draw from range(n) by rejection on bit chunks."""
    if not 1 <= n <= 1 << 32:
        raise ValueError("n out of range")
    k = max(n - 1, 1).bit_length()
    limit = ((1 << k) // n) * n
    c = counter
    while True:
        w = word_at(key, c)
        for _ in range(64 // k):
            v = w & ((1 << k) - 1)
            w >>= k
            if v < limit:
                return v % n
        c += 1


def uniform_indices(keys: np.ndarray, n: int) -> np.ndarray:
    """Vectorized exact uniform draws from range(n), one per stream key."""
    k = max(n - 1, 1).bit_length()
    limit = ((1 << k) // n) * n
    out = np.empty(len(keys), dtype=np.int64)
    pending = np.arange(len(keys))
    keys = np.asarray(keys, dtype=np.uint64)
    counter = 0
    while len(pending):
        w = words_keyed(keys[pending], counter)
        done = np.zeros(len(pending), dtype=bool)
        for shift in range(0, 64 - k + 1, k):
            v = (w >> np.uint64(shift)) & np.uint64((1 << k) - 1)
            take = (~done) & (v < limit)
            out[pending[take]] = v[take].astype(np.int64) % n
            done |= take
        pending = pending[~done]
        counter += 1
    return out


def bernoulli_words(w: np.ndarray, num: int = 3, den_bits: int = 3) -> np.ndarray:
    """Map uniform words to exact Bernoulli(num / 2**den_bits) indicators."""
    return (w & np.uint64((1 << den_bits) - 1)) < np.uint64(num)


def xi_words(seed: int, level: int, positions: np.ndarray) -> np.ndarray:
    return words(derive(seed, TAG_XI, level), positions)


def xi_bits_from_words(w: np.ndarray) -> np.ndarray:
    """Six Bernoulli(3/8) coordinates per word: 3-bit fields, value < 3."""
    out = np.empty(w.shape + (6,), dtype=np.uint8)
    for i in range(6):
        out[..., i] = ((w >> np.uint64(3 * i)) & np.uint64(7)) < np.uint64(3)
    return out


def xi_bits(seed: int, level: int, positions: np.ndarray) -> np.ndarray:
    return xi_bits_from_words(xi_words(seed, level, positions))


def fair_signs(key: int, positions: np.ndarray) -> np.ndarray:
    """Exact fair ±1 values, one per position."""
    w = words(key, positions)
    return np.where((w & np.uint64(1)).astype(bool), np.int8(1), np.int8(-1))


def words_multi(keys: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Vectorized words with per-element keys and counters (broadcast)."""
    k = np.asarray(keys)
    k = k.astype(np.int64, copy=False).view(np.uint64) if k.dtype != np.uint64 else k
    c = np.asarray(counters)
    c = c.astype(np.int64, copy=False).view(np.uint64) if c.dtype != np.uint64 else c
    z = c * np.uint64(_GOLDEN) + k
    return _mix64_arr(_mix64_arr(z) ^ k)
