"""The six-state cyclic chain and its spaced-symbol process.

The chain holds with probability 5/8 and advances cyclically with
probability 3/8 at every step, driven by keyed bit-vector draws; its
stationary law is uniform.  The spaced process reports the new state
when the chain moves and 0 when it holds, so its nonzero symbols cycle
1..6 ("successor rule").

Three exact samplers are provided:
  * `sample_stationary_path`       - uniform start plus forward folding;
  * `sample_stationary_path_cftp`  - coupling from the past on the keyed
    driving stream, so windows can be re-sampled and extended with
    bit-identical overlap;
  * `literal_level1_sampler`       - backward scan for an identity
    pattern in the driving stream, then a literal forward evaluation.
The CFTP and literal samplers reproduce the same realization for the
same seed, because the identity pattern forces every chain copy into
the same state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels, rng
from .coding import chain_step

_CHUNK = 1 << 22


class BudgetExceededError(RuntimeError):
    """A configured scan or coalescence budget was exhausted."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


@dataclass(frozen=True)
class TransitionMatrix:
    """6x6 one-step law with exact rational entries, rows/cols 1..6."""

    entries: tuple  # tuple of 6 tuples of Fraction

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - 1][j - 1]

    def row_sums(self):
        return [sum(row) for row in self.entries]

    def is_uniform_stationary(self) -> bool:
        sixth = Fraction(1, 6)
        return all(
            sum(sixth * self.entries[i][j] for i in range(6)) == sixth
            for j in range(6)
        )

    def as_float(self) -> np.ndarray:
        return np.array([[float(p) for p in row] for row in self.entries])

    def to_json(self) -> str:
        return json.dumps(
            [[f"{p.numerator}/{p.denominator}" for p in row]
             for row in self.entries],
            indent=1,
        )


def expected_transition_matrix() -> TransitionMatrix:
    """The closed-form law: hold 5/8, advance 3/8, else 0."""
    rows = []
    for i in range(1, 7):
        row = [Fraction(0)] * 6
        row[i - 1] = Fraction(5, 8)
        row[i % 6] = Fraction(3, 8)
        rows.append(tuple(row))
    return TransitionMatrix(tuple(rows))


def derive_transition_matrix() -> TransitionMatrix:
    """Derive the law from the coding layer by exact enumeration of the
    64 driving bit-vectors with their product weights."""
    rows = []
    for i in range(1, 7):
        row = [Fraction(0)] * 6
        for mask in range(64):
            beta = tuple((mask >> c) & 1 for c in range(6))
            ones = sum(beta)
            weight = Fraction(3, 8) ** ones * Fraction(5, 8) ** (6 - ones)
            row[chain_step(i, beta) - 1] += weight
        rows.append(tuple(row))
    return TransitionMatrix(tuple(rows))


def identity_pattern_probability() -> Fraction:
    """Chance that six consecutive driving vectors stack to the identity
    matrix: 30 zero bits and 6 one bits."""
    return Fraction(5, 8) ** 30 * Fraction(3, 8) ** 6


@dataclass(frozen=True)
class ChainPath:
    """Chain states on [start-1, end] and spaced symbols on [start, end]."""

    start: int
    states: np.ndarray  # int8 values 1..6, index 0 <-> position start-1
    spaced: np.ndarray  # uint8 values 0..6, index 0 <-> position start

    @property
    def end(self) -> int:
        return self.start + len(self.spaced) - 1

    def u(self, k: int) -> int:
        return int(self.states[k - self.start + 1])

    def w(self, k: int) -> int:
        return int(self.spaced[k - self.start])

    def to_csv(self) -> str:
        lines = ["k,u,w"]
        for i in range(len(self.spaced)):
            k = self.start + i
            lines.append(f"{k},{self.states[i + 1]},{self.spaced[i]}")
        return "\n".join(lines) + "\n"


def _spaced_from_states(states: np.ndarray) -> np.ndarray:
    moved = states[1:] != states[:-1]
    return np.where(moved, states[1:], 0).astype(np.uint8)


def _stream(seed: int, level: int) -> int:
    return rng.derive(seed, rng.TAG_XI, level)


def _fold_into(states: np.ndarray, key: int, s0: int, a: int, b: int):
    """Fill states[1:] with the fold over positions [a, b] from s0."""
    state = s0
    for lo in range(a, b + 1, _CHUNK):
        hi = min(lo + _CHUNK - 1, b)
        w = rng.words(key, np.arange(lo, hi + 1))
        state = _kernels.fold_path(w, state, states[lo - a + 1 : hi - a + 2])


def sample_stationary_path(window, seed: int, level: int = 1) -> ChainPath:
    """Uniform start at a-1, then forward folding of keyed draws."""
    a, b = window
    if a > b:
        raise ValueError("empty window")
    key = _stream(seed, level)
    s0 = rng.uniform_index(rng.derive(seed, rng.TAG_START, level, a), 6)
    states = np.empty(b - a + 2, dtype=np.int8)
    states[0] = s0
    _fold_into(states, key, s0, a, b)
    states += 1
    return ChainPath(a, states, _spaced_from_states(states))


def cftp_state_before(seed: int, level: int, a: int,
                      max_backoff: int = 1 << 20) -> int:
    """Exact stationary state at position a-1 via coupling from the past.

    Runs the grand coupling forward from progressively earlier starts
    over the keyed driving stream until all six copies merge at or
    before a-1; the merged value is the stationary state (0-based).
    """
    key = _stream(seed, level)
    m = 64
    while m <= max_backoff:
        w = rng.words(key, np.arange(a - m, a))
        hit, state = _kernels.coalesce(w)
        if hit >= 0:
            return int(state)
        m *= 2
    raise BudgetExceededError(
        "chain copies did not coalesce within the backward budget",
        level=level, position=a, backoff=max_backoff,
    )


def sample_stationary_path_cftp(window, seed: int, level: int = 1,
                                max_backoff: int = 1 << 20) -> ChainPath:
    """Exact stationary path; overlapping windows reproduce bit-exactly."""
    a, b = window
    if a > b:
        raise ValueError("empty window")
    key = _stream(seed, level)
    s0 = cftp_state_before(seed, level, a, max_backoff)
    states = np.empty(b - a + 2, dtype=np.int8)
    states[0] = s0
    _fold_into(states, key, s0, a, b)
    states += 1
    return ChainPath(a, states, _spaced_from_states(states))


def return_time_samples(path_length: int, seed: int,
                        level: int = 1) -> np.ndarray:
    """Gaps between consecutive spaced-symbol-1 positions on a long
    stationary path; distributed as the conditional return time."""
    path = sample_stationary_path_cftp((0, path_length - 1), seed, level)
    ones = np.flatnonzero(path.spaced == 1)
    return np.diff(ones)


def _pattern_codes(w: np.ndarray) -> np.ndarray:
    """Per-position 6-bit column code of the driving vector."""
    code = np.zeros(w.shape, dtype=np.uint8)
    for c in range(6):
        code |= (((w >> np.uint64(3 * c)) & np.uint64(7)) < np.uint64(3)
                 ).astype(np.uint8) << c
    return code


_IDENTITY_CODES = np.array([1, 2, 4, 8, 16, 32], dtype=np.uint8)


def _match_ends(codes: np.ndarray) -> np.ndarray:
    """Indices k such that codes[k-5..k] spell the identity pattern."""
    if len(codes) < 6:
        return np.empty(0, dtype=np.int64)
    ok = codes[5:] == 32
    for i in range(5):
        ok &= codes[i : len(codes) - 5 + i] == _IDENTITY_CODES[i]
    return np.flatnonzero(ok) + 5


def count_identity_patterns(seed: int, n_positions: int,
                            level: int = 1) -> int:
    """Number of pattern ends in positions [0, n_positions)."""
    key = _stream(seed, level)
    count = 0
    lo = 0
    while lo < n_positions:
        hi = min(lo + _CHUNK, n_positions)
        w = rng.words(key, np.arange(max(lo - 5, 0), hi))
        ends = _match_ends(_pattern_codes(w))
        ends += max(lo - 5, 0)
        count += int(np.count_nonzero((ends >= max(lo, 5)) & (ends < hi)))
        lo = hi
    return count


def find_pattern_end_before(seed: int, level: int, a: int,
                            scan_budget: int) -> int:
    """Most recent identity-pattern end at or before a-1, scanning the
    keyed stream backward in chunks."""
    key = _stream(seed, level)
    hi = a  # exclusive
    scanned = 0
    while scanned < scan_budget:
        lo = hi - _CHUNK
        w = rng.words(key, np.arange(lo - 5, hi))
        ends = _match_ends(_pattern_codes(w))
        if len(ends):
            return int(ends[-1]) + lo - 5
        scanned += _CHUNK
        hi = lo
    raise BudgetExceededError(
        "no identity pattern within the backward scan budget",
        level=level, position=a, scan_budget=scan_budget,
    )


def literal_level1_sampler(window, seed: int, scan_budget: int = 4 << 30,
                           level: int = 1) -> ChainPath:
    """Literal evaluation: find a regeneration, fold forward from it.

    Exact but expensive (the pattern is found ~5e8 positions back on
    average); retained as a realization-level cross-check of the CFTP
    sampler, which it must match value-for-value at equal seeds.
    """
    a, b = window
    if a > b:
        raise ValueError("empty window")
    t_star = find_pattern_end_before(seed, level, a, scan_budget)
    key = _stream(seed, level)
    state = 5  # pattern end leaves the automaton in state 6 (0-based 5)
    lo = t_star + 1
    while lo <= a - 1:  # advance the state from t_star up to position a-1
        hi = min(lo + _CHUNK - 1, a - 1)
        state = _kernels.fold_final(rng.words(key, np.arange(lo, hi + 1)),
                                    state)
        lo = hi + 1
    states = np.empty(b - a + 2, dtype=np.int8)
    states[0] = state
    _fold_into(states, key, state, a, b)
    states += 1
    return ChainPath(a, states, _spaced_from_states(states))
