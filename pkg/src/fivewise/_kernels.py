"""Numba hot loops for the sequential chain folds.

States are 0-based here (0..5 for chain states 1..6).  Driving words
are raw 64-bit stream outputs; coordinate c of a word is the 3-bit
field at 3c, giving an exact Bernoulli(3/8) indicator via `field < 3`.
A state s consults coordinate (s+1) mod 6 and advances cyclically when
that indicator fires.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def step_bit(word, state):
    c = (state + 1) % 6
    return (word >> np.uint64(3 * c)) & np.uint64(7) < np.uint64(3)


@numba.njit(cache=True)
def fold_final(words, state):
    """Fold the chain through `words`, returning only the final state."""
    for k in range(words.shape[0]):
        if step_bit(words[k], state):
            state = (state + 1) % 6
    return state


@numba.njit(cache=True)
def fold_path(words, state, out):
    """Fold the chain, writing the state after each step into `out`."""
    for k in range(words.shape[0]):
        if step_bit(words[k], state):
            state = (state + 1) % 6
        out[k] = state
    return state


@numba.njit(cache=True)
def coalesce(words):
    """Run all six chain copies through `words` with the grand coupling.

    Returns (index of first coalescence or -1, common final state).
    The common final state is meaningful only when coalescence occurred.
    """
    states = np.empty(6, dtype=np.int8)
    for s in range(6):
        states[s] = s
    hit = np.int64(-1)
    for k in range(words.shape[0]):
        w = words[k]
        for i in range(6):
            s = states[i]
            if (w >> np.uint64(3 * ((s + 1) % 6))) & np.uint64(7) < np.uint64(3):
                states[i] = (s + 1) % 6
        if hit < 0:
            same = True
            for i in range(1, 6):
                if states[i] != states[0]:
                    same = False
                    break
            if same:
                hit = k
    return hit, states[0]


@numba.njit(cache=True)
def batch_fold(words2d, starts, out2d):
    """Row-wise `fold_path` for a batch of independent windows."""
    for r in range(words2d.shape[0]):
        state = starts[r]
        for k in range(words2d.shape[1]):
            if step_bit(words2d[r, k], state):
                state = (state + 1) % 6
            out2d[r, k] = state


@numba.njit(cache=True)
def batch_coalesce(words2d, hits, finals):
    """Row-wise grand-coupling coalescence scan."""
    for r in range(words2d.shape[0]):
        s0 = np.int8(0)
        s1 = np.int8(1)
        s2 = np.int8(2)
        s3 = np.int8(3)
        s4 = np.int8(4)
        s5 = np.int8(5)
        hit = np.int64(-1)
        for k in range(words2d.shape[1]):
            w = words2d[r, k]
            if (w >> np.uint64(3 * ((s0 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s0 = (s0 + 1) % 6
            if (w >> np.uint64(3 * ((s1 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s1 = (s1 + 1) % 6
            if (w >> np.uint64(3 * ((s2 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s2 = (s2 + 1) % 6
            if (w >> np.uint64(3 * ((s3 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s3 = (s3 + 1) % 6
            if (w >> np.uint64(3 * ((s4 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s4 = (s4 + 1) % 6
            if (w >> np.uint64(3 * ((s5 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s5 = (s5 + 1) % 6
            if hit < 0 and s0 == s1 == s2 == s3 == s4 == s5:
                hit = k
        hits[r] = hit
        finals[r] = s0


@numba.njit(cache=True)
def level1_batch(words2d, m, states2d, ok):
    """Per-row coalescence over the first m words, then a state-writing
    fold over the rest.  states2d[r, 0] is the state after the
    coalescence section; ok[r] says whether the row's copies merged."""
    for r in range(words2d.shape[0]):
        s0, s1, s2, s3, s4, s5 = np.int8(0), np.int8(1), np.int8(2), \
            np.int8(3), np.int8(4), np.int8(5)
        merged = False
        for k in range(m):
            w = words2d[r, k]
            if (w >> np.uint64(3 * ((s0 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                s0 = (s0 + 1) % 6
            if not merged:
                if (w >> np.uint64(3 * ((s1 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                    s1 = (s1 + 1) % 6
                if (w >> np.uint64(3 * ((s2 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                    s2 = (s2 + 1) % 6
                if (w >> np.uint64(3 * ((s3 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                    s3 = (s3 + 1) % 6
                if (w >> np.uint64(3 * ((s4 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                    s4 = (s4 + 1) % 6
                if (w >> np.uint64(3 * ((s5 + 1) % 6))) & np.uint64(7) < np.uint64(3):
                    s5 = (s5 + 1) % 6
                if s0 == s1 == s2 == s3 == s4 == s5:
                    merged = True
        ok[r] = merged
        state = s0
        states2d[r, 0] = state
        for k in range(m, words2d.shape[1]):
            w = words2d[r, k]
            if (w >> np.uint64(3 * ((state + 1) % 6))) & np.uint64(7) < np.uint64(3):
                state = (state + 1) % 6
            states2d[r, k - m + 1] = state


@numba.njit(cache=True, inline="always")
def _mix64(x):
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


@numba.njit(cache=True, inline="always")
def word_at(key, counter):
    z = counter * np.uint64(0x9E3779B97F4A7C15) + key
    return _mix64(_mix64(z) ^ key)


@numba.njit(cache=True, inline="always")
def col_code(w):
    """6-bit code of the driving vector encoded in word w."""
    code = np.uint8(0)
    for c in range(6):
        if (w >> np.uint64(3 * c)) & np.uint64(7) < np.uint64(3):
            code |= np.uint8(1) << np.uint8(c)
    return code


@numba.njit(cache=True)
def literal_two_level_scan(key1, key2, t_start, t_end, emit_from,
                           out_pos, out_val, assume_pattern_at_start=False):
    """Literal evaluation of the second-level symbols along anchors.

    Folds the level-1 chain from a regeneration at t_start (state 6
    there), walks positions t_start+1..t_end, and at every level-1
    symbol-1 position (anchor) feeds the level-2 driving word into a
    sliding identity-pattern detector and, once a pattern has been
    seen, the level-2 fold.  Level-2 symbols at anchors >= emit_from
    are written to out_pos/out_val.  Returns (count, pattern_seen,
    first_emission_valid): emissions are valid only if a level-2
    pattern occurred before the first emitted anchor.
    """
    s1 = np.int8(5)  # state 6, 0-based
    ring = np.zeros(6, dtype=np.uint8)
    ring_n = 0
    seen2 = assume_pattern_at_start
    s2 = np.int8(5) if assume_pattern_at_start else np.int8(0)
    prev2 = np.int8(4) if assume_pattern_at_start else np.int8(0)
    count = 0
    first_valid = True
    for t in range(t_start + 1, t_end + 1):
        w1 = word_at(key1, np.uint64(t))
        c = (s1 + 1) % 6
        if (w1 >> np.uint64(3 * c)) & np.uint64(7) < np.uint64(3):
            new1 = (s1 + 1) % 6
        else:
            new1 = s1
        is_anchor = (new1 != s1) and (new1 == 0)  # symbol 1 = state 1
        s1 = new1
        if not is_anchor:
            continue
        w2 = word_at(key2, np.uint64(t))
        # slide the pattern window
        for i in range(5):
            ring[i] = ring[i + 1]
        ring[5] = col_code(w2)
        ring_n += 1
        pattern = ring_n >= 6
        if pattern:
            for i in range(6):
                if ring[i] != np.uint8(1) << np.uint8(i):
                    pattern = False
                    break
        if seen2:
            prev2 = s2
            c2 = (s2 + 1) % 6
            if (w2 >> np.uint64(3 * c2)) & np.uint64(7) < np.uint64(3):
                s2 = (s2 + 1) % 6
        if pattern:
            # the pattern forces state 6 regardless of history
            if seen2 and s2 != np.int8(5):
                s2 = np.int8(5)
            if not seen2:
                s2 = np.int8(5)
                prev2 = np.int8(4)  # pattern passes through state 5
                seen2 = True
        if t >= emit_from:
            if not seen2:
                first_valid = False
            if count < out_pos.shape[0]:
                out_pos[count] = t
                out_val[count] = (s2 + 1) if s2 != prev2 else 0
                count += 1
    return count, seen2, first_valid
