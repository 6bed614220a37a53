"""Batched exact resolution of the renewal hierarchy over windows.

One "row" is one independent realization (its own seed) resolved over a
common integer window [a, b].  Construction:

* Level 1 is the dense spaced process of the cyclic chain, sampled by
  coupling from the past on the keyed driving stream, with the range
  extended left until it contains a symbol-1 position before `a` (so
  every window position has a real level-1 anchor).

* Level u >= 2 lives on its slot set: the symbol-1 positions of level
  u-1.  Along its slots the process is the same stationary spaced chain,
  independent of everything below, realized ordinally: one exact
  Bernoulli(3/8) move indicator per slot keyed by the slot's absolute
  position, one uniform cycle phase per level, and states accumulated
  cyclically.  Indicators keyed by position make the zero/nonzero
  pattern (hence every depth N_k) independent of the window; the phase
  is anchored at the level's first materialized slot, so growing a
  window to the right reproduces previous values bit-exactly, while
  moving the left edge re-anchors phases (depths are still preserved
  at real slots; see the package docs).

* Queries that fall left of a level's materialized slots all refer to
  the same physical slot (the most recent one before the range); it is
  represented by a per-level "virtual" slot whose move indicator and,
  when no real slot exists, state are drawn from dedicated keyed
  streams, and whose state otherwise extends the real chain backward
  by one exact reversed step.

Depth resolution climbs levels per position: delta_u is the level-u
value at the most recent level-u slot at or before the position; the
depth N is the last level with nonzero delta, the anchor is the slot
read at level N+1, and the digit string (delta_1 - 1, ..., delta_N - 1)
addresses one coordinate of the anchor's block innovation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, measures, rng
from .chain import BudgetExceededError

_SENTINEL = -(1 << 62)


@dataclass(frozen=True)
class SamplerConfig:
    """Budgets and guards for window resolution.

    Probability-zero branches (no coalescence, no level-1 anchor, an
    infinite climb) are guarded, never silently approximated: the
    guards raise `BudgetExceededError` with context.
    """

    seed: int
    left_pad: int = 128          # initial left extension for anchor chasing
    backoff: int = 128           # initial coalescence lookback
    max_left_extend: int = 1 << 22
    max_backoff: int = 1 << 22
    level_guard: int = 64        # climb abort; trip probability (3/8)**guard


# --------------------------------------------------------------------------
# level 1


@dataclass
class _Level1:
    row_start: np.ndarray     # int64, per row: first materialized position
    offsets: np.ndarray       # int64, per row: offset into `sym`
    sym: np.ndarray           # uint8 flat symbols, rows concatenated
    a1_rows: np.ndarray       # int32 row of each symbol-1 position
    a1_pos: np.ndarray        # int64 absolute symbol-1 positions

    def row_slice(self, r: int) -> np.ndarray:
        return self.sym[self.offsets[r]: self.offsets[r + 1]]

    def gather(self, rows: np.ndarray, pos: np.ndarray) -> np.ndarray:
        idx = self.offsets[rows] + (pos - self.row_start[rows])
        return self.sym[idx]


def _level1_row(seed: int, a: int, b: int, cfg: SamplerConfig):
    """Symbols on [a - chase, b] for one row, escalating budgets."""
    key = rng.derive(seed, rng.TAG_XI, 1)
    chase, back = cfg.left_pad, cfg.backoff
    while True:
        start = a - chase
        words = rng.words(key, np.arange(start - back, b + 1))
        states = np.empty(b - start + 2, dtype=np.int8)
        ok = np.empty(1, dtype=bool)
        _kernels.level1_batch(words[None, :], back, states[None, :], ok)
        if not ok[0]:
            if back >= cfg.max_backoff:
                raise BudgetExceededError(
                    "no coalescence within backoff", level=1, seed=seed,
                    backoff=back)
            back *= 2
            continue
        sym = np.where(states[1:] != states[:-1], states[1:] + 1, 0
                       ).astype(np.uint8)
        if not (sym[: a - start] == 1).any():
            if chase >= cfg.max_left_extend:
                raise BudgetExceededError(
                    "no level-1 anchor within extension budget", level=1,
                    seed=seed, extension=chase)
            chase *= 2
            continue
        return start, sym


def _level1(seeds: np.ndarray, a: int, b: int, cfg: SamplerConfig) -> _Level1:
    n_rows = len(seeds)
    chase, back = cfg.left_pad, cfg.backoff
    start = a - chase
    keys = rng.extend_arr(rng.extend_arr(
        rng.extend_arr(np.uint64(0), seeds), rng.TAG_XI), 1)
    counters = np.arange(start - back, b + 1)
    words = rng.words_multi(keys[:, None], counters[None, :])
    states = np.empty((n_rows, b - start + 2), dtype=np.int8)
    ok = np.empty(n_rows, dtype=bool)
    _kernels.level1_batch(words, back, states, ok)
    sym2d = np.where(states[:, 1:] != states[:, :-1], states[:, 1:] + 1, 0
                     ).astype(np.uint8)
    ok &= (sym2d[:, : a - start] == 1).any(axis=1)

    parts, starts = [], np.empty(n_rows, dtype=np.int64)
    for r in range(n_rows):
        if ok[r]:
            starts[r] = start
            parts.append(sym2d[r])
        else:  # rare: redo this row alone with escalating budgets
            starts[r], sym = _level1_row(int(seeds[r]), a, b, cfg)
            parts.append(sym)
    lengths = np.array([len(p) for p in parts], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lengths)])
    flat = parts[0] if n_rows == 1 else np.concatenate(parts)
    ones = flat == 1
    idx = np.flatnonzero(ones)
    rows = np.searchsorted(offsets, idx, side="right").astype(np.int32) - 1
    pos = starts[rows] + (idx - offsets[rows])
    return _Level1(starts, offsets, flat, rows, pos)


# --------------------------------------------------------------------------
# ordinal levels


@dataclass
class _Level:
    u: int
    rows: np.ndarray          # int32, slot rows (sorted, rows grouped)
    pos: np.ndarray           # int64, slot absolute positions
    val: np.ndarray           # uint8, level-u symbol at each slot
    v1_val: np.ndarray        # uint8 per row: the virtual pre-range slot
    marked: np.ndarray = field(default=None)  # bool mask, val == 1

    def __post_init__(self):
        if self.marked is None:
            self.marked = self.val == 1


def _build_level(u: int, seeds: np.ndarray, rows: np.ndarray,
                 pos: np.ndarray) -> _Level:
    """Assign level-u symbols along its slots for every row at once."""
    n_rows = len(seeds)
    base = rng.extend_arr(np.uint64(0), seeds)
    inc_keys = rng.extend_arr(rng.extend_arr(base, rng.TAG_INC), u)
    phase_keys = rng.extend_arr(rng.extend_arr(base, rng.TAG_PHASE), u)
    pre_keys = rng.extend_arr(rng.extend_arr(base, rng.TAG_PRE), u)

    inc = rng.bernoulli_words(rng.words_multi(inc_keys[rows], pos))
    # per-row segment bounds (rows are grouped in ascending order)
    seg_start = np.searchsorted(rows, np.arange(n_rows))
    seg_end = np.searchsorted(rows, np.arange(n_rows), side="right")
    has = seg_start < seg_end

    # cycle phase: state at the first materialized slot, or at the
    # virtual slot when the row has no real slots at this level
    ident_kind = np.where(has, 0, 1)
    first_pos = np.zeros(n_rows, dtype=np.int64)
    if len(pos):
        first_pos[has] = pos[seg_start[has]]
    ident = np.where(has, first_pos, 1)
    pk = rng.extend_arr(rng.extend_arr(phase_keys, ident_kind), ident)
    phase = rng.uniform_indices(pk, 6)

    cs = np.cumsum(inc.astype(np.int64)) if len(inc) else np.empty(0, np.int64)
    if len(inc):
        first_cs = cs[seg_start[rows]]
        states = (phase[rows] + cs - first_cs) % 6
        val = np.where(inc, states + 1, 0).astype(np.uint8)
    else:
        val = np.empty(0, dtype=np.uint8)

    # virtual pre-range slot: one reversed step behind the first real
    # state, or the phase itself when there are no real slots
    inc_first = np.zeros(n_rows, dtype=np.int64)
    if len(inc):
        inc_first[has] = inc[seg_start[has]].astype(np.int64)
    u_v1 = np.where(has, (phase - inc_first) % 6, phase)
    inc_v1 = rng.bernoulli_words(rng.words_multi(pre_keys, np.ones(n_rows)))
    v1_val = np.where(inc_v1, u_v1 + 1, 0).astype(np.uint8)
    return _Level(u, rows, pos, val, v1_val)


# --------------------------------------------------------------------------
# climbing


def _climb(level1: _Level1, levels: dict, seeds: np.ndarray, a: int, b: int,
           cfg: SamplerConfig, grid_rows: np.ndarray, grid_pos: np.ndarray):
    """Per-position depth, anchor, and digit reads across all rows."""
    n_rows, L = len(seeds), b - a + 1
    delta1 = level1.gather(grid_rows, grid_pos)
    n_flat = np.zeros(n_rows * L, dtype=np.int8)
    anchor_flat = np.empty(n_rows * L, dtype=np.int64)
    anchor_virtual = np.zeros(n_rows * L, dtype=bool)
    anchor_flat[:] = grid_pos  # depth-0 positions anchor at themselves

    alive = np.flatnonzero(delta1 != 0)
    reads = [(alive, delta1[alive])]  # reads[0] -> level-1 values
    n_flat[alive] = 1

    gmin = int(level1.row_start.min())
    stride = b - gmin + 2
    u = 2
    while len(alive):
        if u > cfg.level_guard:
            raise BudgetExceededError(
                "climb exceeded the level guard; this branch has "
                f"probability (3/8)**{cfg.level_guard} per position",
                level=u, positions=len(alive))
        if u not in levels:
            # no real slots anywhere at this level: virtual-only values
            levels[u] = _build_level(u, seeds, np.empty(0, dtype=np.int32),
                                     np.empty(0, dtype=np.int64))
        lev = levels[u]
        q_rows = grid_rows[alive]
        if len(lev.pos):
            comp_slots = lev.rows.astype(np.int64) * stride + (lev.pos - gmin)
            q = q_rows.astype(np.int64) * stride + (grid_pos[alive] - gmin)
            idx = np.searchsorted(comp_slots, q, side="right") - 1
            real = idx >= 0
            real[real] = lev.rows[idx[real]] == q_rows[real]
            delta = np.where(real, lev.val[idx.clip(0)], lev.v1_val[q_rows])
            slot_pos = lev.pos[idx.clip(0)]
        else:
            real = np.zeros(len(alive), dtype=bool)
            delta = lev.v1_val[q_rows]
            slot_pos = np.full(len(alive), _SENTINEL, dtype=np.int64)
        # anchor bookkeeping: the slot just read is the level-(u-1)
        # block anchor for positions whose climb stops here
        dead = delta == 0
        dying = alive[dead]
        anchor_flat[dying] = np.where(real[dead], slot_pos[dead], _SENTINEL)
        anchor_virtual[dying] = ~real[dead]
        keep = ~dead
        alive = alive[keep]
        reads.append((alive, delta[keep]))
        n_flat[alive] = u
        u += 1
    return n_flat, anchor_flat, anchor_virtual, reads


# --------------------------------------------------------------------------
# block innovations and the sign path


def _assemble_x(seeds, a, b, level1: _Level1, n_flat, anchor_flat,
                anchor_virtual, reads, grid_rows, grid_pos):
    n_rows, L = len(seeds), b - a + 1
    x = np.empty(n_rows * L, dtype=np.int8)
    base = rng.extend_arr(np.uint64(0), seeds)

    # depth 0: fresh fair signs keyed by position
    zero = np.flatnonzero(n_flat == 0)
    x0_keys = rng.extend_arr(base, rng.TAG_X0)
    w = rng.words_multi(x0_keys[grid_rows[zero]], grid_pos[zero])
    x[zero] = np.where((w & np.uint64(1)).astype(bool), 1, -1)

    max_n = int(n_flat.max()) if len(n_flat) else 0
    for depth in range(1, max_n + 1):
        cohort = np.flatnonzero(n_flat == depth)
        if not len(cohort):
            continue
        rows_c = grid_rows[cohort]
        blk = rng.extend_arr(rng.extend_arr(base[rows_c], rng.TAG_BLOCK),
                             depth)
        virt = anchor_virtual[cohort]
        kind = np.where(virt, 1, 0)
        ident = np.where(virt, 1, anchor_flat[cohort])
        node = rng.extend_arr(rng.extend_arr(blk, kind), ident)
        sign = np.ones(len(cohort), dtype=np.int8)
        for u in range(depth, 0, -1):
            alive_u, delta_u = reads[u - 1]
            rank = np.searchsorted(alive_u, cohort)
            digit = delta_u[rank].astype(np.int64) - 1
            constraint = "sum0" if u == depth else "sum4"
            atoms = measures.KEY_SET_ARRAYS[constraint]
            v_idx = rng.uniform_indices(
                rng.extend_arr(node, np.int64(101)), len(atoms))
            sign *= atoms[v_idx, digit]
            node = rng.extend_arr(node, digit)
        x[cohort] = sign
    return x


# --------------------------------------------------------------------------
# entry point


class BatchResolution:
    """Resolved hierarchy over one window for many independent rows."""

    def __init__(self, seeds, window, cfg, need_x=True, need_depth=True,
                 max_level=None):
        self.seeds = np.asarray(seeds, dtype=np.int64)
        self.window = (int(window[0]), int(window[1]))
        a, b = self.window
        if a > b:
            raise ValueError("empty window")
        self.cfg = cfg
        self.n_rows = len(self.seeds)
        self.length = b - a + 1
        self.level1 = _level1(self.seeds, a, b, cfg)
        self.levels: dict = {}
        rows, pos = self.level1.a1_rows, self.level1.a1_pos
        u = 2
        while len(rows) and (max_level is None or u <= max_level):
            lev = _build_level(u, self.seeds, rows, pos)
            self.levels[u] = lev
            rows, pos = lev.rows[lev.marked], lev.pos[lev.marked]
            u += 1
        self.n = self.anchor = self.anchor_is_virtual = self.x = None
        self.reads = None
        if need_depth:
            if max_level is not None:
                raise ValueError("depth resolution needs all levels")
            grid_rows = np.repeat(np.arange(self.n_rows, dtype=np.int32),
                                  self.length)
            grid_pos = np.tile(np.arange(a, b + 1), self.n_rows)
            out = _climb(self.level1, self.levels, self.seeds, a, b, cfg,
                         grid_rows, grid_pos)
            self.n, self.anchor, self.anchor_is_virtual, self.reads = out
            if need_x:
                self.x = _assemble_x(self.seeds, a, b, self.level1, self.n,
                                     self.anchor, self.anchor_is_virtual,
                                     self.reads, grid_rows, grid_pos)

    # -- grid helpers ------------------------------------------------------

    def grid(self, flat: np.ndarray) -> np.ndarray:
        return flat.reshape(self.n_rows, self.length)

    @property
    def n2d(self):
        return self.grid(self.n)

    @property
    def x2d(self):
        return self.grid(self.x)

    def w1_row(self, r: int) -> np.ndarray:
        """Level-1 symbols of row r on [a, b]."""
        a, b = self.window
        s = self.level1.row_slice(r)
        off = a - int(self.level1.row_start[r])
        return s[off: off + self.length]

    def level_slots(self, u: int, r: int = 0):
        """(positions, values) of level-u slots of row r, full range."""
        if u == 1:
            s = self.level1.row_slice(r)
            start = int(self.level1.row_start[r])
            return np.arange(start, start + len(s)), s
        lev = self.levels.get(u)
        if lev is None:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.uint8)
        m = lev.rows == r
        return lev.pos[m], lev.val[m]

    def digits_of(self, flat_index: int) -> list:
        """delta digits (level value - 1), levels 1..N, for one position."""
        depth = int(self.n[flat_index])
        out = []
        for u in range(1, depth + 1):
            alive_u, delta_u = self.reads[u - 1]
            rank = int(np.searchsorted(alive_u, flat_index))
            out.append(int(delta_u[rank]) - 1)
        return out

    def j_of(self, flat_index: int) -> int:
        """Block coordinate rank: sum of 6**(u-1) * digit_u."""
        return sum(d * 6 ** u for u, d in enumerate(self.digits_of(flat_index)))

    def j_flat(self) -> np.ndarray:
        """Vectorized ranks.  int64 holds depths up to 24; positions
        deeper than that (probability below 1e-10 apiece) are marked
        with -1 and `j_of` gives their exact value as a Python int."""
        out = np.zeros(len(self.n), dtype=np.int64)
        max_n = int(self.n.max()) if len(self.n) else 0
        for u in range(1, min(max_n, 24) + 1):
            alive_u, delta_u = self.reads[u - 1]
            out[alive_u] += (delta_u.astype(np.int64) - 1) * 6 ** (u - 1)
        if max_n > 24:  # pragma: no cover - astronomically rare
            out[self.n > 24] = -1
        return out
