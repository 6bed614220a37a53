"""Public surface of the level hierarchy: windowed builds, per-position
depth resolution, the literal cross-check sampler, and the two-ones
window probability estimate.

See `engine` for the construction itself.  A build resolves one window
completely and is immutable afterwards; re-building with the same seed
and the same left edge reproduces values bit-exactly for any right
edge.  Re-anchoring the left edge preserves level-1 values and every
depth decided at materialized slots (move indicators are keyed by
absolute position), but re-draws the cycle phases of levels >= 2, so
symbol values at those levels are exact in law yet not bit-stable
under left extension; campaigns therefore treat windows as the unit of
reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .chain import BudgetExceededError, find_pattern_end_before
from .engine import BatchResolution, SamplerConfig


@dataclass(frozen=True)
class PositionRecord:
    """Resolution of one position: depth, block anchor, coordinate rank.

    `anchor` is the absolute position of the most recent depth-level
    1-slot (None when that slot lies left of the materialized range;
    the block innovation is still well defined and consistently keyed).
    """

    position: int
    depth: int
    anchor: int | None
    rank: int


class HierarchyWindow:
    """One fully resolved window of one realization."""

    def __init__(self, window, config: SamplerConfig, need_x: bool = True):
        self.config = config
        self.window = (int(window[0]), int(window[1]))
        self._res = BatchResolution(
            np.array([config.seed]), self.window, config, need_x=need_x)

    @property
    def depths(self) -> np.ndarray:
        return self._res.n2d[0]

    @property
    def signs(self) -> np.ndarray:
        return self._res.x2d[0]

    @property
    def anchors(self) -> np.ndarray:
        """Anchor positions; pre-range anchors carry a large negative
        sentinel (check `anchor_is_virtual`)."""
        return self._res.grid(self._res.anchor)[0]

    @property
    def anchor_is_virtual(self) -> np.ndarray:
        return self._res.grid(self._res.anchor_is_virtual)[0]

    @property
    def ranks(self) -> np.ndarray:
        return self._res.grid(self._res.j_flat())[0]

    def level_slots(self, u: int):
        """(positions, symbols) of level-u slots over the resolved range."""
        return self._res.level_slots(u, 0)

    def w1(self) -> np.ndarray:
        """Dense level-1 symbols on the window itself."""
        return self._res.w1_row(0)

    def value_at(self, u: int, k: int) -> int:
        """Level-u symbol at position k (0 off the level's slot set)."""
        a, b = self.window
        if not a <= k <= b:
            raise ValueError("position outside the window")
        if u == 1:
            return int(self.w1()[k - a])
        pos, val = self.level_slots(u)
        i = np.searchsorted(pos, k)
        if i < len(pos) and pos[i] == k:
            return int(val[i])
        return 0

    def delta(self, u: int, k: int) -> int:
        """Level-u value at the most recent level-u slot at or before k."""
        a, b = self.window
        if not a <= k <= b:
            raise ValueError("position outside the window")
        if u == 1:
            return int(self.w1()[k - a])
        pos, val = self.level_slots(u)
        i = np.searchsorted(pos, k, side="right") - 1
        if i >= 0:
            return int(val[i])
        lev = self._res.levels.get(u)
        if lev is None:
            raise ValueError(f"level {u} was not materialized")
        return int(lev.v1_val[0])

    def psi0(self, u: int, k: int) -> int | None:
        """Distance back to the most recent level-u 1-position, or None
        when it lies left of the materialized range."""
        pos, val = self.level_slots(u)
        ones = pos[val == 1]
        i = np.searchsorted(ones, k, side="right") - 1
        return int(k - ones[i]) if i >= 0 else None

    def resolve_position(self, k: int) -> PositionRecord:
        a, b = self.window
        if not a <= k <= b:
            raise ValueError("position outside the window")
        flat = k - a
        depth = int(self._res.n[flat])
        anchor = int(self._res.anchor[flat])
        virt = bool(self._res.anchor_is_virtual[flat])
        return PositionRecord(k, depth, None if virt else anchor,
                              self._res.j_of(flat))

    def to_csv(self, depth_columns: int = 4) -> str:
        a, b = self.window
        cols = [f"w{u}" for u in range(1, depth_columns + 1)]
        lines = ["k," + ",".join(cols) + ",n,anchor,j"]
        w = {u: dict(zip(*map(lambda x: x.tolist(),
                              self.level_slots(u))))
             for u in range(2, depth_columns + 1)}
        w1 = self.w1()
        ranks = self.ranks
        for k in range(a, b + 1):
            vals = [int(w1[k - a])] + [w[u].get(k, 0)
                                       for u in range(2, depth_columns + 1)]
            anchor = self.anchors[k - a]
            anchor_txt = "" if self.anchor_is_virtual[k - a] else str(anchor)
            lines.append(
                f"{k},{','.join(map(str, vals))},{self.depths[k - a]},"
                f"{anchor_txt},{ranks[k - a]}")
        return "\n".join(lines) + "\n"


def build(window, config: SamplerConfig) -> HierarchyWindow:
    """Resolve a window: every position's depth, anchor, rank, and sign."""
    return HierarchyWindow(window, config)


def double_one_probability(n: int, replicates: int, seed: int,
                           config: SamplerConfig | None = None):
    """Estimate the chance of seeing two level-n 1-positions within a
    window of 6 * 16**n positions.  Returns (estimate, standard error)."""
    cfg = config or SamplerConfig(seed=seed)
    span = 6 * 16**n
    seeds = rng.extend_arr(
        rng.extend_arr(np.uint64(0), np.int64(seed)),
        np.arange(replicates)).view(np.int64)
    hits = np.zeros(replicates, dtype=bool)
    chunk = max(1, (1 << 22) // span)
    for lo in range(0, replicates, chunk):
        batch = seeds[lo: lo + chunk]
        res = BatchResolution(batch, (1, span), cfg, need_x=False,
                              need_depth=False)
        if n == 1:
            rows, pos = res.level1.a1_rows, res.level1.a1_pos
        else:
            lev = res.levels.get(n)
            if lev is None:
                rows = np.empty(0, dtype=np.int32)
                pos = np.empty(0, dtype=np.int64)
            else:
                rows, pos = lev.rows[lev.marked], lev.pos[lev.marked]
        counts = np.bincount(rows[pos >= 1], minlength=len(batch))
        hits[lo: lo + chunk] = counts >= 2
    est = float(hits.mean())
    se = float(hits.std(ddof=1) / np.sqrt(replicates))
    return est, se


def literal_build(window, config: SamplerConfig, scan_budget: int = 60 << 30,
                  lookback: int = 16 << 30):
    """Literal two-level evaluation for cross-checking `build`.

    Level 1 folds from an identity pattern in the level-1 driving
    stream; level 2 is evaluated along anchors from an identity
    pattern in the level-2 words read at anchors (expected roughly
    7.7e9 positions back, so this is minutes of work and budgeted).
    Returns (level-1 symbols on the window, anchor positions,
    level-2 symbols at those anchors).
    """
    a, b = window
    seed = config.seed
    key1 = rng.derive(seed, rng.TAG_XI, 1)
    # the literal mode has its own full driving array for level 2, so it
    # is an independent realization of the same law even at equal seeds
    key2 = rng.derive(seed, rng.TAG_XI, 2)
    # level 1: literal fold from a pattern
    from .chain import literal_level1_sampler

    path = literal_level1_sampler((a, b), seed, scan_budget=scan_budget)
    w1 = path.spaced
    anchors = a + np.flatnonzero(w1 == 1)

    span = lookback  # the default is ~2x the expected requirement
    while True:
        t0 = a - span
        t_star = find_pattern_end_before(seed, 1, t0, scan_budget)
        cap = (b - a) // 4 + 1024  # emissions happen only inside the window
        out_pos = np.empty(cap, dtype=np.int64)
        out_val = np.empty(cap, dtype=np.uint8)
        cnt, seen, valid = _kernels.literal_two_level_scan(
            np.uint64(key1), np.uint64(key2), t_star, b, a, out_pos, out_val)
        if seen and valid:
            return w1, out_pos[:cnt], out_val[:cnt]
        span *= 2
        if span > 16 * scan_budget:
            raise BudgetExceededError(
                "no second-level identity pattern within budget",
                level=2, span=span)
