"""The sign path and its block structure.

Positions of depth 0 carry fresh fair signs.  Positions of depth m >= 1
fall into maximal "brackets" between consecutive level-m 1-positions;
the depth-(>= m) positions of one bracket form a block of exactly 6**m
members whose signs spell out one sum-zero block innovation, read in
order.  Blocks therefore sum to zero exactly, carry product -1 at depth
1 and +1 at deeper levels, and tile the integers together with the
depth-0 singletons - the deterministic invariants audited here with
zero tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import measures, rng
from .engine import SamplerConfig
from .hierarchy import HierarchyWindow, build


class IncompleteBlockError(ValueError):
    """A queried block's bracket straddles the resolved range."""


@dataclass(frozen=True)
class Block:
    level: int
    members: tuple           # ascending positions
    depth_exact: bool        # True: every member has depth == level

    @property
    def anchor(self) -> int:
        return self.members[0]

    def __len__(self):
        return len(self.members)


@dataclass
class BlockDecomposition:
    """Complete blocks of a resolved window, by level."""

    window: tuple
    depth_blocks: dict       # m >= 1 -> [Block] with depth exactly m
    span_blocks: dict        # m >= 1 -> [Block] with depth >= m
    zero_positions: np.ndarray  # depth-0 singleton positions
    incomplete: dict         # m -> number of straddling brackets


@dataclass(frozen=True)
class PathSample:
    """A resolved sign path with per-position provenance."""

    window: tuple
    signs: np.ndarray
    depths: np.ndarray
    anchors: np.ndarray
    anchor_is_virtual: np.ndarray
    ranks: np.ndarray
    config: SamplerConfig
    hierarchy: HierarchyWindow = field(repr=False)

    def to_csv(self) -> str:
        a, _ = self.window
        lines = ["k,x,n,anchor,j"]
        for i, k in enumerate(range(a, a + len(self.signs))):
            anchor = "" if self.anchor_is_virtual[i] else str(self.anchors[i])
            lines.append(f"{k},{self.signs[i]},{self.depths[i]},"
                         f"{anchor},{self.ranks[i]}")
        return "\n".join(lines) + "\n"


def sample_path(window, config: SamplerConfig) -> PathSample:
    hw = build(window, config)
    return PathSample(hw.window, hw.signs, hw.depths, hw.anchors,
                      hw.anchor_is_virtual, hw.ranks, config, hw)


def _ones_positions(hw: HierarchyWindow, m: int) -> np.ndarray:
    pos, val = hw.level_slots(m)
    return pos[val == 1]


def decompose_blocks(hw: HierarchyWindow) -> BlockDecomposition:
    """Every complete block whose bracket lies inside the window."""
    a, b = hw.window
    depths = hw.depths
    depth_blocks: dict = {}
    span_blocks: dict = {}
    incomplete: dict = {}
    m = 1
    while True:
        ones = _ones_positions(hw, m)
        ones_in = ones[(ones >= a) & (ones <= b)]
        if len(ones) == 0:
            break
        d_list, s_list = [], []
        for j, l in zip(ones_in[:-1], ones_in[1:]):
            rel = np.arange(j - a, l - a)
            members = tuple((rel[depths[rel] >= m] + a).tolist())
            exact = bool((depths[rel][depths[rel] >= m] == m).all())
            blk = Block(m, members, exact)
            s_list.append(blk)
            if exact:
                d_list.append(blk)
        # the brackets reaching past either window edge are excluded
        incomplete[m] = 2 if len(ones_in) else 1
        depth_blocks[m] = d_list
        span_blocks[m] = s_list
        if len(ones_in) < 2:
            break
        m += 1
    zero = np.flatnonzero(depths == 0) + a
    return BlockDecomposition((a, b), depth_blocks, span_blocks, zero,
                              incomplete)


def block_of(hw: HierarchyWindow, k: int, m: int) -> Block:
    """The level-m block containing position k (depth of k must be >= m
    for m >= 1); raises IncompleteBlockError at the window edges."""
    a, b = hw.window
    depths = hw.depths
    if m == 0:
        if depths[k - a] != 0:
            raise ValueError("depth-0 block requested at a deeper position")
        return Block(0, (k,), True)
    ones = _ones_positions(hw, m)
    i = np.searchsorted(ones, k, side="right") - 1
    if i < 0 or i + 1 >= len(ones):
        raise IncompleteBlockError(
            f"level-{m} bracket of position {k} straddles the window")
    j, l = int(ones[i]), int(ones[i + 1])
    if j < a or l > b:
        raise IncompleteBlockError(
            f"level-{m} bracket of position {k} leaves the window")
    rel = np.arange(j - a, l - a)
    members = tuple((rel[depths[rel] >= m] + a).tolist())
    exact = bool((depths[rel][depths[rel] >= m] == m).all())
    return Block(m, members, exact)


def covering_of(s_positions, n: int, hw: HierarchyWindow):
    """The unique covering of `s_positions` by depth-exact blocks of
    levels 0..n-1 and span blocks of level n."""
    s_sorted = sorted(set(int(k) for k in s_positions))
    if not s_sorted:
        raise ValueError("empty index set")
    a, _ = hw.window
    depths = hw.depths
    out = {}
    for k in s_sorted:
        d = int(depths[k - a])
        blk = block_of(hw, k, min(d, n))
        out[(blk.level, blk.anchor)] = blk
    covering = sorted(out.values(), key=lambda blk: blk.anchor)
    _check_covering(covering, s_sorted, n)
    return covering


def _check_covering(covering, s_sorted, n: int):
    sizes = {len(b) for b in covering}
    if not sizes <= {6**m for m in range(n + 1)}:
        raise AssertionError("covering member of unexpected cardinality")
    allpos: list = []
    for blk in covering:
        allpos.extend(blk.members)
        if not set(blk.members) & set(s_sorted):
            raise AssertionError("covering member misses the index set")
    if len(set(allpos)) != len(allpos):
        raise AssertionError("covering members overlap")
    if not set(s_sorted) <= set(allpos):
        raise AssertionError("covering does not cover the index set")


@dataclass
class AuditReport:
    checked_blocks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, blocks=None) -> str:
        payload = {"checked_blocks": self.checked_blocks,
                   "pass": self.ok, "failures": self.failures}
        if blocks is not None:
            payload["blocks"] = blocks
        return json.dumps(payload, indent=1)


def audit_block_contents(path: PathSample,
                         decomposition: BlockDecomposition) -> AuditReport:
    """Zero-tolerance checks of every complete depth-exact block: size,
    rank ordering, exact zero sum, product parity, anchor consistency,
    and byte equality with the keyed block innovation."""
    a, _ = path.window
    rep = AuditReport()
    rows = []
    for m, blocks in decomposition.depth_blocks.items():
        for blk in blocks:
            mem = np.array(blk.members)
            vals = path.signs[mem - a].astype(np.int64)
            issues = []
            if len(mem) != 6**m:
                issues.append(f"cardinality {len(mem)} != 6^{m}")
            if vals.sum() != 0:
                issues.append(f"sum {int(vals.sum())} != 0")
            parity = -1 if m == 1 else 1
            if np.prod(vals) != parity:
                issues.append(f"product {int(np.prod(vals))} != {parity}")
            ranks = path.ranks[mem - a]
            if not np.array_equal(ranks, np.arange(len(mem))):
                issues.append("rank ordering broken")
            anchors = path.anchors[mem - a]
            if not (anchors == blk.anchor).all():
                issues.append("member anchors disagree")
            key = rng.derive(path.config.seed, rng.TAG_BLOCK, m, 0,
                             blk.anchor)
            vec = measures.sample_level(m, "cen", key)
            if not np.array_equal(vec, path.signs[mem - a]):
                issues.append("content differs from the keyed innovation")
            rep.checked_blocks += 1
            rows.append({"m": m, "min": int(mem[0]), "max": int(mem[-1]),
                         "sum": int(vals.sum()),
                         "product": int(np.prod(vals)),
                         "pass": not issues})
            if issues:
                rep.failures.append(
                    {"m": m, "anchor": int(blk.anchor), "issues": issues})
    rep.block_rows = rows
    return rep


def audit_window(path: PathSample) -> AuditReport:
    """Every deterministic path invariant, zero tolerance: successor
    rule per level, per-position level shapes, nesting counts, block
    structure (cardinality, six-way split, rank order, sums, parity,
    content), partitioning, and rank-range coherence."""
    from .coding import check_condition_s

    hw = path.hierarchy
    a, b = hw.window
    rep = AuditReport()

    def fail(what, **ctx):
        rep.failures.append({"check": what, **ctx})

    # successor rule along every materialized level
    u = 1
    while True:
        pos, val = hw.level_slots(u)
        if len(pos) == 0:
            break
        r = check_condition_s(val.tolist())
        if not r.ok:
            fail("condition-s", level=u, at=int(pos[r.first_violation]))
        u += 1
    top = u

    # per-position level shapes: ones, then at most one value >= 2, then 0
    shape_vals = {}
    for u in range(2, top):
        pos, val = hw.level_slots(u)
        shape_vals[u] = dict(zip(pos.tolist(), val.tolist()))
    w1 = hw.w1()
    for k in range(a, min(b + 1, a + 20000)):
        seq = [int(w1[k - a])] + [shape_vals[u].get(k, 0)
                                  for u in range(2, top)]
        run = 0
        while run < len(seq) and seq[run] == 1:
            run += 1
        tail = seq[run:]
        if tail and tail[0] != 0:
            tail = tail[1:]
        if any(v != 0 for v in tail):
            fail("level-shape", position=k, sequence=seq)
            break

    # nesting bound: ones at level u+1 vs ones at level u on subwindows
    for lo, hi in [(a, b), (a, (a + b) // 2), ((a + b) // 2, b)]:
        prev = None
        for u in range(1, top):
            pos, val = hw.level_slots(u)
            ones = pos[(val == 1) & (pos >= lo) & (pos <= hi)]
            if prev is not None and len(ones) > 1 + len(prev) / 6:
                fail("nesting-bound", level=u, window=(lo, hi),
                     upper=len(ones), lower=len(prev))
            prev = ones

    # ones imply depth (7.2(A)); ranks within range (7.2(B))
    depths = hw.depths
    ranks = hw.ranks
    for u in range(1, top):
        pos, val = hw.level_slots(u)
        ones = pos[(val == 1) & (pos >= a) & (pos <= b)]
        if len(ones) and not (depths[ones - a] >= u).all():
            fail("one-implies-depth", level=u)
    limits = 6 ** depths.astype(np.int64).clip(0, 24)
    if ((ranks < 0) | (ranks >= limits)).any():
        fail("rank-range")

    # block structure
    dec = decompose_blocks(hw)
    content = audit_block_contents(path, dec)
    rep.checked_blocks += content.checked_blocks
    rep.failures.extend(content.failures)

    # six-way split of complete span blocks (level >= 2)
    for m in sorted(dec.span_blocks):
        if m < 2 or m not in dec.span_blocks or (m - 1) not in dec.span_blocks:
            continue
        lower = {blk.anchor: blk for blk in dec.span_blocks[m - 1]}
        for blk in dec.span_blocks[m]:
            if len(blk.members) != 6**m:
                fail("span-cardinality", level=m, anchor=blk.anchor)
                continue
            parts, ok = [], True
            cursor = 0
            while cursor < len(blk.members):
                sub = lower.get(blk.members[cursor])
                if sub is None:
                    ok = False
                    break
                if blk.members[cursor:cursor + len(sub)] != sub.members:
                    ok = False
                    break
                parts.append(sub)
                cursor += len(sub)
            if not ok or len(parts) != 6:
                fail("six-way-split", level=m, anchor=blk.anchor)
            rep.checked_blocks += 1

    # depth-exact blocks partition the depth-m positions strictly inside
    for m, blocks in dec.depth_blocks.items():
        seen: set = set()
        for blk in blocks:
            overlap = seen & set(blk.members)
            if overlap:
                fail("block-overlap", level=m)
            seen |= set(blk.members)
    return rep
