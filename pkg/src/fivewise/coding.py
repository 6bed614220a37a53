"""Deterministic coding layer.

A six-state cyclic automaton reads a stream of {0,1}^6 vectors.  In
state j in 1..5 it inspects coordinate j+1 and either holds or advances
to j+1; in state 6 it inspects coordinate 1 and either holds or wraps
to 1.  Six consecutive input vectors whose columns stack to the 6x6
identity matrix force every state to 6 ("identity pattern"), so the
automaton regenerates there: everything older is forgotten.

`g_basic_anchored` evaluates the automaton state given a history that
is explicitly anchored at the end of its most recent identity pattern;
`g_spaced_anchored` gates that state by whether it just changed,
producing symbols in {0,...,6} whose nonzero values cycle 1..6 in order
(the "successor rule" checked by `check_condition_s`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Bit6 = tuple  # six values in {0,1}; entry at index i is coordinate i+1

IDENTITY_COLUMNS: tuple = tuple(
    tuple(1 if r == c else 0 for r in range(6)) for c in range(6)
)


class InsufficientMarksError(ValueError):
    """Raised when a mark sequence holds fewer ones than requested."""


def chain_step(state: int, beta: Sequence[int]) -> int:
    """One automaton step from `state` (1..6) on input vector `beta`."""
    if state == 6:
        return 1 if beta[0] else 6
    return state + 1 if beta[state] else state


def fold_states(start: int, betas: Iterable[Sequence[int]]) -> int:
    state = start
    for b in betas:
        state = chain_step(state, b)
    return state


def is_identity_pattern(betas: Sequence[Sequence[int]]) -> bool:
    """True iff the six vectors stack column-wise to the identity matrix."""
    if len(betas) != 6:
        return False
    return all(tuple(b) == col for b, col in zip(betas, IDENTITY_COLUMNS))


@dataclass(frozen=True)
class RegenerationAnchoredHistory:
    """A past whose most recent identity pattern ends `anchor_offset`
    steps ago; `suffix` holds the vectors after it, most recent last."""

    anchor_offset: int
    suffix: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.anchor_offset != len(self.suffix):
            raise ValueError("anchor_offset must equal len(suffix)")

    def extended(self, beta: Sequence[int]) -> "RegenerationAnchoredHistory":
        return RegenerationAnchoredHistory(
            self.anchor_offset + 1, self.suffix + (tuple(beta),)
        )


def g_basic_anchored(history: RegenerationAnchoredHistory) -> int:
    """Automaton state after reading the suffix from the regeneration.

    The pattern leaves the automaton in state 6; folding from there is
    equivalent to locating the greatest later pattern occurrence first,
    because any pattern inside the suffix re-forces state 6.
    """
    return fold_states(6, history.suffix)


def g_basic_literal(history: RegenerationAnchoredHistory) -> int:
    """Reference evaluation: scan for the greatest pattern end inside
    the suffix, then fold from just after it.  Used as a test oracle."""
    suffix = history.suffix
    last_end = -1
    for end in range(5, len(suffix)):
        if is_identity_pattern(suffix[end - 5 : end + 1]):
            last_end = end
    return fold_states(6, suffix[last_end + 1 :])


def g_spaced_anchored(history: RegenerationAnchoredHistory) -> int:
    """State if it differs from the previous step's state, else 0."""
    if not history.suffix:
        raise ValueError("g_spaced needs at least one step after the anchor")
    prev = RegenerationAnchoredHistory(
        history.anchor_offset - 1, history.suffix[:-1]
    )
    cur = g_basic_anchored(history)
    return cur if cur != g_basic_anchored(prev) else 0


def spaced_trace(history: RegenerationAnchoredHistory) -> list:
    """Spaced symbols at every step of the suffix, oldest first."""
    out = []
    state = 6
    for b in history.suffix:
        nxt = chain_step(state, b)
        out.append(nxt if nxt != state else 0)
        state = nxt
    return out


def psi(j: int, marks: Sequence[int]) -> int:
    """Index of the (j+1)-th one in `marks` (index 0 = most recent)."""
    seen = 0
    for k, m in enumerate(marks):
        if m:
            if seen == j:
                return k
            seen += 1
    raise InsufficientMarksError(
        f"needed {j + 1} ones, found {seen}; extend the window"
    )


@dataclass(frozen=True)
class ConditionSReport:
    ok: bool
    first_violation: int | None = None


def check_condition_s(window: Sequence[int]) -> ConditionSReport:
    """Check the successor rule on a finite symbol window.

    Between consecutive nonzero entries, value i in 1..5 must be
    followed by i+1 and value 6 by 1; zero runs of any length are
    allowed in between.  Values outside 0..6 fail immediately.
    """
    prev = None
    for pos, w in enumerate(window):
        if not 0 <= w <= 6:
            return ConditionSReport(False, pos)
        if w == 0:
            continue
        if prev is not None:
            want = 1 if prev == 6 else prev + 1
            if w != want:
                return ConditionSReport(False, pos)
        prev = w
    return ConditionSReport(True)


def trace_rows(history: RegenerationAnchoredHistory):
    """(step, basic, spaced) rows for debugging dumps."""
    rows = []
    state = 6
    for k, b in enumerate(history.suffix):
        nxt = chain_step(state, b)
        rows.append((k, nxt, nxt if nxt != state else 0))
        state = nxt
    return rows


def trace_csv(history: RegenerationAnchoredHistory) -> str:
    lines = ["k,basic,spaced"]
    lines += [f"{k},{u},{w}" for k, u, w in trace_rows(history)]
    return "\n".join(lines) + "\n"
