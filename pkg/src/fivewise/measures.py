"""Exact parity measures and their samplers.

The seed measure is uniform on the 32 sign 6-tuples with an odd number
of -1's; its sum is -4, 0, or 4.  A recursive family of laws on sign
vectors of length 6**n is built by drawing one (possibly
sum-constrained) seed tuple V and six independent "positive"
level-(n-1) vectors W0..W5, then emitting entry V_i * W_i[j] at
coordinate i*6**(n-1) + j.  Because the vector sum scales by exactly 4
per level, conditioning the sum of the product vector is equivalent to
constraining the sum of V alone, which makes sampling rejection-free
and exact at every level.

Four kinds are distinguished by the constraint on the top-level V:
  ord  - unconstrained       (sum in {-4, 0, 4})
  cen  - sum(V) = 0          ("centered": vector sums to 0)
  fri  - |sum(V)| = 4        ("fringe": vector sums to +-4**n)
  pos  - sum(V) = +4         ("positive": vector sums to +4**n)
Level 0 base cases: fri is a fair sign, pos is constant +1.

All probabilities are exact rationals; floats appear only downstream in
Monte Carlo estimates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from . import rng

KINDS = ("ord", "cen", "fri", "pos")

#: top-level sum constraint implied by each kind
CONSTRAINT_FOR_KIND = {"ord": "none", "cen": "sum0", "fri": "abs4", "pos": "sum4"}

_V_DRAW = 101  # key component separating a node's V draw from its children


def _enumerate(constraint: str):
    out = []
    for bits in product((1, -1), repeat=6):
        if np.prod(bits) != -1:
            continue
        s = sum(bits)
        if (
            constraint == "none"
            or (constraint == "sum0" and s == 0)
            or (constraint == "abs4" and abs(s) == 4)
            or (constraint == "sum4" and s == 4)
        ):
            out.append(bits)
    return sorted(out)


KEY_SETS = {c: tuple(_enumerate(c)) for c in ("none", "sum0", "abs4", "sum4")}
KEY_SET_ARRAYS = {c: np.array(v, dtype=np.int8) for c, v in KEY_SETS.items()}


def enumerate_key_vectors():
    """All 32 odd-parity sign 6-tuples in canonical lexicographic order."""
    return list(KEY_SETS["none"])


def sample_key(sum_constraint: str, key: int, counter: int = 0):
    """Uniform draw from the odd-parity 6-tuples with the given sum
    constraint ("none", "sum0", "abs4", or "sum4")."""
    atoms = KEY_SETS[sum_constraint]
    return atoms[rng.uniform_index(key, len(atoms), counter)]


def node_vector(key: int, constraint: str) -> np.ndarray:
    """The constrained seed tuple attached to one tree node."""
    atoms = KEY_SET_ARRAYS[constraint]
    return atoms[rng.uniform_index(rng.extend(key, _V_DRAW), len(atoms))]


def child_key(key: int, i: int) -> int:
    return rng.extend(key, i)


def sample_level(n: int, kind: str, key: int) -> np.ndarray:
    """Draw a length-6**n sign vector exactly from the level-n law.

    The draw is a pure function of `key`; coordinate `c` of the result
    can also be evaluated lazily from the same key via the digit path
    of `c` (see `coordinate_from_digits`), and the two agree.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n == 0:
        if kind == "pos":
            return np.array([1], dtype=np.int8)
        if kind == "fri":
            return rng.fair_signs(rng.extend(key, _V_DRAW), np.array([0]))
        raise ValueError(f"kind {kind!r} requires level >= 1")
    v = node_vector(key, CONSTRAINT_FOR_KIND[kind])
    parts = [
        v[i] * sample_level(n - 1, "pos", child_key(key, i)) for i in range(6)
    ]
    return np.concatenate(parts)


def coordinate_from_digits(key: int, kind: str, digits) -> int:
    """As `coordinate_from_digits`, with the root constraint of `kind`
    and "sum4" at every internal node below it."""
    sign = 1
    node = key
    constraint = CONSTRAINT_FOR_KIND[kind]
    for d in digits:
        sign *= int(node_vector(node, constraint)[d])
        node = child_key(node, d)
        constraint = "sum4"
    return sign


def node_vectors_many(keys: np.ndarray, constraint: str) -> np.ndarray:
    """Vectorized `node_vector`: one constrained tuple per stream key."""
    atoms = KEY_SET_ARRAYS[constraint]
    idx = rng.uniform_indices(rng.extend_arr(keys, np.int64(_V_DRAW)), len(atoms))
    return atoms[idx]


def sample_level1_many(kind: str, keys: np.ndarray) -> np.ndarray:
    """Vectorized level-1 draws, one length-6 sign vector per key.

    Agrees draw-for-draw with `sample_level(1, kind, key)`.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    return node_vectors_many(keys, CONSTRAINT_FOR_KIND[kind])


def sample_level_many(n: int, kind: str, keys: np.ndarray) -> np.ndarray:
    """Vectorized level-n draws: one (6**n)-vector per key, agreeing
    draw-for-draw with `sample_level`."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    keys = np.asarray(keys, dtype=np.uint64)
    if n == 0:
        if kind == "pos":
            return np.ones((len(keys), 1), dtype=np.int8)
        if kind == "fri":
            w = rng.words_keyed(rng.extend_arr(keys, np.int64(_V_DRAW)))
            return np.where((w & np.uint64(1)).astype(bool),
                            np.int8(1), np.int8(-1))[:, None]
        raise ValueError(f"kind {kind!r} requires level >= 1")
    v = node_vectors_many(keys, CONSTRAINT_FOR_KIND[kind])
    parts = [
        v[:, i:i + 1] * sample_level_many(
            n - 1, "pos", rng.extend_arr(keys, np.int64(i)))
        for i in range(6)
    ]
    return np.concatenate(parts, axis=1)


@dataclass(frozen=True)
class ExactDistribution:
    """A finite law on sign vectors with exact rational atom masses."""

    atoms: tuple  # ((vector tuple, Fraction), ...) sorted by vector

    def __post_init__(self):
        total = sum(p for _, p in self.atoms)
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        if any(p <= 0 for _, p in self.atoms):
            raise ValueError("nonpositive mass")
        if len({v for v, _ in self.atoms}) != len(self.atoms):
            raise ValueError("duplicate support vectors")

    def mass(self, vector) -> Fraction:
        vec = tuple(vector)
        for v, p in self.atoms:
            if v == vec:
                return p
        return Fraction(0)

    def support(self):
        return [v for v, _ in self.atoms]

    def marginal(self, coords) -> "ExactDistribution":
        acc: dict = {}
        for v, p in self.atoms:
            sub = tuple(v[c] for c in coords)
            acc[sub] = acc.get(sub, Fraction(0)) + p
        return ExactDistribution(tuple(sorted(acc.items())))

    def moment_of_sum(self, order: int) -> Fraction:
        return sum(p * Fraction(sum(v)) ** order for v, p in self.atoms)

    def to_json(self) -> str:
        rows = [
            {
                "vector": "".join("+" if e == 1 else "-" for e in v),
                "prob_num": p.numerator,
                "prob_den": p.denominator,
            }
            for v, p in self.atoms
        ]
        return json.dumps(rows, indent=1)

    @staticmethod
    def mix(parts):
        """Exact mixture sum((weight, dist))."""
        acc: dict = {}
        for w, dist in parts:
            for v, p in dist.atoms:
                acc[v] = acc.get(v, Fraction(0)) + w * p
        return ExactDistribution(tuple(sorted(acc.items())))


def _uniform_on(vectors) -> ExactDistribution:
    p = Fraction(1, len(vectors))
    return ExactDistribution(tuple(sorted((tuple(v), p) for v in vectors)))


def exact_distribution(n: int, kind: str) -> ExactDistribution:
    """Fully enumerated level-n law; only n <= 1 is enumerable here."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if n == 0:
        if kind == "pos":
            return _uniform_on([(1,)])
        if kind == "fri":
            return _uniform_on([(-1,), (1,)])
        raise ValueError(f"kind {kind!r} requires level >= 1")
    if n == 1:
        return _uniform_on(KEY_SETS[CONSTRAINT_FOR_KIND[kind]])
    raise ValueError("support too large beyond level 1; use sample_level "
                     "or sum_distribution")


def sum_distribution(n: int, kind: str) -> dict:
    """Exact law of the vector sum at level n >= 1, as {sum: Fraction}."""
    if n < 1:
        raise ValueError("level must be >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    s = 4**n
    if kind == "ord":
        return {0: Fraction(5, 8), -s: Fraction(3, 16), s: Fraction(3, 16)}
    if kind == "cen":
        return {0: Fraction(1)}
    if kind == "fri":
        return {-s: Fraction(1, 2), s: Fraction(1, 2)}
    return {s: Fraction(1)}


@dataclass(frozen=True)
class MomentRecord:
    level: int
    coordinate_mean_pos: Fraction
    sixth_moment_sum_ord: Fraction | None
    product_parity: dict


def exact_moments(n: int) -> MomentRecord:
    """Closed-form exact moments of the level-n laws."""
    mean = Fraction(2, 3) ** n
    sixth = Fraction(3, 8) * Fraction(4) ** (6 * n) if n >= 1 else None
    if n == 0:
        parity = {"fri": None, "pos": 1}
    elif n == 1:
        parity = {k: -1 for k in KINDS}
    else:
        parity = {k: 1 for k in KINDS}
    return MomentRecord(n, mean, sixth, parity)


def sixth_moment_gap(n: int, block_counts) -> Fraction:
    """Exact sixth-moment excess of six independent fringe blocks over
    the coupled level-(n+1) law, for one index per block count.

    Equals (2/3)**(6n) * 720 * prod(counts); with all counts 6**n it is
    720 * 4**(6n).
    """
    counts = list(block_counts)
    if len(counts) != 6:
        raise ValueError("need six block counts")
    if any(c < 0 or c > 6**n for c in counts):
        raise ValueError("count out of range 0..6**n")
    out = Fraction(2, 3) ** (6 * n) * 720
    for c in counts:
        out *= c
    return out
