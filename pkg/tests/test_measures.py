from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivewise import measures, rng
from fivewise.measures import (
    ExactDistribution,
    coordinate_from_digits,
    enumerate_key_vectors,
    exact_distribution,
    exact_moments,
    sample_key,
    sample_level,
    sample_level1_many,
    sixth_moment_gap,
    sum_distribution,
)


def test_key_vector_enumeration():
    atoms = enumerate_key_vectors()
    assert len(atoms) == 32
    assert (-1, 1, 1, 1, 1, 1) in atoms
    assert (1, 1, 1, 1, 1, 1) not in atoms
    assert atoms == sorted(atoms)
    for v in atoms:
        assert np.prod(v) == -1
        assert sum(v) in (-4, 0, 4)


def test_constrained_subset_sizes():
    assert len(measures.KEY_SETS["sum0"]) == 20
    assert len(measures.KEY_SETS["abs4"]) == 12
    assert len(measures.KEY_SETS["sum4"]) == 6
    for v in measures.KEY_SETS["sum4"]:
        assert v.count(-1) == 1
    for v in measures.KEY_SETS["sum0"]:
        assert v.count(-1) == 3


def test_sample_key_constraints_and_determinism():
    key = rng.derive(11)
    for c, want in (("none", {-4, 0, 4}), ("sum0", {0}), ("abs4", {-4, 4}),
                    ("sum4", {4})):
        for ctr in range(50):
            v = sample_key(c, key, ctr)
            assert sum(v) in want
            assert v == sample_key(c, key, ctr)


def test_sample_key_sum0_uniform():
    key = rng.derive(12)
    counts = {}
    n = 100_000
    for ctr in range(n):
        v = sample_key("sum0", key, ctr)
        counts[v] = counts.get(v, 0) + 1
    assert len(counts) == 20
    p = 1 / 20
    sigma = (n * p * (1 - p)) ** 0.5
    for c in counts.values():
        assert abs(c - n * p) < 4.5 * sigma


def test_level0_base_cases():
    key = rng.derive(1)
    assert sample_level(0, "pos", key).tolist() == [1]
    assert sample_level(0, "fri", key)[0] in (-1, 1)
    with pytest.raises(ValueError):
        sample_level(0, "ord", key)
    with pytest.raises(ValueError):
        sample_level(0, "cen", key)


@given(st.integers(0, 3), st.integers())
@settings(max_examples=60, deadline=None)
def test_pos_sum_invariant(n, seed):
    v = sample_level(n, "pos", rng.derive(seed))
    assert len(v) == 6**n
    assert int(v.sum()) == 4**n


@given(st.integers(1, 3), st.sampled_from(measures.KINDS), st.integers())
@settings(max_examples=60, deadline=None)
def test_sum_support_matches_exact_law(n, kind, seed):
    v = sample_level(n, kind, rng.derive(seed))
    law = sum_distribution(n, kind)
    assert int(v.sum()) in law
    assert set(np.unique(v)) <= {-1, 1}


def test_level1_ord_is_key_vector():
    atoms = set(enumerate_key_vectors())
    for seed in range(200):
        v = tuple(int(x) for x in sample_level(1, "ord", rng.derive(seed)))
        assert v in atoms


def test_exact_distributions_level1():
    ord_ = exact_distribution(1, "ord")
    assert len(ord_.atoms) == 32
    assert all(p == Fraction(1, 32) for _, p in ord_.atoms)
    cen = exact_distribution(1, "cen")
    assert len(cen.atoms) == 20
    assert all(p == Fraction(1, 20) for _, p in cen.atoms)
    assert all(sum(v) == 0 for v, _ in cen.atoms)
    fri = exact_distribution(1, "fri")
    assert len(fri.atoms) == 12
    pos = exact_distribution(1, "pos")
    assert len(pos.atoms) == 6
    f0 = exact_distribution(0, "fri")
    assert f0.mass((-1,)) == f0.mass((1,)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        exact_distribution(2, "ord")
    with pytest.raises(ValueError):
        exact_distribution(0, "cen")


def test_mixture_identity_atom_by_atom():
    ord_ = exact_distribution(1, "ord")
    mixed = ExactDistribution.mix([
        (Fraction(5, 8), exact_distribution(1, "cen")),
        (Fraction(3, 8), exact_distribution(1, "fri")),
    ])
    assert ord_.atoms == mixed.atoms


def test_symmetry_under_negation():
    for n, kind in [(0, "fri"), (1, "ord"), (1, "cen"), (1, "fri")]:
        d = exact_distribution(n, kind)
        for v, p in d.atoms:
            assert d.mass(tuple(-e for e in v)) == p


def test_five_of_six_marginals_uniform():
    d = exact_distribution(1, "ord")
    for coords in combinations(range(6), 5):
        m = d.marginal(coords)
        assert len(m.atoms) == 32
        assert all(p == Fraction(1, 32) for _, p in m.atoms)


def test_sum_distribution_examples():
    assert sum_distribution(2, "ord") == {
        0: Fraction(5, 8), -16: Fraction(3, 16), 16: Fraction(3, 16)}
    assert sum_distribution(3, "pos") == {64: Fraction(1)}
    assert sum_distribution(1, "fri") == {
        -4: Fraction(1, 2), 4: Fraction(1, 2)}
    with pytest.raises(ValueError):
        sum_distribution(0, "ord")


def test_exact_moments():
    rec = exact_moments(2)
    assert rec.coordinate_mean_pos == Fraction(4, 9)
    rec1 = exact_moments(1)
    assert rec1.sixth_moment_sum_ord == 1536
    assert rec1.product_parity == {k: -1 for k in measures.KINDS}
    assert exact_moments(3).product_parity == {k: 1 for k in measures.KINDS}
    assert exact_moments(0).product_parity["pos"] == 1


def test_parity_brute_force_level1():
    for kind in measures.KINDS:
        d = exact_distribution(1, kind)
        assert all(np.prod(v) == -1 for v, _ in d.atoms)


def test_sixth_moment_gap():
    assert sixth_moment_gap(0, (1,) * 6) == 720
    assert sixth_moment_gap(2, (1, 0, 1, 1, 1, 1)) == 0
    assert sixth_moment_gap(1, (6,) * 6) == 2949120
    for n in range(4):
        assert sixth_moment_gap(n, (6**n,) * 6) == 720 * Fraction(4) ** (6 * n)
    with pytest.raises(ValueError):
        sixth_moment_gap(1, (7, 6, 6, 6, 6, 6))


def test_gap_identity_brute_force_level0():
    # six independent fair signs: enumerate all 64 outcomes
    e_fair = Fraction(sum(sum(v) ** 6 for v in product((-1, 1), repeat=6)), 64)
    assert e_fair == 2256
    e_ord = exact_distribution(1, "ord").moment_of_sum(6)
    assert e_ord == 1536
    assert e_fair - e_ord == 720 == sixth_moment_gap(0, (1,) * 6)


def test_rademacher_sixth_moment_closed_form():
    # E(S_6)^6 = 15*M^3 - 30*M^2 + 16*M at M = 6
    assert 15 * 216 - 30 * 36 + 16 * 6 == 2256


def test_vectorized_level1_matches_scalar():
    base = rng.derive(77)
    keys = rng.extend_arr(np.uint64(base), np.arange(300))
    for kind in measures.KINDS:
        many = sample_level1_many(kind, keys)
        for i in range(0, 300, 37):
            one = sample_level(1, kind, int(keys[i]))
            assert many[i].tolist() == one.tolist()


def test_coordinate_access_matches_whole_vector():
    for kind in measures.KINDS:
        for seed in range(5):
            key = rng.derive(1000 + seed)
            for n in (1, 2, 3):
                vec = sample_level(n, kind, key)
                for c in range(0, 6**n, max(1, 6**n // 11)):
                    digits = []
                    rem = c
                    for u in range(n, 0, -1):
                        digits.append(rem // 6 ** (u - 1))
                        rem %= 6 ** (u - 1)
                    assert coordinate_from_digits(key, kind, digits) == vec[c]


def test_sampler_frequencies_level1_quick():
    # 2e5 vectorized draws per kind vs the exact 32/20/12/6-atom laws
    base = rng.derive(31337)
    n = 200_000
    keys = rng.extend_arr(np.uint64(base), np.arange(n))
    for kind in measures.KINDS:
        vecs = sample_level1_many(kind, keys)
        codes = ((vecs < 0) << np.arange(6, dtype=np.int8)).sum(axis=1)
        counts = np.bincount(codes, minlength=64)
        law = exact_distribution(1, kind)
        expected = np.zeros(64)
        for v, p in law.atoms:
            code = sum(1 << i for i, e in enumerate(v) if e == -1)
            expected[code] = float(p) * n
        for code in range(64):
            if expected[code] == 0:
                assert counts[code] == 0
            else:
                sigma = (expected[code] * (1 - expected[code] / n)) ** 0.5
                assert abs(counts[code] - expected[code]) < 4.5 * sigma


def test_distribution_json_roundtrip():
    import json

    d = exact_distribution(1, "pos")
    rows = json.loads(d.to_json())
    assert len(rows) == 6
    assert all(set(r) == {"vector", "prob_num", "prob_den"} for r in rows)
    assert all(r["prob_den"] == 6 for r in rows)
    vectors = [r["vector"] for r in rows]
    # rows follow the canonical atom order (numeric entries, -1 before +1)
    want = ["".join("+" if e == 1 else "-" for e in v) for v in d.support()]
    assert vectors == want
    assert all(v.count("-") == 1 and len(v) == 6 for v in vectors)
