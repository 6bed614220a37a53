import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fivewise import coding
from fivewise.coding import (
    IDENTITY_COLUMNS,
    RegenerationAnchoredHistory,
    chain_step,
    check_condition_s,
    g_basic_anchored,
    g_basic_literal,
    g_spaced_anchored,
    psi,
    spaced_trace,
)

bit6 = st.tuples(*[st.integers(0, 1)] * 6)


def beta_with(coords_one):
    return tuple(1 if i in coords_one else 0 for i in range(6))


def test_chain_step_examples():
    # state 3 advances on coordinate 4 (tuple index 3)
    assert chain_step(3, beta_with({3})) == 4
    assert chain_step(3, beta_with(set())) == 3
    # state 6 wraps on coordinate 1
    assert chain_step(6, beta_with(set())) == 6
    assert chain_step(6, beta_with({0})) == 1


def test_chain_step_total():
    for state in range(1, 7):
        for mask in range(64):
            beta = tuple((mask >> i) & 1 for i in range(6))
            assert chain_step(state, beta) in range(1, 7)


def test_five_identity_columns_reach_state_five():
    # folding the first five identity columns from state 6 lands on 5
    hist = RegenerationAnchoredHistory(0)
    state = 6
    for col in IDENTITY_COLUMNS[:5]:
        state = chain_step(state, col)
    assert state == 5
    assert g_basic_anchored(
        RegenerationAnchoredHistory(5, IDENTITY_COLUMNS[:5])
    ) == 5


def test_identity_pattern_resets_any_state():
    for start in range(1, 7):
        state = start
        for col in IDENTITY_COLUMNS:
            state = chain_step(state, col)
        assert state == 6


def test_g_basic_at_anchor_and_one_step():
    assert g_basic_anchored(RegenerationAnchoredHistory(0)) == 6
    assert g_basic_anchored(
        RegenerationAnchoredHistory(1, (beta_with({0}),))
    ) == 1
    assert g_basic_anchored(
        RegenerationAnchoredHistory(1, (beta_with(set()),))
    ) == 6


def test_g_spaced_one_step_and_zero_vector():
    assert g_spaced_anchored(
        RegenerationAnchoredHistory(1, (beta_with({0}),))
    ) == 1
    assert g_spaced_anchored(
        RegenerationAnchoredHistory(1, (beta_with(set()),))
    ) == 0
    with pytest.raises(ValueError):
        g_spaced_anchored(RegenerationAnchoredHistory(0))


@given(st.lists(bit6, max_size=40), st.integers(0, 30))
@settings(max_examples=300, deadline=None)
def test_fold_matches_literal_scan_with_planted_pattern(suffix, insert_at):
    # plant an identity pattern at a random point to exercise the
    # greatest-occurrence scan
    pos = min(insert_at, len(suffix))
    full = tuple(suffix[:pos]) + IDENTITY_COLUMNS + tuple(suffix[pos:])
    hist = RegenerationAnchoredHistory(len(full), full)
    assert g_basic_anchored(hist) == g_basic_literal(hist)


@given(st.lists(bit6, min_size=1, max_size=60))
@settings(max_examples=300, deadline=None)
def test_update_law(suffix):
    # appending one vector maps state j to j/j+1 (or 6 to 6/1)
    hist = RegenerationAnchoredHistory(0)
    for beta in suffix:
        prev = g_basic_anchored(hist)
        hist = hist.extended(beta)
        cur = g_basic_anchored(hist)
        if prev in range(1, 6):
            assert cur == (prev + 1 if beta[prev] else prev)
        else:
            assert cur == (1 if beta[0] else 6)


@given(st.lists(bit6, min_size=1, max_size=30), st.integers(0, 29),
       st.integers(1, 4))
@settings(max_examples=200, deadline=None)
def test_zero_insertion_invariance(suffix, where, count):
    zeros = (beta_with(set()),) * count
    where = min(where, len(suffix))
    plain = tuple(suffix)
    padded = plain[:where] + zeros + plain[where:]
    h_plain = RegenerationAnchoredHistory(len(plain), plain)
    h_padded = RegenerationAnchoredHistory(len(padded), padded)
    assert g_basic_anchored(h_plain) == g_basic_anchored(h_padded)
    # spaced symbols at the inserted zeros are 0, later ones unchanged
    t_plain = spaced_trace(h_plain)
    t_padded = spaced_trace(h_padded)
    assert all(s == 0 for s in t_padded[where:where + count])
    assert t_padded[:where] == t_plain[:where]
    assert t_padded[where + count:] == t_plain[where:]


@given(st.lists(bit6, min_size=1, max_size=200))
@settings(max_examples=200, deadline=None)
def test_spaced_trace_passes_condition_s(suffix):
    hist = RegenerationAnchoredHistory(len(suffix), tuple(suffix))
    report = check_condition_s(spaced_trace(hist))
    assert report.ok, report


def test_psi():
    assert psi(0, [1, 0, 0]) == 0
    marks = [0] * 8
    for i in (0, 3, 7):
        marks[i] = 1
    assert psi(1, marks) == 3
    with pytest.raises(coding.InsufficientMarksError):
        psi(2, [0, 0, 1, 0, 0, 1])


def test_condition_s_checker():
    assert check_condition_s([1, 2, 3, 4, 5, 6, 1]).ok
    assert check_condition_s([1, 0, 0, 2, 0, 3]).ok
    rep = check_condition_s([1, 3])
    assert not rep.ok and rep.first_violation == 1
    assert check_condition_s([]).ok
    assert check_condition_s([0, 0, 4, 0, 5]).ok
    assert not check_condition_s([6, 2]).ok
    assert check_condition_s([6, 0, 1]).ok
    assert not check_condition_s([7]).ok


def test_trace_csv():
    hist = RegenerationAnchoredHistory(
        2, (beta_with({0}), beta_with({1})))
    csv = coding.trace_csv(hist)
    assert csv.splitlines()[0] == "k,basic,spaced"
    assert csv.splitlines()[1] == "0,1,1"
    assert csv.splitlines()[2] == "1,2,2"
