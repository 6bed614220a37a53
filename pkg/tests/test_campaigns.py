import json

from fivewise import campaigns


def run(name, **kw):
    rep = campaigns.run_campaign(name, **kw)
    assert not rep.budget_exceeded, rep.params
    assert rep.passed, [e.row() for e in rep.estimates if e.verdict == "fail"]
    return rep


def test_measures_campaign_quick():
    rep = run("measures", draws=10**5)
    names = {e.name for e in rep.estimates}
    assert {"key-set-size", "mixture-identity", "gap-identity-level0",
            "freq-ord", "pos-sum-level3"} <= names


def test_chain_campaign_quick():
    rep = run("chain", steps=2 * 10**5, gaps_target=10**4)
    names = {e.name for e in rep.estimates}
    assert {"transition-matrix", "return-mean", "negbin-gof",
            "cftp-overlap-determinism"} <= names


def test_pattern_campaign_quick():
    run("pattern", positions=4 * 10**6)


def test_hierarchy_campaign_quick():
    rep = run("hierarchy", positions=10**6, gaps2=2000)
    names = {e.name for e in rep.estimates}
    assert {"marginal-w1=1", "marginal-w3=6", "refresh-nonzero-w2",
            "gap2-mean", "gap2-second-moment"} <= names


def test_tails_campaign_quick():
    rep = run("tails", positions=10**6, nmax=5)
    assert any(e.name == "tail-n5" for e in rep.estimates)


def test_independence_campaign_quick():
    rep = run("independence", sets=8, replicates=3 * 10**4)
    by_name = {e.name: e for e in rep.estimates}
    assert by_name["six-wise-block-aligned-rejects"].verdict == "pass"
    assert by_name["block-product-constant"].verdict == "pass"


def test_moments_campaign_quick():
    run("moments", replicates=2 * 10**4, lengths=(96,))


def test_self_oracle_campaign_quick():
    rep = run("self-oracle", replicates=3 * 10**4, lengths=(96,))
    e2 = next(e for e in rep.estimates if e.name == "m96-order2")
    assert abs(e2.value - 1.0) < 5 * e2.stderr


def test_blocks_campaign_quick():
    run("blocks", window_len=2 * 10**4, windows=2)


def test_double_one_campaign_quick():
    run("double-one", reps1=1500, reps2=200)


def test_campaign_reports_serialize_and_are_deterministic():
    rep1 = campaigns.run_campaign("tails", positions=2 * 10**5, nmax=4)
    rep2 = campaigns.run_campaign("tails", positions=2 * 10**5, nmax=4)
    assert rep1.to_json() == rep2.to_json()
    payload = json.loads(rep1.to_json())
    assert payload["campaign"] == "tails"
    assert payload["pass"] is True
    assert all({"name", "value", "stderr", "target", "verdict"} ==
               set(row) for row in payload["estimates"])


def test_budget_exceeded_reported_not_raised():
    rep = campaigns.run_campaign("cross-mode", seed=999,
                                 anchors_target=2000,
                                 scan_budget=1 << 22,
                                 lookback=1 << 22)
    assert rep.budget_exceeded
    assert not rep.passed
