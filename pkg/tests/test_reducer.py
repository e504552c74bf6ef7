import json

import pytest

from laddertw.decomposition import exact_treewidth
from laddertw.errors import PolicyError
from laddertw.reducer import (ReductionPolicy, certify_tw_at_least, reduce, replay, report_from_json)

from families import complete, cycle, grid
from planted import planted_suite


def test_policy_floors():
    with pytest.raises(PolicyError):
        ReductionPolicy(general_target=3)
    with pytest.raises(PolicyError):
        ReductionPolicy(aggressive_target=2)
    assert ReductionPolicy.length5().general_target == 5


def test_certificates_are_sound():
    assert certify_tw_at_least(complete(5), 4).method in ("degeneracy", "clique")
    assert certify_tw_at_least(cycle(6), 3) is None
    cert = certify_tw_at_least(grid(3, 4), 3)
    assert cert is not None and cert.value >= 3


def test_general_rule_preserves_width():
    for g, L in planted_suite(1, 12, range(5, 11), range(3, 10)):
        out, report = reduce(g)
        assert report.rules_used() and set(report.rules_used()) == {"general->4"}
        assert exact_treewidth(out).width == exact_treewidth(g).width
        assert out.n == g.n - 2 * (L.length - 4)


def test_disconnecting_rule():
    for g, L in planted_suite(2, 8, range(2, 9), range(2, 8), "disconnecting"):
        out, report = reduce(g)
        assert "disconnecting->1" in report.rules_used()
        assert exact_treewidth(out).width == exact_treewidth(g).width


def test_degree2_rule_needs_certificate():
    for g, L in planted_suite(3, 8, range(2, 8), range(4, 8), "degree2", dense=4):
        out, report = reduce(g)
        assert report.rules_used()[0] == "degree2-cornerpoint->1"
        assert any(c.k == 3 for c in report.tw_certificates)
        assert exact_treewidth(out).width == exact_treewidth(g).width


def test_aggressive_off_by_default():
    for g, L in planted_suite(4, 5, range(5, 9), range(5, 8), dense=5):
        _, report = reduce(g)
        assert not any(r.startswith("aggressive") for r in report.rules_used())
        _, report = reduce(g, ReductionPolicy(allow_aggressive=True))
        assert "aggressive->3" in report.rules_used()


def test_aggressive_skipped_without_certificate():
    sparse = planted_suite(5, 30, range(5, 9), range(2, 5),
                           accept=lambda g, L: exact_treewidth(g).width == 3)
    for g, L in sparse[:5]:
        out, report = reduce(g, ReductionPolicy(allow_aggressive=True))
        assert not any(r.startswith("aggressive") for r in report.rules_used())
        assert any("aggressive rule skipped" in n for n in report.notes)
        assert exact_treewidth(out).width == 3


def test_suppress_degree2_option():
    g, _ = planted_suite(6, 1, [6], [5], dense=4)[0]
    g, x = g.add_vertex()
    g = g.add_edges([(x, 0), (x, 7)])
    out, report = reduce(g, ReductionPolicy(suppress_degree2=True))
    assert "suppress-deg2" in report.rules_used()
    assert exact_treewidth(out).width == exact_treewidth(g).width


def test_single_step_mode():
    g, _ = planted_suite(7, 1, [7], [6])[0]
    out, report = reduce(g, ReductionPolicy(iterate_to_fixpoint=False))
    assert len(report.steps) == 1


def test_report_round_trip_and_replay():
    for g, L in planted_suite(8, 6, range(5, 11), range(3, 9), dense=5):
        out, report = reduce(g, ReductionPolicy(allow_aggressive=True))
        data = json.loads(json.dumps(report.to_json()))
        again = report_from_json(data)
        assert again.rules_used() == report.rules_used()
        assert replay(g, again) == out


def test_idempotent():
    g, _ = planted_suite(9, 1, [9], [6])[0]
    out, _ = reduce(g)
    out2, report = reduce(out)
    assert out2 == out and report.steps == []


def test_no_ladders_no_steps():
    g = complete(5)
    out, report = reduce(g)
    assert out == g and report.steps == [] and report.vertices_before == report.vertices_after == 5


def test_certificate_examples():
    from families import random_tree
    import random
    assert certify_tw_at_least(random_tree(9, random.Random(0)), 2) is None
    g, _ = planted_suite(20, 1, [3], [1])[0]
    cert = certify_tw_at_least(g, 3, exact=False)
    assert cert is not None


def test_deterministic_replay():
    g, _ = planted_suite(21, 1, [8], [7], dense=5)[0]
    a = reduce(g, ReductionPolicy(allow_aggressive=True))
    b = reduce(g, ReductionPolicy(allow_aggressive=True))
    assert a[0] == b[0] and a[1].to_json() == b[1].to_json()


def test_floors_respected():
    for g, L in planted_suite(22, 10, range(5, 11), range(3, 9), dense=5):
        for policy in (ReductionPolicy(), ReductionPolicy(allow_aggressive=True), ReductionPolicy.length5()):
            _, report = reduce(g, policy)
            for s in report.steps:
                assert s.length_after < s.length_before
                if s.rule.startswith("general"):
                    assert s.length_after >= 4
                if s.rule.startswith("aggressive"):
                    assert s.length_after >= 3
