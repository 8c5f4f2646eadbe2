import pytest
from hypothesis import given, settings

from election import Matching, MatchingError, delta, enumerate_matchings
from popularity_verifier import (
    CertificateKind,
    build_weighted_graph,
    find_alternating_certificate,
    is_popular,
    verify_popular,
)
from strategies import instances, seeded_instances


@pytest.fixture
def ab_de() -> Matching:
    return Matching.of([("a", "b"), ("d", "e")])


def test_weighted_graph(k4, ab_de):
    graph = build_weighted_graph(k4, ab_de)
    assert set(graph.loop_weight.values()) == {-1}, "every vertex is covered"
    assert graph.edge_weight[("b", "d")] == 2
    assert graph.edge_weight[("a", "d")] == 0
    assert graph.weight_of(ab_de) == 0


def test_k4_ab_de_is_popular(k4, ab_de):
    verdict = verify_popular(k4, ab_de)
    assert verdict.popular
    assert verdict.witness is None


def test_empty_matching_is_not_popular(k4):
    verdict = verify_popular(k4, Matching())
    assert not verdict.popular
    assert verdict.margin == 4, "a perfect matching makes all four vertices better off"
    assert delta(k4, Matching(), verdict.witness) == 4


def test_unpopular7_loses_an_election(unpopular7):
    M = Matching.of([("a", "b"), ("d", "e"), ("f", "g")])
    verdict = verify_popular(unpopular7, M)
    assert not verdict.popular
    assert verdict.margin >= 1
    assert delta(unpopular7, M, verdict.witness) == verdict.margin


def test_popular7_popular_matching(popular7):
    assert verify_popular(popular7, Matching.of([("a", "b"), ("d", "h"), ("e", "g")])).popular


def test_foreign_matching_is_rejected(k4):
    with pytest.raises(MatchingError):
        verify_popular(k4, Matching.of([("a", "zz")]))


@pytest.mark.parametrize("shape", [(5, 2), (5, 3), (6, 2), (6, 3)])
def test_agrees_with_exhaustive_elections(shape):
    for inst in seeded_instances(25, [shape], seed=7):
        matchings = list(enumerate_matchings(inst))
        for M in matchings:
            best = max(delta(inst, M, N) for N in matchings)
            verdict = verify_popular(inst, M)
            assert verdict.popular == (best <= 0), f"{M} on {inst.prefs}"
            assert is_popular(inst, M) == verdict.popular
            if not verdict.popular:
                assert verdict.margin == best
                assert delta(inst, M, verdict.witness) == verdict.margin


def test_certificates(k4, ab_de):
    assert find_alternating_certificate(k4, ab_de) is None

    certificate = find_alternating_certificate(k4, Matching())
    assert certificate.kind == CertificateKind.UNCOVERED_END

    ad_be = Matching.of([("a", "d"), ("b", "e")])
    certificate = find_alternating_certificate(k4, ad_be)
    assert certificate is not None
    assert len(certificate.walk) >= 2


@settings(max_examples=60, deadline=None)
@given(instances(max_n=6))
def test_certificate_agrees_with_verifier(inst):
    for M in enumerate_matchings(inst):
        certificate = find_alternating_certificate(inst, M)
        assert (certificate is None) == verify_popular(inst, M).popular, f"{M} on {inst.prefs}"
