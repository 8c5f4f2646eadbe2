import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from election import (
    EnumerationBoundError,
    Matching,
    MatchingError,
    VoteSign,
    best_response,
    blocking_edges,
    delta,
    enumerate_matchings,
    label_edges,
    oracle_is_popular,
    oracle_popular_matchings,
    oracle_stable_matchings,
    parse_matching,
    serialize_matching,
    vote,
)
from strategies import instances

PLUS, MINUS = VoteSign.PLUS, VoteSign.MINUS


@pytest.fixture
def ab_de() -> Matching:
    return Matching.of([("a", "b"), ("d", "e")])


def test_matching_is_canonical():
    M = Matching.of([("e", "d"), ("b", "a")])
    assert M.pairs == (("a", "b"), ("d", "e"))
    assert M.partner("d") == "e"
    assert M.partner("x") is None
    assert str(M) == "(a,b) (d,e)"


@pytest.mark.parametrize("pairs", [[("a", "b"), ("b", "d")], [("a", "a")], [("a", "b", "d")]])
def test_matching_rejects_bad_pairs(pairs):
    with pytest.raises(MatchingError):
        Matching.of(pairs)


def test_parse_matching(k4):
    assert parse_matching("# ab_de\na b\n\nd e\n", k4) == Matching.of([("a", "b"), ("d", "e")])
    with pytest.raises(MatchingError, match="line 1"):
        parse_matching("a b d\n", k4)
    with pytest.raises(MatchingError, match="not an edge"):
        parse_matching("a zz\n", k4)


def test_serialized_matching_reads_back(k4, ab_de):
    text = serialize_matching(ab_de)
    assert text == "a b\nd e\n"
    assert parse_matching(text, k4) == ab_de
    assert serialize_matching(Matching()) == ""


def test_votes(k4, ab_de):
    assert vote(k4, ab_de, "b", "d") == PLUS
    assert vote(k4, ab_de, "d", "b") == PLUS
    assert vote(k4, ab_de, "a", "d") == MINUS, "a already has its first choice"
    assert vote(k4, Matching(), "a", "e") == PLUS, "unmatched vertices vote plus"
    with pytest.raises(MatchingError):
        vote(k4, ab_de, "a", "b")


def test_labels(k4, ab_de):
    labels = label_edges(k4, ab_de)
    assert labels.get("b", "d") == (PLUS, PLUS)
    assert labels.get("a", "d") == (MINUS, PLUS)
    assert labels.get("d", "a") == (PLUS, MINUS)
    assert ("a", "b") not in labels.labels, "matching edges carry no label"


def test_blocking_edges(k4, ab_de):
    assert blocking_edges(k4, ab_de) == {("b", "d")}


def test_delta(k4, ab_de):
    ad_be = Matching.of([("a", "d"), ("b", "e")])
    assert delta(k4, ab_de, ad_be) == -2
    assert delta(k4, ad_be, ab_de) == 2
    assert delta(k4, ab_de, ab_de) == 0


def test_enumerate_matchings_k4(k4):
    matchings = list(enumerate_matchings(k4))
    assert len(matchings) == 10, "1 empty + 6 single edges + 3 perfect"
    assert len(set(matchings)) == 10
    assert matchings[0] == Matching()


def test_enumeration_bound(popular7):
    with pytest.raises(EnumerationBoundError):
        list(enumerate_matchings(popular7, bound=5))


def test_oracle_popularity_k4(k4, ab_de):
    assert oracle_is_popular(k4, ab_de)
    assert not oracle_is_popular(k4, Matching())
    assert oracle_popular_matchings(k4) == [ab_de]
    assert oracle_stable_matchings(k4) == []


def test_best_response(k4, ab_de):
    margin, witness = best_response(k4, Matching.of([("a", "d"), ("b", "e")]))
    assert margin == 2
    assert witness == ab_de


def test_oracle_on_seven_vertex_fixtures(unpopular7, popular7):
    assert oracle_popular_matchings(unpopular7) == []
    assert Matching.of([("a", "b"), ("d", "h"), ("e", "g")]) in oracle_popular_matchings(popular7)
    assert oracle_stable_matchings(popular7) == []


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_delta_is_antisymmetric(data):
    inst = data.draw(instances(max_n=6))
    matchings = list(enumerate_matchings(inst))
    M = data.draw(st.sampled_from(matchings))
    N = data.draw(st.sampled_from(matchings))
    assert delta(inst, M, N) == -delta(inst, N, M)
