"""
Matchings, votes and head-to-head elections between matchings.

The brute-force oracles at the bottom enumerate every matching of an instance and
are only meant for small instances (see ENUM_EDGE_BOUND); the polynomial
verifier lives in popularity_verifier.
"""

from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from constants import ENUM_EDGE_BOUND
from instance_model import Edge, Instance, edge_key


class MatchingError(ValueError):
    """A matching that is malformed or does not fit its instance."""


class EnumerationBoundError(ValueError):
    """The instance is too large for exhaustive enumeration."""


class VoteSign(str, Enum):
    PLUS = "+"
    MINUS = "-"


Label = tuple[VoteSign, VoteSign]


class Matching(BaseModel):
    """A set of disjoint edges, stored as canonically sorted endpoint pairs."""

    model_config = ConfigDict(frozen=True)

    pairs: tuple[Edge, ...] = ()

    @field_validator("pairs", mode="before")
    @classmethod
    def _canonical(cls, pairs: Iterable[Iterable[str]]) -> tuple[Edge, ...]:
        canon = []
        seen = set()
        for pair in pairs:
            pair = tuple(pair)
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ValueError(f"{pair} is not a pair of distinct vertices")
            for v in pair:
                if v in seen:
                    raise ValueError(f"vertex {v} occurs in two pairs")
                seen.add(v)
            canon.append(edge_key(*pair))
        return tuple(sorted(canon))

    @classmethod
    def of(cls, pairs: Iterable[Iterable[str]] = ()) -> "Matching":
        try:
            return cls(pairs=pairs)
        except ValidationError as e:
            raise MatchingError(e.errors()[0]["msg"].removeprefix("Value error, ")) from e

    @classmethod
    def trusted(cls, pairs: Iterable[Edge]) -> "Matching":
        """Skip validation for pairs already known to be disjoint edges."""
        return cls.model_construct(pairs=tuple(sorted(edge_key(u, v) for u, v in pairs)))

    @cached_property
    def mate(self) -> dict[str, str]:
        mate = {}
        for u, v in self.pairs:
            mate[u] = v
            mate[v] = u
        return mate

    def partner(self, u: str) -> str | None:
        """M(u), or None when u is uncovered."""
        return self.mate.get(u)

    def covers(self, u: str) -> bool:
        return u in self.mate

    def uncovered(self, inst: Instance) -> set[str]:
        return {v for v in inst.vertices if v not in self.mate}

    def union(self, other: "Matching") -> "Matching":
        return Matching.of(self.pairs + other.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return format_edges(self.pairs)


def format_edges(edges: Iterable[Edge], sep: str = " ") -> str:
    return sep.join(f"({u},{v})" for u, v in sorted(edge_key(u, v) for u, v in edges))


def check_matching(inst: Instance, M: Matching) -> None:
    for u, v in M.pairs:
        if not inst.has_edge(u, v):
            raise MatchingError(f"({u},{v}) is not an edge of the instance")


def parse_matching(text: str, inst: Instance) -> Matching:
    """One edge per line, '<token> <token>'; blank and '#' lines are ignored."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise MatchingError(f"line {lineno}: expected two vertices, got {line!r}")
        pairs.append(tuple(tokens))
    M = Matching.of(pairs)
    check_matching(inst, M)
    return M


def serialize_matching(M: Matching) -> str:
    return "".join(f"{u} {v}\n" for u, v in M.pairs)


def _rank_of(inst: Instance, u: str, v: str | None) -> int:
    ranks = inst.rank[u]
    return len(ranks) if v is None else ranks[v]


def vote(inst: Instance, M: Matching, u: str, v: str) -> VoteSign:
    """u's vote between the non-matching edge (u, v) and its current assignment."""
    if not inst.has_edge(u, v):
        raise MatchingError(f"({u},{v}) is not an edge of the instance")
    if M.partner(u) == v:
        raise MatchingError(f"({u},{v}) belongs to the matching")
    if _rank_of(inst, u, v) < _rank_of(inst, u, M.partner(u)):
        return VoteSign.PLUS
    return VoteSign.MINUS


class EdgeLabelMap(BaseModel):
    """Labels (vote_u, vote_v) of every non-matching edge (u, v), keyed by canonical edge."""

    model_config = ConfigDict(frozen=True)

    labels: dict[Edge, Label]

    def get(self, u: str, v: str) -> Label:
        """The label oriented as (vote of u, vote of v)."""
        first, second = self.labels[edge_key(u, v)]
        return (first, second) if u <= v else (second, first)

    def blocking(self) -> set[Edge]:
        return {e for e, lab in self.labels.items() if lab == (VoteSign.PLUS, VoteSign.PLUS)}

    def is_minus_minus(self, u: str, v: str) -> bool:
        return self.labels[edge_key(u, v)] == (VoteSign.MINUS, VoteSign.MINUS)


def label_edges(inst: Instance, M: Matching) -> EdgeLabelMap:
    check_matching(inst, M)
    labels = {}
    for u, v in inst.edges:
        if M.partner(u) == v:
            continue
        labels[(u, v)] = (vote(inst, M, u, v), vote(inst, M, v, u))
    return EdgeLabelMap.model_construct(labels=labels)


def blocking_edges(inst: Instance, M: Matching) -> set[Edge]:
    return label_edges(inst, M).blocking()


def delta(inst: Instance, M: Matching, N: Matching) -> int:
    """(# vertices preferring N) - (# vertices preferring M)."""
    check_matching(inst, M)
    check_matching(inst, N)
    score = 0
    for u in inst.vertices:
        rm = _rank_of(inst, u, M.partner(u))
        rn = _rank_of(inst, u, N.partner(u))
        if rn < rm:
            score += 1
        elif rm < rn:
            score -= 1
    return score


def enumerate_matchings(inst: Instance, bound: int = ENUM_EDGE_BOUND) -> Iterator[Matching]:
    """Every matching of inst exactly once, the empty one first."""
    if inst.m > bound:
        raise EnumerationBoundError(f"instance has {inst.m} edges, enumeration bound is {bound}")

    order = inst.order
    vertices = inst.vertices
    matched: set[str] = set()
    pairs: list[Edge] = []

    def extend(i: int) -> Iterator[Matching]:
        while i < len(vertices) and vertices[i] in matched:
            i += 1
        if i == len(vertices):
            yield Matching.trusted(pairs)
            return
        u = vertices[i]
        yield from extend(i + 1)
        for v in inst.prefs[u]:
            if order[v] < order[u] or v in matched:
                continue
            matched.update((u, v))
            pairs.append((u, v))
            yield from extend(i + 1)
            pairs.pop()
            matched.difference_update((u, v))

    yield from extend(0)


def best_response(inst: Instance, M: Matching, bound: int = ENUM_EDGE_BOUND) -> tuple[int, Matching]:
    """The largest election margin any matching achieves against M, with a matching achieving it."""
    check_matching(inst, M)
    best, witness = 0, M
    for N in enumerate_matchings(inst, bound):
        score = delta(inst, M, N)
        if score > best:
            best, witness = score, N
    return best, witness


def oracle_is_popular(inst: Instance, M: Matching, bound: int = ENUM_EDGE_BOUND) -> bool:
    check_matching(inst, M)
    return all(delta(inst, M, N) <= 0 for N in enumerate_matchings(inst, bound))


def oracle_popular_matchings(inst: Instance, bound: int = ENUM_EDGE_BOUND) -> list[Matching]:
    matchings = list(enumerate_matchings(inst, bound))
    return [M for M in matchings if all(delta(inst, M, N) <= 0 for N in matchings)]


def oracle_stable_matchings(inst: Instance, bound: int = ENUM_EDGE_BOUND) -> list[Matching]:
    return [M for M in enumerate_matchings(inst, bound) if not blocking_edges(inst, M)]
