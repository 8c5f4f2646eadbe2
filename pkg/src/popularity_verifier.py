"""
Polynomial popularity verification.

Every vertex gets a loop; loops of vertices covered by M weigh -1, (+,+) edges
weigh 2, (-,-) edges weigh -2, everything else 0. The weight of a perfect matching
in this graph (loops included) is exactly the election margin of the matching it
induces over M, so M is popular iff the maximum perfect matching weight is 0.
"""

import logging
from enum import Enum

import networkx as nx
from pydantic import BaseModel, ConfigDict

from constants import ENUM_EDGE_BOUND
from election import (
    EnumerationBoundError,
    Matching,
    VoteSign,
    check_matching,
    label_edges,
)
from instance_model import Edge, Instance, edge_key

logger = logging.getLogger(__name__)

# Shifts every weight above zero; all perfect matchings of the doubled graph have n edges.
_OFFSET = 3


class LoopWeightedGraph(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: Instance
    loop_weight: dict[str, int]
    edge_weight: dict[Edge, int]

    def weight_of(self, N: Matching) -> int:
        """Weight of the perfect matching N plus loops on N-uncovered vertices."""
        total = sum(self.edge_weight[e] for e in N.pairs)
        return total + sum(w for v, w in self.loop_weight.items() if not N.covers(v))


class PopularityVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    popular: bool
    witness: Matching | None = None
    margin: int = 0


def build_weighted_graph(inst: Instance, M: Matching) -> LoopWeightedGraph:
    labels = label_edges(inst, M)
    edge_weight = {}
    for e in inst.edges:
        label = labels.labels.get(e)
        if label == (VoteSign.PLUS, VoteSign.PLUS):
            edge_weight[e] = 2
        elif label == (VoteSign.MINUS, VoteSign.MINUS):
            edge_weight[e] = -2
        else:
            edge_weight[e] = 0
    loop_weight = {v: -1 if M.covers(v) else 0 for v in inst.vertices}
    return LoopWeightedGraph.model_construct(
        base=inst, loop_weight=loop_weight, edge_weight=edge_weight
    )


def _max_weight_perfect(graph: LoopWeightedGraph) -> Matching:
    """Maximum-weight loop-inclusive perfect matching, loops stripped."""
    doubled = nx.Graph()
    for v, w in graph.loop_weight.items():
        doubled.add_edge(("v", v), ("s", v), weight=w + _OFFSET)
    for (u, v), w in graph.edge_weight.items():
        doubled.add_edge(("v", u), ("v", v), weight=w + _OFFSET)
        doubled.add_edge(("s", u), ("s", v), weight=_OFFSET)

    chosen = nx.max_weight_matching(doubled, maxcardinality=True)
    pairs = []
    for a, b in chosen:
        if a[0] == "v" and b[0] == "v":
            pairs.append(edge_key(a[1], b[1]))
    return Matching.trusted(pairs)


def verify_popular(inst: Instance, M: Matching) -> PopularityVerdict:
    graph = build_weighted_graph(inst, M)
    best = _max_weight_perfect(graph)
    margin = graph.weight_of(best)
    if margin <= 0:
        return PopularityVerdict(popular=True)
    logger.debug("matching %s loses to %s by %d", M, best, margin)
    return PopularityVerdict(popular=False, witness=best, margin=margin)


def is_popular(inst: Instance, M: Matching) -> bool:
    """Boolean popularity test with a shortcut for blocking edges at uncovered vertices."""
    labels = label_edges(inst, M)
    for u, v in labels.blocking():
        if not M.covers(u) or not M.covers(v):
            return False
    return verify_popular(inst, M).popular


class CertificateKind(str, Enum):
    CYCLE = "cycle"
    TWO_BLOCKING = "two_blocking"
    UNCOVERED_END = "uncovered_end"


class Certificate(BaseModel):
    """An alternating structure in G_M that proves M unpopular."""

    model_config = ConfigDict(frozen=True)

    kind: CertificateKind
    walk: tuple[str, ...]


def find_alternating_certificate(
    inst: Instance, M: Matching, bound: int = ENUM_EDGE_BOUND
) -> Certificate | None:
    """Search G_M for an alternating cycle with a (+,+) edge, an alternating path with two
    (+,+) edges, or an alternating path with a (+,+) edge ending at an uncovered vertex.

    Exhaustive over simple alternating paths, so only for small instances.
    """
    if inst.m > bound:
        raise EnumerationBoundError(f"instance has {inst.m} edges, search bound is {bound}")
    check_matching(inst, M)
    labels = label_edges(inst, M)
    blocking = labels.blocking()
    usable = {
        u: [v for v in inst.prefs[u] if M.partner(u) != v and not labels.is_minus_minus(u, v)]
        for u in inst.vertices
    }

    for start in inst.vertices:
        found = _search_from(start, M, usable, blocking)
        if found is not None:
            return found
    return None


def _search_from(
    start: str, M: Matching, usable: dict[str, list[str]], blocking: set[Edge]
) -> Certificate | None:
    path = [start]
    on_path = {start}

    def extend(last: str | None, plus: int) -> Certificate | None:
        u = path[-1]
        if plus >= 2:
            return Certificate(kind=CertificateKind.TWO_BLOCKING, walk=tuple(path))
        if plus >= 1 and (not M.covers(start) or not M.covers(u)):
            return Certificate(kind=CertificateKind.UNCOVERED_END, walk=tuple(path))

        if last != "m":
            v = M.partner(u)
            if v is not None and v not in on_path:
                path.append(v)
                on_path.add(v)
                found = extend("m", plus)
                path.pop()
                on_path.discard(v)
                if found is not None:
                    return found

        if last != "n":
            for v in usable[u]:
                gained = plus + (edge_key(u, v) in blocking)
                if v == start and last == "m" and len(path) >= 4 and path[1] == M.partner(start):
                    if gained >= 1:
                        return Certificate(kind=CertificateKind.CYCLE, walk=tuple(path + [start]))
                    continue
                if v in on_path:
                    continue
                path.append(v)
                on_path.add(v)
                found = extend("n", gained)
                path.pop()
                on_path.discard(v)
                if found is not None:
                    return found
        return None

    return extend(None, 0)
