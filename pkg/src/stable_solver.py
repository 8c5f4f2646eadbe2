"""
Irving's stable roommates algorithm for strict, possibly incomplete preference lists.

Phase 1 is a round of proposals that reduces every list to a "stable table";
a vertex whose list runs empty in phase 1 is uncovered in every stable matching.
Phase 2 eliminates rotations until every list has at most one entry; a list that
runs empty in phase 2 proves that no stable matching exists.
"""

import logging
from collections import deque

from pydantic import BaseModel, ConfigDict

from election import Matching, blocking_edges, check_matching
from instance_model import Instance, edge_key

logger = logging.getLogger(__name__)


class StableResult(BaseModel):
    """Either stable(matching) or none (matching is None)."""

    model_config = ConfigDict(frozen=True)

    matching: Matching | None = None

    @property
    def found(self) -> bool:
        return self.matching is not None


def is_stable(inst: Instance, M: Matching) -> bool:
    check_matching(inst, M)
    return not blocking_edges(inst, M)


def _delete_pair(lists: dict[str, list[str]], u: str, v: str) -> None:
    lists[u].remove(v)
    lists[v].remove(u)


def _phase_one(inst: Instance) -> dict[str, list[str]]:
    lists = {u: list(inst.prefs[u]) for u in inst.vertices}
    rank = inst.rank
    holds: dict[str, str] = {}
    free = deque(u for u in inst.vertices if lists[u])

    while free:
        x = free.popleft()
        while lists[x]:
            y = lists[x][0]
            current = holds.get(y)
            if current is not None and rank[y][current] < rank[y][x]:
                _delete_pair(lists, x, y)
                continue
            holds[y] = x
            cut = lists[y].index(x) + 1
            for w in lists[y][cut:]:
                _delete_pair(lists, y, w)
            if current is not None:
                free.append(current)
            break

    return lists


def _phase_two(inst: Instance, lists: dict[str, list[str]]) -> bool:
    """Eliminate rotations in place; False when some list runs empty."""
    active = [u for u in inst.vertices if lists[u]]
    rotations = 0

    while True:
        start = next((u for u in active if len(lists[u]) >= 2), None)
        if start is None:
            logger.debug("phase 2 finished after %d rotations", rotations)
            return True

        sequence: list[str] = []
        position: dict[str, int] = {}
        p = start
        while p not in position:
            position[p] = len(sequence)
            sequence.append(p)
            q = lists[p][1]
            p = lists[q][-1]

        rotation = [(x, lists[x][1]) for x in sequence[position[p] :]]
        for x, q in rotation:
            if x not in lists[q]:
                # an earlier pair of this rotation already cut x off: x's list runs empty
                logger.debug("rotation %d removed %s from the list of %s", rotations + 1, x, q)
                return False
            cut = lists[q].index(x) + 1
            for w in lists[q][cut:]:
                _delete_pair(lists, q, w)
        rotations += 1

        if any(not lists[u] for u in active):
            logger.debug("list emptied while eliminating rotation %d", rotations)
            return False


def find_stable(inst: Instance) -> StableResult:
    lists = _phase_one(inst)
    if not _phase_two(inst, lists):
        return StableResult()
    pairs = {edge_key(u, vs[0]) for u, vs in lists.items() if vs}
    return StableResult(matching=Matching.trusted(pairs))


def find_complete_stable(inst: Instance) -> StableResult:
    """A stable matching covering every vertex, or none.

    All stable matchings cover the same vertex set, so one probe decides.
    """
    result = find_stable(inst)
    if result.found and len(result.matching.uncovered(inst)) == 0:
        return result
    return StableResult()
