"""
Search for popular matchings that leave a prescribed vertex set U uncovered.

For a candidate U, every popular but unstable matching P uncovering exactly U splits
into a "popular part" P_Z, covering the vertices Z that are neither in U nor next to
it, and a "stable part" S on the remaining vertices. check_U enumerates the candidate
P_Z, screens each with two cheap tests, and then looks for a fitting S as a complete
stable matching of an edge-pruned graph.

solve and max_size_popular scan candidate sets U in ascending size.
"""

import itertools
import logging
import warnings
from enum import Enum
from typing import Iterable, Iterator, Literal

from pydantic import BaseModel, ConfigDict

from election import (
    Matching,
    blocking_edges,
    format_edges,
    label_edges,
    oracle_popular_matchings,
)
from instance_model import (
    Edge,
    Instance,
    edge_key,
    induced_subgraph,
    neighborhood,
    prefers,
    remove_edges,
)
from popularity_verifier import is_popular
from stable_solver import find_complete_stable, find_stable

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """A candidate set or search mode that the search is not defined for."""


class SearchMode(str, Enum):
    ODD_EXACT = "odd-exact"
    NONPERFECT = "nonperfect"
    ORACLE = "oracle"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL_TEST1 = "fail:test1"
    FAIL_TEST2 = "fail:test2"
    FAIL_TEST3 = "fail:test3"


class SearchContext(BaseModel):
    """One attempt: the candidate U, its Z, a popular part P_Z and the graphs derived from them."""

    model_config = ConfigDict(frozen=True)

    U: frozenset[str]
    Z: frozenset[str]
    PZ: Matching
    gprime: Instance
    vprime: frozenset[str]
    rest: frozenset[str]
    D: frozenset[str] = frozenset()


class CheckUResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    matching: Matching | None = None
    attempts: int = 0

    @property
    def found(self) -> bool:
        return self.matching is not None


class SolveResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["stable", "popular", "none"]
    matching: Matching | None = None
    uncovered: tuple[str, ...] = ()


class TraceRow(BaseModel):
    """One (U, P_Z) attempt of check_U."""

    model_config = ConfigDict(frozen=True)

    U: tuple[str, ...]
    PZ: Matching
    gprime_vertices: tuple[str, ...]
    gprime_edges: tuple[Edge, ...]
    verdict: Verdict

    def format(self) -> str:
        return (
            f"U={{{','.join(self.U)}}} PZ={{{format_edges(self.PZ.pairs, ',')}}} "
            f"Gprime_V={{{','.join(self.gprime_vertices)}}} "
            f"Gprime_E={{{format_edges(self.gprime_edges, ',')}}} "
            f"verdict={self.verdict.value}"
        )


def compute_Z(inst: Instance, U: Iterable[str]) -> set[str]:
    """Vertices outside U with no neighbour in U."""
    U = set(U)
    if not U:
        raise PreconditionError("U must be non-empty")
    blocked = U | neighborhood(inst, U)
    return {v for v in inst.vertices if v not in blocked}


def enumerate_PZ(inst: Instance, U: Iterable[str], Z: Iterable[str]) -> Iterator[Matching]:
    """Matchings covering Z in which every edge touches Z.

    Z vertices are handled in declaration order, each trying partners in its preference order.
    """
    U = set(U)
    order = inst.sort_vertices(Z)
    matched: set[str] = set()
    pairs: list[Edge] = []

    def extend(i: int) -> Iterator[Matching]:
        while i < len(order) and order[i] in matched:
            i += 1
        if i == len(order):
            yield Matching.trusted(pairs)
            return
        z = order[i]
        for v in inst.prefs[z]:
            if v in U or v in matched:
                continue
            matched.update((z, v))
            pairs.append((z, v))
            yield from extend(i + 1)
            pairs.pop()
            matched.difference_update((z, v))

    yield from extend(0)


def build_context(inst: Instance, U: Iterable[str], Z: Iterable[str], PZ: Matching) -> SearchContext:
    U, Z = frozenset(U), frozenset(Z)
    vprime = frozenset(U | Z | {PZ.partner(z) for z in Z})
    rest = frozenset(v for v in inst.vertices if v not in vprime)
    return SearchContext(
        U=U, Z=Z, PZ=PZ, gprime=induced_subgraph(inst, vprime), vprime=vprime, rest=rest
    )


def test1_popular_in_Gprime(ctx: SearchContext) -> bool:
    return is_popular(ctx.gprime, ctx.PZ)


def test2_has_blocking_edge(ctx: SearchContext) -> bool:
    return bool(blocking_edges(ctx.gprime, ctx.PZ))


# pytest would otherwise collect these when a test module imports them by name
test1_popular_in_Gprime.__test__ = False
test2_has_blocking_edge.__test__ = False


def compute_dangerous_set(ctx: SearchContext) -> set[str]:
    """Far ends z of matching edges (P_Z(z), z) on simple alternating paths that start with a
    blocking edge in G' minus its (-,-) edges."""
    G, PZ = ctx.gprime, ctx.PZ
    labels = label_edges(G, PZ)
    usable = {
        u: [v for v in G.prefs[u] if PZ.partner(u) != v and not labels.is_minus_minus(u, v)]
        for u in G.vertices
    }
    dangerous: set[str] = set()
    path: list[str] = []

    def walk_matching_edge() -> None:
        # path ends with a non-matching edge; continue along the matching edge
        x = path[-1]
        z = PZ.partner(x)
        if z is None or z in path:
            return
        dangerous.add(z)
        path.append(z)
        for w in usable[z]:
            if w not in path:
                path.append(w)
                walk_matching_edge()
                path.pop()
        path.pop()

    for p, q in sorted(labels.blocking()):
        for a, b in ((p, q), (q, p)):
            path[:] = [a, b]
            walk_matching_edge()

    return dangerous


def phase1_danger_check(inst: Instance, ctx: SearchContext) -> bool:
    """False when a dangerous vertex would vote '+' for an edge into V \\ V'."""
    for z in inst.sort_vertices(ctx.D):
        for x in inst.prefs[z]:
            if x in ctx.rest and prefers(inst, z, x, ctx.PZ.partner(z)):
                logger.debug("dangerous %s prefers %s to %s", z, x, ctx.PZ.partner(z))
                return False
    return True


def deletion_rounds(inst: Instance, ctx: SearchContext) -> Instance:
    """G[V \\ V'] with every edge removed that would give a '+' vote at a vertex of V \\ V'
    against U, D, or a vertex of V' \\ (D u U) that itself prefers that vertex."""
    rank = inst.rank
    # bound[x]: best rank among vertices that x must not prefer its partner less than
    bound: dict[str, int] = {}

    def tighten(x: str, t: str) -> None:
        bound[x] = min(bound.get(x, len(rank[x])), rank[x][t])

    for u in inst.sort_vertices(ctx.U):
        for x in inst.prefs[u]:
            if x in ctx.rest:
                tighten(x, u)
    for z in inst.sort_vertices(ctx.D):
        for x in inst.prefs[z]:
            if x in ctx.rest:
                tighten(x, z)
    for v in inst.sort_vertices(ctx.vprime - ctx.D - ctx.U):
        for x in inst.prefs[v]:
            if x in ctx.rest and prefers(inst, v, x, ctx.PZ.partner(v)):
                tighten(x, v)

    reduced = induced_subgraph(inst, ctx.rest)
    deleted = set()
    for x, limit in bound.items():
        for y in reduced.prefs[x]:
            if rank[x][y] > limit:
                deleted.add(edge_key(x, y))
    if deleted:
        logger.debug("deletion rounds drop %s", format_edges(deleted))
    return remove_edges(reduced, deleted)


def _check_candidate(inst: Instance, U: set[str]) -> None:
    if not U:
        raise PreconditionError("U must be non-empty")
    inst.check_vertices(U)
    for u in U:
        spanned = U.intersection(inst.prefs[u])
        if spanned:
            raise PreconditionError(f"U spans the edge ({u},{min(spanned)})")
    if (inst.n - len(U)) % 2:
        raise PreconditionError(f"{inst.n - len(U)} covered vertices is odd")


def check_U(
    inst: Instance,
    U: Iterable[str],
    trace: list[TraceRow] | None = None,
    assume_unstable: bool = False,
) -> CheckUResult:
    """A popular matching leaving exactly U uncovered, or none.

    Defined for instances without a stable matching; assume_unstable skips the
    Irving run that enforces this when the caller has already done it.
    """
    U = set(U)
    _check_candidate(inst, U)
    if not assume_unstable and find_stable(inst).found:
        raise PreconditionError("instance admits a stable matching")

    Z = compute_Z(inst, U)
    u_sorted = tuple(inst.sort_vertices(U))
    attempts = 0

    for PZ in enumerate_PZ(inst, U, Z):
        attempts += 1
        ctx = build_context(inst, U, Z, PZ)
        verdict, matching = _attempt(inst, ctx)
        logger.debug("U=%s PZ=%s -> %s", u_sorted, PZ, verdict.value)
        if trace is not None:
            trace.append(
                TraceRow(
                    U=u_sorted,
                    PZ=PZ,
                    gprime_vertices=ctx.gprime.vertices,
                    gprime_edges=ctx.gprime.edges,
                    verdict=verdict,
                )
            )
        if matching is not None:
            return CheckUResult(matching=matching, attempts=attempts)

    return CheckUResult(attempts=attempts)


def _attempt(inst: Instance, ctx: SearchContext) -> tuple[Verdict, Matching | None]:
    if not test1_popular_in_Gprime(ctx):
        return Verdict.FAIL_TEST1, None
    if not test2_has_blocking_edge(ctx):
        return Verdict.FAIL_TEST2, None
    ctx = ctx.model_copy(update={"D": frozenset(compute_dangerous_set(ctx))})
    if not phase1_danger_check(inst, ctx):
        return Verdict.FAIL_TEST3, None
    completion = find_complete_stable(deletion_rounds(inst, ctx))
    if not completion.found:
        return Verdict.FAIL_TEST3, None
    return Verdict.PASS, ctx.PZ.union(completion.matching)


def candidate_sets(inst: Instance, cap: int | None = None) -> Iterator[tuple[str, ...]]:
    """Non-empty independent sets U with n - |U| even: ascending size, then lexicographic
    in declaration order."""
    top = inst.n if cap is None else min(cap, inst.n)
    first = 2 if inst.n % 2 == 0 else 1
    for k in range(first, top + 1, 2):
        for U in itertools.combinations(inst.vertices, k):
            if all(not inst.has_edge(u, v) for u, v in itertools.combinations(U, 2)):
                yield U


def _warn_if_cap_unjustified(inst: Instance, cap: int | None) -> None:
    if cap is None or inst.n == 0:
        return
    min_degree = min(inst.degree(v) for v in inst.vertices)
    if min_degree < inst.n - cap:
        warnings.warn(
            f"cap {cap} is not justified: min degree {min_degree} < n - cap = {inst.n - cap}"
        )


def _oracle_choice(inst: Instance) -> SolveResult:
    populars = oracle_popular_matchings(inst)
    if not populars:
        return SolveResult(kind="none")

    def key(M: Matching) -> tuple:
        U = inst.sort_vertices(M.uncovered(inst))
        return (len(U), [inst.order[v] for v in U], M.pairs)

    best = min(populars, key=key)
    return SolveResult(
        kind="popular", matching=best, uncovered=tuple(inst.sort_vertices(best.uncovered(inst)))
    )


def solve(
    inst: Instance,
    cap: int | None = None,
    mode: SearchMode = SearchMode.ODD_EXACT,
    trace: list[TraceRow] | None = None,
) -> SolveResult:
    """Stable matching if one exists, else the first popular matching found scanning U."""
    if mode == SearchMode.ODD_EXACT and inst.n % 2 == 0:
        raise PreconditionError("odd-exact mode needs an odd number of vertices")
    if mode == SearchMode.NONPERFECT and inst.n % 2:
        raise PreconditionError("nonperfect mode is for an even number of vertices")

    stable = find_stable(inst)
    if stable.found:
        return SolveResult(
            kind="stable",
            matching=stable.matching,
            uncovered=tuple(inst.sort_vertices(stable.matching.uncovered(inst))),
        )

    if mode == SearchMode.ORACLE:
        return _oracle_choice(inst)

    if inst.n % 2 and inst.is_complete():
        # every independent U is a single vertex with Z empty
        logger.debug("complete graph of odd order without stable matching")
        return SolveResult(kind="none")

    _warn_if_cap_unjustified(inst, cap)
    return _scan(inst, cap, trace)


def _scan(
    inst: Instance,
    cap: int | None,
    trace: list[TraceRow] | None,
    stable_uncovered: tuple[str, ...] | None = None,
    stable: Matching | None = None,
) -> SolveResult:
    checked = 0
    for U in candidate_sets(inst, cap):
        if stable is not None and U == stable_uncovered:
            return SolveResult(kind="stable", matching=stable, uncovered=U)
        checked += 1
        result = check_U(inst, U, trace=trace, assume_unstable=True)
        if result.found:
            logger.info("popular matching uncovering %s after %d candidate sets", U, checked)
            return SolveResult(kind="popular", matching=result.matching, uncovered=U)
    logger.info("no popular matching among %d candidate sets", checked)
    if stable is not None:
        return SolveResult(kind="stable", matching=stable, uncovered=stable_uncovered)
    return SolveResult(kind="none")


def max_size_popular(
    inst: Instance, cap: int | None = None, trace: list[TraceRow] | None = None
) -> SolveResult:
    """A popular matching of maximum size.

    A stable matching is a popular matching of minimum size, so it is only returned
    when no candidate set smaller than its uncovered set admits a popular matching.
    Even instances go to the exhaustive oracle and leave no trace rows.
    """
    stable = find_stable(inst)
    if inst.n % 2 == 0:
        if stable.found and len(stable.matching) * 2 == inst.n:
            return SolveResult(kind="stable", matching=stable.matching)
        return _oracle_choice(inst)

    if not stable.found:
        return solve(inst, cap=cap, mode=SearchMode.ODD_EXACT, trace=trace)

    uncovered = tuple(inst.sort_vertices(stable.matching.uncovered(inst)))
    if len(uncovered) == 1:
        return SolveResult(kind="stable", matching=stable.matching, uncovered=uncovered)
    _warn_if_cap_unjustified(inst, cap)
    return _scan(inst, cap, trace, stable_uncovered=uncovered, stable=stable.matching)
