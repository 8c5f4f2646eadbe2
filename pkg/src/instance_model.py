"""
Roommates instances: a graph plus one strict, possibly incomplete preference list per vertex.

Instance file format (UTF-8):

    # comment lines and blank lines are ignored
    4                 <- optional vertex count, checked when present
    a: b d e          <- neighbours of a, most preferred first
    b: d a e
    ...
"""

import re
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

Edge = tuple[str, str]

# Stand-in for "stays unmatched" in preference comparisons
UNMATCHED = None

_TOKEN_RE = re.compile(r"^[^\s:]+$")


class InstanceError(ValueError):
    """Malformed instance text, invalid preference data, or an unknown vertex."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def edge_key(u: str, v: str) -> Edge:
    """Canonical form of the undirected edge {u, v}."""
    return (u, v) if u <= v else (v, u)


def validate_preferences(
    vertices: Sequence[str],
    prefs: Mapping[str, Sequence[str]],
    lines: Mapping[str, int] | None = None,
) -> None:
    """Raise InstanceError unless the preference lists describe a simple undirected graph."""
    lines = lines or {}
    seen = set()
    for u in vertices:
        if not _TOKEN_RE.match(u):
            raise InstanceError(f"invalid vertex token {u!r}", lines.get(u))
        if u in seen:
            raise InstanceError(f"duplicate vertex declaration {u!r}", lines.get(u))
        seen.add(u)

    if set(prefs) != seen:
        extra = sorted(set(prefs) ^ seen)
        raise InstanceError(f"preference lists and vertex declarations differ on {extra}")

    for u in vertices:
        listed = set()
        for v in prefs[u]:
            if v == u:
                raise InstanceError(f"{u} lists itself", lines.get(u))
            if v in listed:
                raise InstanceError(f"{u} lists {v} twice", lines.get(u))
            if v not in seen:
                raise InstanceError(f"{u} lists undeclared vertex {v}", lines.get(u))
            listed.add(v)

    for u in vertices:
        for v in prefs[u]:
            if u not in prefs[v]:
                raise InstanceError(
                    f"symmetry violation: {u} lists {v} but {v} does not list {u}", lines.get(u)
                )


class Instance(BaseModel):
    """An immutable roommates instance. Vertex order is the declaration order."""

    model_config = ConfigDict(frozen=True)

    vertices: tuple[str, ...]
    prefs: dict[str, tuple[str, ...]]

    @model_validator(mode="after")
    def _check_preferences(self) -> "Instance":
        validate_preferences(self.vertices, self.prefs)
        return self

    @classmethod
    def from_prefs(cls, prefs: Mapping[str, Sequence[str]]) -> "Instance":
        """Build a validated instance; dict order gives the declaration order."""
        try:
            return cls(
                vertices=tuple(prefs), prefs={u: tuple(vs) for u, vs in prefs.items()}
            )
        except ValidationError as e:
            raise InstanceError(e.errors()[0]["msg"].removeprefix("Value error, ")) from e

    @cached_property
    def order(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def rank(self) -> dict[str, dict[str, int]]:
        """rank[u][v] is the 0-based position of v in u's list."""
        return {u: {v: i for i, v in enumerate(vs)} for u, vs in self.prefs.items()}

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(
            sorted({edge_key(u, v) for u in self.vertices for v in self.prefs[u]})
        )

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return sum(len(vs) for vs in self.prefs.values()) // 2

    def degree(self, u: str) -> int:
        return len(self.prefs[u])

    def has_edge(self, u: str, v: str) -> bool:
        return u in self.rank and v in self.rank[u]

    def is_complete(self) -> bool:
        return all(self.degree(u) == self.n - 1 for u in self.vertices)

    def sort_vertices(self, vertices: Iterable[str]) -> list[str]:
        """Put a vertex collection into declaration order."""
        return sorted(vertices, key=self.order.__getitem__)

    def check_vertices(self, vertices: Iterable[str]) -> None:
        unknown = [v for v in vertices if v not in self.order]
        if unknown:
            raise InstanceError(f"unknown vertices {sorted(unknown)}")


def parse_instance(text: str | TextIO) -> Instance:
    """Parse the instance file format; errors carry the offending line number."""
    if not isinstance(text, str):
        text = text.read()

    declared_n = None
    vertices: list[str] = []
    prefs: dict[str, tuple[str, ...]] = {}
    lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        if ":" not in line:
            if declared_n is None and not vertices and line.isdigit():
                declared_n = int(line)
                continue
            raise InstanceError(f"expected '<vertex>: <neighbours>', got {line!r}", lineno)

        head, _, tail = line.partition(":")
        u = head.strip()
        if not u or not _TOKEN_RE.match(u):
            raise InstanceError(f"invalid vertex token {u!r}", lineno)
        if ":" in tail:
            raise InstanceError("more than one ':' on a line", lineno)
        if u in prefs:
            raise InstanceError(f"duplicate vertex declaration {u!r}", lineno)

        vertices.append(u)
        prefs[u] = tuple(tail.split())
        lines[u] = lineno

    if declared_n is not None and declared_n != len(vertices):
        raise InstanceError(f"declared {declared_n} vertices but found {len(vertices)}")

    validate_preferences(vertices, prefs, lines)
    return Instance.model_construct(vertices=tuple(vertices), prefs=prefs)


def load_instance(path: Path) -> Instance:
    return parse_instance(path.read_text(encoding="utf-8"))


def serialize_instance(inst: Instance, with_count: bool = False) -> str:
    """Inverse of parse_instance."""
    out = [f"{inst.n}"] if with_count else []
    for u in inst.vertices:
        out.append(f"{u}: {' '.join(inst.prefs[u])}".rstrip())
    return "\n".join(out) + "\n"


def prefers(inst: Instance, u: str, v: str | None, w: str | None) -> bool:
    """True iff u strictly prefers v to w; UNMATCHED ranks below every neighbour."""
    ranks = inst.rank[u]
    worst = len(ranks)
    for x in (v, w):
        if x is not UNMATCHED and x not in ranks:
            raise InstanceError(f"{x} is not a neighbour of {u}")
    rv = worst if v is UNMATCHED else ranks[v]
    rw = worst if w is UNMATCHED else ranks[w]
    return rv < rw


def induced_subgraph(inst: Instance, keep: Iterable[str]) -> Instance:
    """G[keep]: vertices of keep and the edges spanned by them, preference order preserved."""
    keep = set(keep)
    inst.check_vertices(keep)
    vertices = tuple(v for v in inst.vertices if v in keep)
    prefs = {v: tuple(w for w in inst.prefs[v] if w in keep) for v in vertices}
    return Instance.model_construct(vertices=vertices, prefs=prefs)


def remove_edges(inst: Instance, edges: Iterable[Edge]) -> Instance:
    """Drop edges but keep every vertex, isolated ones included."""
    dropped = {edge_key(u, v) for u, v in edges}
    prefs = {
        u: tuple(v for v in inst.prefs[u] if edge_key(u, v) not in dropped)
        for u in inst.vertices
    }
    return Instance.model_construct(vertices=inst.vertices, prefs=prefs)


def neighborhood(inst: Instance, U: Iterable[str]) -> set[str]:
    """N(U): vertices adjacent to at least one vertex of U."""
    U = set(U)
    inst.check_vertices(U)
    return {v for u in U for v in inst.prefs[u]}
