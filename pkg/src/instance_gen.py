"""
Seeded random roommates instances.

Each of the n(n-1)/2 possible edges is drawn independently with probability p; a
graph is kept only if its minimum degree is at least n - c and some vertex has
degree exactly n - c. Every vertex then ranks its neighbours in a uniformly random
order. Instance i of a run with seed s uses its own numpy generator seeded from
SeedSequence(entropy=s, spawn_key=(i,)), so instances can be produced in any order
and on any number of workers.
"""

import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import EDGE_PROBABILITY, REJECTION_CAP
from instance_model import Instance, serialize_instance

logger = logging.getLogger(__name__)


class GenerationError(ValueError):
    """No acceptable graph within the rejection cap."""


class GenConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, description="Number of vertices")
    c: int = Field(ge=1, description="Degree gap: the minimum degree is n - c")
    p: float = Field(default=EDGE_PROBABILITY, ge=0.0, le=1.0, description="Edge probability")
    seed: int = Field(default=0, ge=0, lt=2**64, description="Root seed of the run")
    rejection_cap: int = Field(default=REJECTION_CAP, ge=1, description="Draws per instance")

    @model_validator(mode="after")
    def _check_gap(self) -> "GenConfig":
        if self.c > self.n - 1:
            raise ValueError(f"c must be at most n - 1 = {self.n - 1}, got {self.c}")
        return self

    @property
    def min_degree(self) -> int:
        return self.n - self.c


def vertex_names(n: int) -> list[str]:
    """v0, v1, ... zero-padded so that string order equals declaration order."""
    width = len(str(n - 1))
    return [f"v{i:0{width}d}" for i in range(n)]


def stream_rng(seed: int, stream_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream_index,)))


def _draw_graph(cfg: GenConfig, rng: np.random.Generator) -> np.ndarray | None:
    upper = np.triu_indices(cfg.n, k=1)
    for _ in range(cfg.rejection_cap):
        adj = np.zeros((cfg.n, cfg.n), dtype=bool)
        adj[upper] = rng.random(len(upper[0])) < cfg.p
        adj |= adj.T
        degrees = adj.sum(axis=1)
        if degrees.min() >= cfg.min_degree and (degrees == cfg.min_degree).any():
            return adj
    return None


def gen_instance(cfg: GenConfig, stream_index: int) -> Instance:
    rng = stream_rng(cfg.seed, stream_index)
    adj = _draw_graph(cfg, rng)
    if adj is None:
        raise GenerationError(
            f"no graph with n={cfg.n}, min degree {cfg.min_degree}, p={cfg.p} "
            f"after {cfg.rejection_cap} draws (stream {stream_index})"
        )

    names = vertex_names(cfg.n)
    prefs = {}
    for i, u in enumerate(names):
        neighbours = np.flatnonzero(adj[i])
        prefs[u] = tuple(names[j] for j in rng.permutation(neighbours))
    return Instance.model_construct(vertices=tuple(names), prefs=prefs)


def degree_profile(inst: Instance) -> list[int]:
    """Sorted degree sequence."""
    return sorted(inst.degree(v) for v in inst.vertices)


def write_instances(cfg: GenConfig, count: int, out_dir: Path) -> list[Path]:
    """Write instances 0..count-1 as inst_<index>.txt."""
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        path = out_dir / f"inst_{i}.txt"
        path.write_text(serialize_instance(gen_instance(cfg, i), with_count=True), encoding="utf-8")
        paths.append(path)
    logger.info("wrote %d instances to %s", count, out_dir)
    return paths
