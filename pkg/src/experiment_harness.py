"""
Monte-Carlo counts of random instances without a stable matching, and of those among
them that still admit a popular matching.

A cell (n, c) draws `samples` accepted instances with stream indices 0..samples-1,
runs Irving's algorithm on each and, when it fails, searches for a popular matching
over odd independent sets U with |U| <= c. Stream indices are cut into fixed chunks
that joblib workers tally independently, so the counts never depend on the number
of workers.
"""

import csv
import logging
import time
import warnings
from pathlib import Path
from typing import Iterable

from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, model_validator

from constants import CHUNK_SIZE, CSV_HEADER, PUBLISHED_SAMPLES, PUBLISHED_TABLE
from instance_gen import GenConfig, gen_instance
from popular_search import PreconditionError, SearchMode, solve
from result_cache import cell_key, load_cell, save_cell

logger = logging.getLogger(__name__)


class ExperimentRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    c: int
    p: float
    samples: int = Field(ge=0)
    seed: int
    no_stable: int = Field(ge=0, description="Instances without a stable matching")
    popular_no_stable: int = Field(ge=0, description="... that admit a popular matching")
    elapsed_ms: int = Field(default=0, ge=0)
    cap_disagreements: int = Field(default=0, description="Audit only, not written to CSV")

    @model_validator(mode="after")
    def _check_counts(self) -> "ExperimentRow":
        if not self.popular_no_stable <= self.no_stable <= self.samples:
            raise ValueError(
                f"counts out of order: popular_no_stable={self.popular_no_stable}, "
                f"no_stable={self.no_stable}, samples={self.samples}"
            )
        return self

    def csv_fields(self) -> list:
        return [
            self.n,
            self.c,
            repr(float(self.p)),
            self.samples,
            self.seed,
            self.no_stable,
            self.popular_no_stable,
            self.elapsed_ms,
        ]


class CellComparison(BaseModel):
    n: int
    c: int
    no_stable_rate: float
    published_no_stable_rate: float
    popular_rate: float
    published_popular_rate: float


def _tally_chunk(
    cfg: GenConfig, start: int, stop: int, capped: bool, audit_uncapped: bool
) -> tuple[int, int, int]:
    no_stable = popular = disagreements = 0
    cap = cfg.c if capped else None
    for i in range(start, stop):
        inst = gen_instance(cfg, i)
        result = solve(inst, cap=cap, mode=SearchMode.ODD_EXACT)
        if result.kind == "stable":
            continue
        no_stable += 1
        found = result.kind == "popular"
        popular += found
        if audit_uncapped:
            uncapped = solve(inst, cap=None, mode=SearchMode.ODD_EXACT)
            disagreements += found != (uncapped.kind == "popular")
    return no_stable, popular, disagreements


def _chunks(samples: int) -> list[tuple[int, int]]:
    return [(i, min(i + CHUNK_SIZE, samples)) for i in range(0, samples, CHUNK_SIZE)]


def run_cell(
    n: int,
    c: int,
    p: float,
    samples: int,
    seed: int,
    workers: int = 1,
    capped: bool = True,
    audit_uncapped: bool = False,
    use_cache: bool = True,
) -> ExperimentRow:
    if n % 2 == 0:
        raise PreconditionError(f"experiment cells need an odd n, got {n}")
    cfg = GenConfig(n=n, c=c, p=p, seed=seed)

    params = dict(n=n, c=c, p=p, samples=samples, seed=seed, capped=capped, audit=audit_uncapped)
    key = cell_key(**params)
    if use_cache:
        cached = load_cell(key)
        if cached is not None:
            logger.info("cell n=%d c=%d served from cache", n, c)
            return ExperimentRow.model_validate(cached)

    began = time.perf_counter()
    tallies = Parallel(n_jobs=workers)(
        delayed(_tally_chunk)(cfg, start, stop, capped, audit_uncapped)
        for start, stop in _chunks(samples)
    )
    no_stable = sum(t[0] for t in tallies)
    popular = sum(t[1] for t in tallies)
    disagreements = sum(t[2] for t in tallies)
    elapsed_ms = round((time.perf_counter() - began) * 1000)

    if disagreements:
        warnings.warn(f"cell n={n} c={c}: capped and uncapped search disagree {disagreements} times")
    logger.info(
        "cell n=%d c=%d: %d/%d without stable matching, %d of them popular (%d ms)",
        n, c, no_stable, samples, popular, elapsed_ms,
    )

    row = ExperimentRow(
        n=n,
        c=c,
        p=p,
        samples=samples,
        seed=seed,
        no_stable=no_stable,
        popular_no_stable=popular,
        elapsed_ms=elapsed_ms,
        cap_disagreements=disagreements,
    )
    if use_cache:
        save_cell(key, params, row.model_dump())
    return row


def write_csv(rows: Iterable[ExperimentRow], path: Path, timing: bool = True) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER.split(","))
        for row in rows:
            fields = row.csv_fields()
            if not timing:
                fields[-1] = 0
            writer.writerow(fields)


def run_table(
    cells: Iterable[tuple[int, int]],
    p: float,
    samples: int,
    seed: int,
    workers: int = 1,
    out: Path | None = None,
    capped: bool = True,
    timing: bool = True,
    use_cache: bool = True,
) -> list[ExperimentRow]:
    rows = [
        run_cell(n, c, p, samples, seed, workers=workers, capped=capped, use_cache=use_cache)
        for n, c in cells
    ]
    if out is not None:
        write_csv(rows, out, timing=timing)
    return rows


def compare_with_published(rows: Iterable[ExperimentRow]) -> list[CellComparison]:
    """Observed rates next to the published ones, for cells that appear in the published table."""
    comparisons = []
    for row in rows:
        published = PUBLISHED_TABLE.get((row.n, row.c))
        if published is None or row.samples == 0:
            continue
        comparisons.append(
            CellComparison(
                n=row.n,
                c=row.c,
                no_stable_rate=row.no_stable / row.samples,
                published_no_stable_rate=published[0] / PUBLISHED_SAMPLES,
                popular_rate=row.popular_no_stable / row.samples,
                published_popular_rate=published[1] / PUBLISHED_SAMPLES,
            )
        )
    return comparisons
