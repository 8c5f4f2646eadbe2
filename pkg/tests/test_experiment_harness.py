import pytest
from joblib import parallel_config
from pydantic import ValidationError

import experiment_harness
import result_cache
from constants import CSV_HEADER, PUBLISHED_TABLE
from experiment_harness import (
    ExperimentRow,
    compare_with_published,
    run_cell,
    run_table,
    write_csv,
)
from popular_search import PreconditionError


def test_empty_cell():
    row = run_cell(7, 3, 0.8, samples=0, seed=1)
    assert (row.no_stable, row.popular_no_stable) == (0, 0)


def test_even_n_is_rejected():
    with pytest.raises(PreconditionError):
        run_cell(8, 3, 0.8, samples=10, seed=1)


def test_counter_sandwich_is_enforced():
    with pytest.raises(ValidationError):
        ExperimentRow(n=7, c=3, p=0.8, samples=5, seed=0, no_stable=2, popular_no_stable=3)
    with pytest.raises(ValidationError):
        ExperimentRow(n=7, c=3, p=0.8, samples=5, seed=0, no_stable=6, popular_no_stable=0)


def test_small_cell_counts_are_ordered():
    row = run_cell(7, 5, 0.8, samples=200, seed=3, use_cache=False)
    assert 0 < row.no_stable < 200
    assert row.popular_no_stable <= row.no_stable


def test_worker_count_does_not_change_counts(monkeypatch):
    monkeypatch.setattr(experiment_harness, "CHUNK_SIZE", 40)
    single = run_cell(7, 4, 0.8, samples=200, seed=8, workers=1, use_cache=False)
    with parallel_config(backend="threading"):
        several = run_cell(7, 4, 0.8, samples=200, seed=8, workers=3, use_cache=False)
    assert (single.no_stable, single.popular_no_stable) == (
        several.no_stable,
        several.popular_no_stable,
    )


def test_cap_audit_finds_no_disagreement():
    row = run_cell(7, 4, 0.8, samples=150, seed=2, audit_uncapped=True, use_cache=False)
    assert row.cap_disagreements == 0


def test_cells_are_cached():
    first = run_cell(7, 3, 0.8, samples=60, seed=4)
    assert result_cache.get_cache_stats()["total_cached"] == 1
    second = run_cell(7, 3, 0.8, samples=60, seed=4)
    assert second == first, "a cached cell comes back unchanged, timing included"
    assert result_cache.clear_cache() == 1


def test_csv_is_byte_identical_without_timing(tmp_path):
    cells = [(7, 3), (9, 3)]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_table(cells, 0.8, 50, seed=6, workers=1, out=a, timing=False, use_cache=False)
    with parallel_config(backend="threading"):
        run_table(cells, 0.8, 50, seed=6, workers=2, out=b, timing=False, use_cache=False)
    assert a.read_bytes() == b.read_bytes()

    lines = a.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1].startswith("7,3,0.8,50,6,")
    assert lines[1].endswith(",0")


def test_write_csv_keeps_timing(tmp_path):
    row = ExperimentRow(n=7, c=3, p=0.8, samples=10, seed=0, no_stable=4, popular_no_stable=1, elapsed_ms=12)
    path = tmp_path / "rows.csv"
    write_csv([row], path)
    assert path.read_text() == f"{CSV_HEADER}\n7,3,0.8,10,0,4,1,12\n"


def test_compare_with_published():
    rows = [
        ExperimentRow(n=7, c=3, p=0.8, samples=1000, seed=0, no_stable=380, popular_no_stable=1),
        ExperimentRow(n=13, c=3, p=0.8, samples=1000, seed=0, no_stable=500, popular_no_stable=0),
    ]
    (cmp,) = compare_with_published(rows)
    assert (cmp.n, cmp.c) == (7, 3)
    assert cmp.no_stable_rate == pytest.approx(0.38)
    assert cmp.published_no_stable_rate == pytest.approx(PUBLISHED_TABLE[(7, 3)][0] / 1e6)


@pytest.mark.slow
def test_replicates_published_rates():
    row = run_cell(7, 3, 0.8, samples=200_000, seed=2024, workers=-1, use_cache=False)
    assert abs(row.no_stable / row.samples - 0.3847) < 0.006
    assert 10 <= row.popular_no_stable <= 55

    row = run_cell(7, 5, 0.8, samples=100_000, seed=2024, workers=-1, use_cache=False)
    assert abs(row.no_stable / row.samples - 0.2119) < 0.006
    assert abs(row.popular_no_stable - 820) <= 115


@pytest.mark.slow
def test_directional_trends():
    base = run_cell(7, 3, 0.8, samples=50_000, seed=77, workers=-1, use_cache=False)
    more_vertices = run_cell(9, 3, 0.8, samples=50_000, seed=77, workers=-1, use_cache=False)
    wider_gap = run_cell(7, 5, 0.8, samples=50_000, seed=77, workers=-1, use_cache=False)
    assert more_vertices.no_stable > base.no_stable
    assert wider_gap.popular_no_stable > base.popular_no_stable
