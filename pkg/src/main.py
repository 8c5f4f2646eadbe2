"""
Command-line entry point.

Exit codes: 0 when something was found (or a matching is popular), 1 when nothing
was found, 2 on usage or input errors.
"""

import logging
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import NoReturn, Optional

import typer
from typing_extensions import Annotated

from cache_cli import app as cache_app
from constants import CSV_HEADER, DEFAULT_SAMPLES, EDGE_PROBABILITY, STUDY_CELLS
from election import best_response, format_edges, parse_matching
from experiment_harness import compare_with_published, run_table, write_csv
from instance_gen import GenConfig, write_instances
from instance_model import load_instance
from popular_search import SearchMode, SolveResult, TraceRow, check_U, max_size_popular, solve
from popularity_verifier import find_alternating_certificate, verify_popular
from stable_solver import find_stable

app = typer.Typer(help="Popular and stable matchings in roommates instances", no_args_is_help=True)
app.add_typer(cache_app, name="cache")


class VerifyMethod(str, Enum):
    WEIGHTED = "weighted"
    ORACLE = "oracle"
    CERTIFICATE = "certificate"


InstanceFile = Annotated[
    Path,
    typer.Argument(exists=True, dir_okay=False, readable=True, help="Instance file."),
]
CapOption = Annotated[Optional[int], typer.Option(min=1, help="Only try |U| <= cap.")]
TraceOption = Annotated[bool, typer.Option("--trace", help="Print one line per (U, P_Z) attempt.")]


@app.callback()
def configure(
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Log progress to stderr.")] = False,
) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@contextmanager
def _reported_errors():
    try:
        yield
    except (ValueError, OSError) as e:
        typer.secho(f"error: {e}", err=True, fg=typer.colors.RED)
        raise typer.Exit(code=2)


def _exit_found(found: bool) -> NoReturn:
    raise typer.Exit(code=0 if found else 1)


def _echo_result(result: SolveResult, trace: list[TraceRow]) -> NoReturn:
    for row in trace:
        typer.echo(row.format())
    if result.kind == "stable":
        typer.echo(f"STABLE {result.matching}".rstrip())
    elif result.kind == "popular":
        edges = format_edges(result.matching.pairs)
        typer.echo(f"POPULAR uncovered={{{','.join(result.uncovered)}}} {edges}".rstrip())
    else:
        typer.echo("NONE")
    _exit_found(result.kind != "none")


@app.command("solve")
def solve_command(
    instance: InstanceFile,
    cap: CapOption = None,
    mode: Annotated[
        Optional[SearchMode],
        typer.Option(help="Defaults to odd-exact for odd n and nonperfect for even n."),
    ] = None,
    max_size: Annotated[
        bool, typer.Option("--max-size", help="Look for a popular matching of maximum size.")
    ] = False,
    trace: TraceOption = False,
) -> None:
    """Print a stable matching, else a popular one, else NONE."""
    rows: list[TraceRow] = []
    if max_size and mode is not None:
        raise typer.BadParameter("--max-size picks its own search mode", param_hint="--mode")
    with _reported_errors():
        inst = load_instance(instance)
        if max_size:
            result = max_size_popular(inst, cap=cap, trace=rows if trace else None)
        else:
            if mode is None:
                mode = SearchMode.ODD_EXACT if inst.n % 2 else SearchMode.NONPERFECT
            result = solve(inst, cap=cap, mode=mode, trace=rows if trace else None)
    _echo_result(result, rows)


@app.command("check-u")
def check_u_command(
    instance: InstanceFile,
    uncovered: Annotated[str, typer.Option(help="Comma-separated vertices to leave uncovered.")],
    trace: TraceOption = False,
) -> None:
    """Look for a popular matching leaving exactly the given vertices uncovered."""
    rows: list[TraceRow] = []
    U = [v.strip() for v in uncovered.split(",") if v.strip()]
    with _reported_errors():
        inst = load_instance(instance)
        found = check_U(inst, U, trace=rows)
    U = inst.sort_vertices(U)
    if found.found:
        result = SolveResult(kind="popular", matching=found.matching, uncovered=tuple(U))
    else:
        result = SolveResult(kind="none")
    _echo_result(result, rows if trace else [])


@app.command("stable")
def stable_command(instance: InstanceFile) -> None:
    """Irving's algorithm: print a stable matching or NONE."""
    with _reported_errors():
        result = find_stable(load_instance(instance))
    if result.found:
        typer.echo(f"STABLE {result.matching}".rstrip())
    else:
        typer.echo("NONE")
    _exit_found(result.found)


@app.command("verify")
def verify_command(
    instance: InstanceFile,
    matching: Annotated[
        Path, typer.Argument(exists=True, dir_okay=False, help="Matching file, one edge per line.")
    ],
    method: Annotated[VerifyMethod, typer.Option(help="How to decide popularity.")] = (
        VerifyMethod.WEIGHTED
    ),
) -> None:
    """Print POPULAR, or NOT_POPULAR with a matching that wins the election."""
    with _reported_errors():
        inst = load_instance(instance)
        M = parse_matching(matching.read_text(encoding="utf-8"), inst)
        if method == VerifyMethod.CERTIFICATE:
            certificate = find_alternating_certificate(inst, M)
        elif method == VerifyMethod.ORACLE:
            margin, witness = best_response(inst, M)
        else:
            verdict = verify_popular(inst, M)
            margin, witness = verdict.margin, verdict.witness

    if method == VerifyMethod.CERTIFICATE:
        if certificate is None:
            typer.echo("POPULAR")
        else:
            walk = ",".join(certificate.walk)
            typer.echo(f"NOT_POPULAR certificate={certificate.kind.value} walk={walk}")
        _exit_found(certificate is None)

    if margin <= 0:
        typer.echo("POPULAR")
    else:
        typer.echo(f"NOT_POPULAR margin={margin} witness={format_edges(witness.pairs)}")
    _exit_found(margin <= 0)


@app.command("generate")
def generate_command(
    n: Annotated[int, typer.Option("--n", help="Number of vertices.")],
    c: Annotated[int, typer.Option("--c", help="Degree gap: minimum degree n - c.")],
    out: Annotated[Path, typer.Option(file_okay=False, help="Output directory.")],
    p: Annotated[float, typer.Option("--p", help="Edge probability.")] = EDGE_PROBABILITY,
    count: Annotated[int, typer.Option(min=0, help="Number of instances.")] = 1,
    seed: Annotated[int, typer.Option(min=0, help="Root seed.")] = 0,
) -> None:
    """Write random instances as inst_<index>.txt."""
    with _reported_errors():
        cfg = GenConfig(n=n, c=c, p=p, seed=seed)
        paths = write_instances(cfg, count, out)
    typer.secho(f"Wrote {len(paths)} instances to {out}", fg=typer.colors.GREEN, err=True)


def _parse_cells(cells: str | None) -> list[tuple[int, int]]:
    if not cells:
        return list(STUDY_CELLS)
    parsed = []
    for item in cells.split(","):
        n, sep, c = item.strip().partition(":")
        if not sep or not n.isdigit() or not c.isdigit():
            raise ValueError(f"cells are written n:c, got {item!r}")
        parsed.append((int(n), int(c)))
    return parsed


@app.command("experiment")
def experiment_command(
    cells: Annotated[
        Optional[str],
        typer.Option(help="Comma-separated n:c cells, e.g. 7:3,9:3. Defaults to the full grid."),
    ] = None,
    p: Annotated[float, typer.Option("--p", help="Edge probability.")] = EDGE_PROBABILITY,
    samples: Annotated[int, typer.Option(min=0, help="Instances per cell.")] = DEFAULT_SAMPLES,
    seed: Annotated[int, typer.Option(min=0, help="Root seed.")] = 0,
    threads: Annotated[int, typer.Option(min=1, help="joblib workers.")] = 1,
    out: Annotated[Optional[Path], typer.Option(dir_okay=False, help="CSV file.")] = None,
    uncapped: Annotated[
        bool, typer.Option("--uncapped", help="Try every odd independent U, not only |U| <= c.")
    ] = False,
    timing: Annotated[
        bool, typer.Option("--timing/--no-timing", help="--no-timing writes elapsed_ms=0.")
    ] = True,
    cache: Annotated[bool, typer.Option("--cache/--no-cache", help="Reuse cached cells.")] = True,
    compare: Annotated[
        bool, typer.Option("--compare", help="Print observed rates next to the published ones.")
    ] = False,
) -> None:
    """Count instances without a stable matching and those with a popular one."""
    with _reported_errors():
        rows = run_table(
            _parse_cells(cells),
            p=p,
            samples=samples,
            seed=seed,
            workers=threads,
            capped=not uncapped,
            use_cache=cache,
        )
        if out is not None:
            write_csv(rows, out, timing=timing)
            typer.secho(f"Wrote {len(rows)} rows to {out}", fg=typer.colors.GREEN, err=True)

    if out is None:
        typer.echo(CSV_HEADER)
        for row in rows:
            fields = row.csv_fields()
            if not timing:
                fields[-1] = 0
            typer.echo(",".join(str(f) for f in fields))

    if compare:
        for cmp in compare_with_published(rows):
            typer.echo(
                f"n={cmp.n} c={cmp.c} no_stable={cmp.no_stable_rate:.4f} "
                f"(published {cmp.published_no_stable_rate:.4f}) "
                f"popular_no_stable={cmp.popular_rate:.6f} "
                f"(published {cmp.published_popular_rate:.6f})"
            )


if __name__ == "__main__":
    app()
