#!/usr/bin/env python3
"""
CLI tool for managing the experiment result cache.
"""

import typer

import result_cache

app = typer.Typer(help="Manage cached experiment cells")


@app.command()
def stats():
    """Show cache statistics."""
    if result_cache.DISABLE_CACHE:
        typer.echo("Cache is disabled (POPROOM_DISABLE_CACHE=true)")
        return

    stats = result_cache.get_cache_stats()
    typer.echo(f"location: {result_cache.CACHE_DIR}")
    typer.echo(f"cells: {stats['total_cached']}")
    typer.echo(f"bytes: {stats['bytes']}")


@app.command()
def clear(
    yes: bool = typer.Option(False, "--yes", "-y", help="Do not ask for confirmation."),
):
    """Delete all cached cells."""
    if not yes and not typer.confirm("Delete all cached experiment cells?"):
        typer.echo("Cache clear cancelled")
        return
    removed = result_cache.clear_cache()
    typer.secho(f"Removed {removed} cached cells", fg=typer.colors.GREEN)


@app.command()
def location():
    """Show cache directory location."""
    typer.echo(f"{result_cache.CACHE_DIR.absolute()}")
    if result_cache.DISABLE_CACHE:
        typer.echo("Cache is currently disabled (POPROOM_DISABLE_CACHE=true)")


if __name__ == "__main__":
    app()
