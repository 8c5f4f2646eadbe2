"""
Caching layer for experiment cells, so that re-running a table only computes new cells.

Set POPROOM_DISABLE_CACHE=true to disable caching entirely.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict

from constants import CACHE_DIR, DISABLE_CACHE


def _ensure_cache_dir():
    if not DISABLE_CACHE:
        CACHE_DIR.mkdir(parents=True, exist_ok=True)


def cell_key(**params) -> str:
    """Deterministic hash of the parameters that determine a cell's counts."""
    request_str = json.dumps({"kind": "cell", **params}, sort_keys=True, default=str)
    return hashlib.sha256(request_str.encode()).hexdigest()[:16]


def _cache_file(key: str) -> Path:
    return CACHE_DIR / f"cell_{key}.json"


def load_cell(key: str) -> Dict[str, Any] | None:
    cache_file = _cache_file(key)
    if cache_file.exists() and not DISABLE_CACHE:
        try:
            return json.loads(cache_file.read_text())["output"]
        except (json.JSONDecodeError, KeyError, OSError):
            # Corrupted entries are recomputed
            return None
    return None


def save_cell(key: str, params: Dict[str, Any], output: Dict[str, Any]):
    if not DISABLE_CACHE:
        _ensure_cache_dir()
        try:
            _cache_file(key).write_text(
                json.dumps({"params": params, "output": output}, indent=2, default=str)
            )
        except OSError:
            # An unwritable cache only costs recomputation
            pass


def get_cache_stats() -> Dict[str, int]:
    if DISABLE_CACHE or not CACHE_DIR.exists():
        return {"total_cached": 0, "bytes": 0}
    files = list(CACHE_DIR.glob("cell_*.json"))
    return {"total_cached": len(files), "bytes": sum(f.stat().st_size for f in files)}


def clear_cache() -> int:
    """Delete all cached cells; returns how many were removed."""
    if not CACHE_DIR.exists():
        return 0
    removed = 0
    for cache_file in CACHE_DIR.glob("cell_*.json"):
        cache_file.unlink()
        removed += 1
    return removed
