"""Results-folder persistence.

One experiment writes one folder::

    <out>/
      config.json            complete run configuration
      run_meta.json          wall-clock bookkeeping (the only timestamps)
      summary_metrics.json   per-metric mean/std series over seeds
      seed_<i>/
        status.json          pending/running/done/failed + progress
        stories.json         every story with its raw response
        similarity_matrix.csv
        metrics.json         per-generation metric series
        keywords.json        per-story keywords and word chains
        layout.json          force-directed story graph

All JSON is UTF-8 with sorted keys; files are written to a temp name and
renamed into place, so readers never observe half-written content.  With
deterministic backends everything except ``run_meta.json`` is
byte-reproducible.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Sequence

import numpy as np

CONFIG_FILE = "config.json"
RUN_META_FILE = "run_meta.json"
SUMMARY_FILE = "summary_metrics.json"
STATUS_FILE = "status.json"
STORIES_FILE = "stories.json"
MATRIX_FILE = "similarity_matrix.csv"
METRICS_FILE = "metrics.json"
KEYWORDS_FILE = "keywords.json"
LAYOUT_FILE = "layout.json"


def seed_dir(out_dir: str | Path, seed_index: int) -> Path:
    return Path(out_dir) / f"seed_{seed_index}"


def seed_indices(out_dir: str | Path) -> list[int]:
    """Seed indices present under ``out_dir``, sorted numerically."""
    indices = []
    for path in Path(out_dir).glob("seed_*"):
        suffix = path.name.removeprefix("seed_")
        if path.is_dir() and suffix.isdigit():
            indices.append(int(suffix))
    return sorted(indices)


def dumps_canonical(payload: Any) -> str:
    """Stable JSON text: sorted keys, 2-space indent, UTF-8 characters."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so the final path only
    ever holds complete content."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise


def write_json(path: str | Path, payload: Any) -> None:
    atomic_write_text(path, dumps_canonical(payload))


def read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def write_matrix_csv(path: str | Path, matrix: np.ndarray) -> None:
    """Dense CSV; row and column order both follow story_index.

    Floats are rendered with ``repr`` (shortest round-trip form), so
    reading the file back reproduces the exact values.
    """
    lines = [
        ",".join(repr(float(v)) for v in row) for row in np.asarray(matrix)
    ]
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_matrix_csv(path: str | Path) -> np.ndarray:
    rows = [
        [float(cell) for cell in line.split(",")]
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line
    ]
    return np.array(rows, dtype=float)


def story_rows(records: Sequence[Any]) -> list[dict[str, Any]]:
    """JSON rows for ``stories.json`` from engine story records."""
    rows = []
    for record in records:
        story = record.story
        rows.append(
            {
                "agent_id": story.agent_id,
                "generation": story.generation,
                "story_index": story.story_index,
                "seed": story.seed,
                "text": story.text,
                "raw_response": record.raw_response,
            }
        )
    return rows


def write_stories(directory: str | Path, records: Sequence[Any]) -> None:
    write_json(Path(directory) / STORIES_FILE, story_rows(records))


def read_stories(directory: str | Path) -> list[dict[str, Any]]:
    """Story rows sorted by story index."""
    rows = read_json(Path(directory) / STORIES_FILE)
    return sorted(rows, key=lambda row: row["story_index"])


def write_status(directory: str | Path, status: dict[str, Any]) -> None:
    write_json(Path(directory) / STATUS_FILE, status)


def read_status(directory: str | Path) -> dict[str, Any]:
    return read_json(Path(directory) / STATUS_FILE)
