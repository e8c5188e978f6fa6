"""Writers for the result files: CSV tables, JSON documents and PGM masks."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from app.core.config import settings
from app.core.logging import get_logger

logger = get_logger(__name__)


def format_cell(value, digits: int | None = None) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    digits = settings.csv_digits if digits is None else digits
    return f"%.{digits}g" % float(value)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    lines.extend(",".join(format_cell(value) for value in row) for row in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    logger.info("Saved %d rows into %s", len(rows), path)
    return path


def write_json(path: Path, document: BaseModel) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(document.model_dump_json(indent=2) + "\n")
    logger.info("Saved %s into %s", type(document).__name__, path)
    return path


def write_pgm(path: Path, mask: np.ndarray) -> Path:
    """Binary P5 image, stable cells white; the first grid row ends up at the bottom."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError(f"mask must be two-dimensional, got shape {mask.shape}")
    pixels = np.where(mask[::-1], 255, 0).astype(np.uint8)
    height, width = pixels.shape
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(pixels.tobytes())
    logger.info("Saved %dx%d mask into %s", width, height, path)
    return path
