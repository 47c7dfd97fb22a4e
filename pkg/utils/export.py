"""
Writers for result files: JSON envelopes, CSV tables with a metadata header,
and plain-text PGM sign maps.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence

import numpy as np

from core.config import settings

logger = logging.getLogger(__name__)

CONVENTIONS = {
    "endpoint_ordering": "cut j runs a_j^- -> a_j^+; cuts ordered by ascending Im of their midpoints",
    "cycle_orientation": "A_i = 2 x gap chord a_i^+ -> a_{i+1}^-; B_i = -2 x sum of cut chords a_j^- -> a_j^+ (z+ side), j <= i",
    "cut_labelling": "two-cut endpoints (a, b) lower cut, (c, d) upper cut, gap b -> c",
    "branch": "w(z) ~ z^s at infinity; chord branch inside the convex hull",
}

SIGN_LEVELS = {-1: 0, 0: 128, 1: 255}


def build_metadata(command: str, config_hash: str, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    metadata = {
        "app": settings.APP_NAME,
        "app_version": settings.APP_VERSION,
        "schema_version": settings.SCHEMA_VERSION,
        "command": command,
        "config_hash": config_hash,
        "conventions": CONVENTIONS,
    }
    if extra:
        metadata.update(extra)
    return metadata


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _header_lines(metadata: Dict[str, Any]) -> Iterable[str]:
    for key, value in metadata.items():
        text = json.dumps(value, sort_keys=True) if isinstance(value, (dict, list)) else str(value)
        yield f"# {key}: {text}"


def write_json(path: Path, envelope: Dict[str, Any]) -> Path:
    path = _prepare(path)
    path.write_text(json.dumps(envelope, indent=2, sort_keys=False) + "\n")
    logger.info("wrote %s", path)
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], metadata: Dict[str, Any]) -> Path:
    """CSV table preceded by '# key: value' metadata lines"""
    path = _prepare(path)
    with path.open("w", newline="") as handle:
        for line in _header_lines(metadata):
            handle.write(line + "\n")
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("wrote %s", path)
    return path


def write_pgm(path: Path, signs: np.ndarray, metadata: Dict[str, Any]) -> Path:
    """
    Plain PGM (P2): 0 negative, 128 boundary, 255 positive

    ``signs[iy, ix]`` has iy increasing with Im z; rows are written top (largest Im) first.
    """
    path = _prepare(path)
    grid = np.vectorize(SIGN_LEVELS.get)(np.sign(signs).astype(int))
    ny, nx = grid.shape
    with path.open("w") as handle:
        handle.write("P2\n")
        for line in _header_lines(metadata):
            handle.write(line + "\n")
        handle.write(f"{nx} {ny}\n255\n")
        for row in grid[::-1]:
            handle.write(" ".join(str(int(v)) for v in row) + "\n")
    logger.info("wrote %s", path)
    return path


def polyline_rows(polylines: Sequence[np.ndarray], labels: Optional[Sequence[Any]] = None) -> Iterable[Sequence[Any]]:
    """(label, vertex index, re, im) rows for a set of polylines"""
    for index, line in enumerate(polylines):
        label = labels[index] if labels is not None else index
        for vertex, z in enumerate(np.asarray(line, dtype=complex)):
            yield label, vertex, repr(float(z.real)), repr(float(z.imag))
