"""
Parsers for command-line values: complex numbers, paths, grids, sector pairs
"""
import re
from typing import List, Tuple

import numpy as np
import typer

_IMAGINARY_UNIT = re.compile(r"(?<![a-zA-Z])i\b")


def parse_complex(text: str) -> complex:
    """
    Parse '1', '-1.5+1.5i', '2j', 'i' or '-i' into a complex number

    Raises:
        typer.BadParameter: If the text is not a complex literal
    """
    cleaned = str(text).strip().replace(" ", "")
    if not cleaned:
        raise typer.BadParameter("empty complex number")
    cleaned = _IMAGINARY_UNIT.sub("j", cleaned)
    if cleaned in ("j", "+j"):
        cleaned = "1j"
    elif cleaned == "-j":
        cleaned = "-1j"
    cleaned = re.sub(r"(?<=[+-])j", "1j", cleaned)
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise typer.BadParameter(f"not a complex number: {text!r}") from exc


def parse_complex_list(text: str, separator: str = ";") -> List[complex]:
    return [parse_complex(part) for part in str(text).split(separator) if part.strip()]


def parse_path(text: str, steps: int) -> List[complex]:
    """'t0 -> t1' sampled at steps + 1 equally spaced points"""
    parts = str(text).split("->")
    if len(parts) != 2:
        raise typer.BadParameter(f"path must look like 't0 -> t1', got {text!r}")
    if steps < 1:
        raise typer.BadParameter("steps must be positive")
    t0, t1 = parse_complex(parts[0]), parse_complex(parts[1])
    return [complex(t0 + s * (t1 - t0)) for s in np.linspace(0.0, 1.0, steps + 1)]


def parse_grid(text: str) -> Tuple[float, float, float, float, int]:
    """'re_min:re_max:im_min:im_max:n'"""
    parts = str(text).split(":")
    if len(parts) != 5:
        raise typer.BadParameter(f"grid must look like 're_min:re_max:im_min:im_max:n', got {text!r}")
    try:
        re_min, re_max, im_min, im_max = (float(p) for p in parts[:4])
        n = int(parts[4])
    except ValueError as exc:
        raise typer.BadParameter(f"malformed grid {text!r}") from exc
    if re_min >= re_max or im_min >= im_max or n < 2:
        raise typer.BadParameter("grid needs increasing ranges and n >= 2")
    return re_min, re_max, im_min, im_max, n


def parse_pair(text: str) -> Tuple[int, int]:
    """'1,2' -> (1, 2); the two sector indices must differ"""
    try:
        i, j = (int(p) for p in str(text).split(","))
    except ValueError as exc:
        raise typer.BadParameter(f"pair must look like 'i,j', got {text!r}") from exc
    if i == j:
        raise typer.BadParameter("pair must join two distinct sectors")
    return i, j
