from collections import Counter
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from commands.common import build_config, execute
from core.config import settings
from schemas.results import PhaseBoundaryRecord, PhaseGridResponse
from schemas.run_config import RunConfig
from services import phase_service
from utils.export import polyline_rows, write_csv
from utils.parsing import parse_grid, parse_pair


def phase(
    grid: str = typer.Option(..., "--grid", help="re_min:re_max:im_min:im_max:n"),
    pair: str = typer.Option("1,2", "--pair"),
    boundaries: bool = typer.Option(True, "--boundaries/--no-boundaries", help="Trace the phase boundaries"),
    resolution: int = typer.Option(settings.SIGN_MAP_RESOLUTION, "--resolution"),
    threads: int = typer.Option(settings.SCURVE_THREADS, "--threads", min=1),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out"),
    fmt: str = typer.Option("json", "--format"),
    config_file: Optional[Path] = typer.Option(None, "--config"),
):
    """
    Phase diagram over a raster of t values, plus the traced boundaries Re G_k(-beta_k) = 0
    """
    parse_grid(grid)
    flags = {
        "grid": grid,
        "contour_pair": parse_pair(pair),
        "resolution": resolution,
        "threads": threads,
        "out": str(out),
        "format": fmt,
    }

    def run(config: RunConfig, metadata: Dict[str, Any], out_dir: Path):
        return _run(config, metadata, out_dir, boundaries)

    execute(build_config("phase", flags, config_file), run)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path, with_boundaries: bool):
    re_min, re_max, im_min, im_max, n = parse_grid(config.grid)
    raster = phase_service.classify_grid(
        (re_min, re_max), (im_min, im_max), n, config.contour_pair, config.resolution, config.threads
    )
    write_csv(
        out / "phase_raster.csv",
        ["index", "re", "im", "label"],
        [(i, repr(t.real), repr(t.imag), label) for i, (t, label, _) in enumerate(raster)],
        metadata,
    )
    counts = Counter(label for _, label, _ in raster)

    records, critical = [], {}
    if with_boundaries:
        traced = phase_service.trace_all_boundaries()
        critical = {str(k): seed for k, (seed, _) in traced.items()}
        boundaries = [boundary for _, boundary in traced.values()]
        write_csv(
            out / "phase_boundaries.csv",
            ["branch", "vertex", "re", "im"],
            polyline_rows([b.polyline for b in boundaries], [b.branch_k for b in boundaries]),
            metadata,
        )
        records = [
            PhaseBoundaryRecord(branch_k=b.branch_k, closed=b.closed, stop_reason=b.stop_reason, points=len(b.polyline))
            for b in boundaries
        ]

    payload = PhaseGridResponse(
        grid=config.grid,
        contour_pair=config.contour_pair,
        counts=dict(sorted(counts.items())),
        boundaries=records,
        critical_points=critical,
    )
    summary = ", ".join(f"{label}: {count}" for label, count in sorted(counts.items()))
    return f"{len(raster)} points classified ({summary})", payload
