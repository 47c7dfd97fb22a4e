import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from commands.common import build_config, execute
from core.config import settings
from core.exceptions import Unclassified
from models.phase import PhaseKind
from schemas.results import SweepResponse, TransitionRecord
from schemas.run_config import RunConfig
from services import phase_service
from utils.export import write_csv
from utils.parsing import parse_pair, parse_path

logger = logging.getLogger(__name__)


def sweep(
    path: str = typer.Option(..., "--path", help="'t0 -> t1'"),
    steps: int = typer.Option(60, "--steps", min=1),
    pair: str = typer.Option("1,2", "--pair"),
    resolution: int = typer.Option(settings.SIGN_MAP_RESOLUTION, "--resolution"),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out"),
    fmt: str = typer.Option("json", "--format"),
    config_file: Optional[Path] = typer.Option(None, "--config"),
):
    """
    Follow a straight path in t, label every point and name the phase transitions met
    """
    parse_path(path, steps)
    flags = {
        "path": path,
        "steps": steps,
        "contour_pair": parse_pair(pair),
        "resolution": resolution,
        "out": str(out),
        "format": fmt,
    }
    execute(build_config("sweep", flags, config_file), _run)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path):
    points = parse_path(config.path, config.steps)
    catalogue = phase_service.default_catalogue()

    log_rows, kept_t, kept_labels, names = [], [], [], []
    for i, t in enumerate(points):
        try:
            label = phase_service.classify_t(t, config.contour_pair, catalogue, config.resolution)
        except Unclassified as exc:
            logger.warning("t=%s unclassified: %s", t, exc.detail)
            names.append("Unclassified")
            log_rows.append((i, repr(t.real), repr(t.imag), "Unclassified", "", ""))
            continue

        names.append(label.label)
        kept_t.append(t)
        kept_labels.append(label)
        r, residual = "", ""
        if label.kind == PhaseKind.TWO_CUT:
            sol = catalogue.solve_at(t)
            r, residual = repr(sol.r), repr(sol.residual_norm)
        log_rows.append((i, repr(t.real), repr(t.imag), label.label, r, residual))

    write_csv(out / "sweep_log.csv", ["index", "re", "im", "label", "r", "residual"], log_rows, metadata)

    events = phase_service.transition_report(kept_t, config.contour_pair, kept_labels, catalogue)
    write_csv(
        out / "sweep_events.csv",
        ["kind", "re", "im", "before", "after"],
        [(e.kind.value, repr(e.t.real), repr(e.t.imag), e.before, e.after) for e in events],
        metadata,
    )

    payload = SweepResponse(
        path=config.path,
        steps=config.steps,
        labels=names,
        events=[
            TransitionRecord(kind=e.kind.value, t=e.t, before=e.before, after=e.after, branch_k=e.branch_k)
            for e in events
        ],
    )
    summary = " then ".join(e.kind.value for e in events) or "no transition"
    return summary, payload
