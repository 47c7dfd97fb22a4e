"""
Shared plumbing for the command wrappers: config assembly, error envelope,
result files.
"""
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import typer
from pydantic import BaseModel, ValidationError

from core.exceptions import SCurveError
from core.logger import console, setup_logging
from models.stokes import Critical, Leg, Short, SignMap, StokesGraph
from schemas.run_config import RunConfig
from utils.export import build_metadata, polyline_rows, write_csv, write_json, write_pgm
from utils.response import exception_response, success_response

logger = logging.getLogger(__name__)

Action = Callable[[RunConfig, Dict[str, Any], Path], Tuple[str, BaseModel]]


def build_config(command: str, flags: Dict[str, Any], config_file: Optional[Path] = None) -> RunConfig:
    """
    Merge command-line flags with an optional JSON config file (file wins)

    Raises:
        typer.BadParameter: If the merged values fail validation
    """
    values = {key: value for key, value in flags.items() if value is not None}
    if config_file is not None:
        try:
            values.update(json.loads(Path(config_file).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise typer.BadParameter(f"cannot read config file {config_file}: {exc}") from exc
    values["command"] = command
    try:
        return RunConfig.model_validate(values)
    except ValidationError as exc:
        raise typer.BadParameter(str(exc)) from exc


def _summary_rows(payload: Dict[str, Any]):
    for key, value in payload.items():
        yield key, json.dumps(value) if isinstance(value, (dict, list)) else value


def execute(config: RunConfig, action: Action) -> None:
    """
    Run a command body, writing the success or error envelope

    Exit codes: 0 on success, the error's exit code (1) on numerical failure.
    """
    setup_logging()
    config.apply()
    metadata = build_metadata(config.command, config.config_hash())
    out = Path(config.out)
    logger.info("%s started (config %s)", config.command, metadata["config_hash"][:12])

    try:
        message, payload = action(config, metadata, out)
    except SCurveError as exc:
        logger.error("%s failed: %s", config.command, exc.detail)
        envelope = exception_response(exc, metadata)
        write_json(out / f"{config.command}_error.json", envelope)
        typer.echo(json.dumps(envelope))
        raise typer.Exit(code=exc.exit_code)

    data = payload.model_dump(mode="json")
    if config.format == "csv":
        write_csv(out / f"{config.command}.csv", ["field", "value"], _summary_rows(data), metadata)
    else:
        write_json(out / f"{config.command}.json", success_response(message, data, metadata))
    console.print(f"[bold green]{config.command}[/]: {message}")
    logger.info("%s finished", config.command)


def terminal_name(line) -> Tuple[str, Optional[complex]]:
    terminal = line.terminal
    if isinstance(terminal, Short):
        return "Short", terminal.root
    if isinstance(terminal, Critical):
        return "Critical", terminal.root
    if isinstance(terminal, Leg):
        return "Leg", None
    return type(terminal).__name__, None


def write_graph_files(
    prefix: str, out: Path, graph: StokesGraph, grid: Optional[SignMap], metadata: Dict[str, Any]
) -> None:
    """Stokes polylines (with G along them) as CSV and, when available, the sign map as PGM"""
    rows = []
    for i, line in enumerate(graph.lines):
        label = f"{i}:{terminal_name(line)[0]}"
        for (_, vertex, re_s, im_s), g in zip(polyline_rows([line.samples], [label]), line.g_values):
            rows.append((label, vertex, re_s, im_s, repr(float(g.real)), repr(float(g.imag))))
    write_csv(out / f"{prefix}_stokes_lines.csv", ["line", "vertex", "re", "im", "Re_G", "Im_G"], rows, metadata)
    if grid is not None:
        extra = dict(metadata, bbox=list(grid.bbox))
        write_pgm(out / f"{prefix}_sign_map.pgm", grid.signs, extra)
