import json
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from commands.common import build_config, execute, write_graph_files
from core.config import settings
from models.solutions import TwoCutSolution
from schemas.common import to_complex
from schemas.results import TwoCutResponse
from schemas.run_config import RunConfig
from services import phase_service, stokes_service, twocut_service
from utils.export import write_csv
from utils.parsing import parse_complex, parse_pair


def _load_seed(path: Path) -> TwoCutSolution:
    """Seed file: {"t": [re, im], "endpoints": [[re, im] x 4]}"""
    try:
        raw = json.loads(Path(path).read_text())
        endpoints = twocut_service.normalize_labels([to_complex(e) for e in raw["endpoints"]])
        return TwoCutSolution.from_endpoints(endpoints, t=to_complex(raw["t"]))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise typer.BadParameter(f"unusable seed file {path}: {exc}") from exc


def twocut(
    t: str = typer.Option(..., "--t", help="Coupling t"),
    seed_file: Optional[Path] = typer.Option(None, "--seed-file", help="JSON seed continued to t"),
    pair: str = typer.Option("1,2", "--pair", help="Convergence sectors for the embedding test"),
    resolution: int = typer.Option(settings.SIGN_MAP_RESOLUTION, "--resolution"),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out"),
    fmt: str = typer.Option("json", "--format"),
    config_file: Optional[Path] = typer.Option(None, "--config"),
):
    """
    Solve the two-cut endpoint equations at t by continuation from a seed

    Without a seed file the built-in catalogue (seeded at the branch-0 split) is used.
    """
    seed = _load_seed(seed_file) if seed_file is not None else None
    flags = {
        "t": parse_complex(t),
        "contour_pair": parse_pair(pair),
        "resolution": resolution,
        "out": str(out),
        "format": fmt,
    }

    def run(config: RunConfig, metadata: Dict[str, Any], out_dir: Path):
        return _run(config, metadata, out_dir, seed)

    execute(build_config("twocut", flags, config_file), run)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path, seed: Optional[TwoCutSolution]):
    t = config.t
    if seed is not None:
        sol = twocut_service.continue_in_t([complex(seed.t), t], seed)[-1]
    else:
        sol = phase_service.default_catalogue().solve_at(t)
    charges = twocut_service.cut_charges(sol)

    curve = stokes_service.curve_from_twocut(t, sol)
    graph, _, grid, report = stokes_service.analyse_configuration(curve, config.contour_pair, config.resolution)

    write_csv(
        out / "twocut_endpoints.csv",
        ["name", "re", "im"],
        [(name, repr(z.real), repr(z.imag)) for name, z in zip("abcd", sol.endpoints)],
        dict(metadata, r=repr(sol.r), residual_norm=repr(sol.residual_norm)),
    )
    write_graph_files("twocut", out, graph, grid, metadata)

    payload = TwoCutResponse(
        t=t,
        a=sol.a,
        b=sol.b,
        c=sol.c,
        d=sol.d,
        r=sol.r,
        residual_norm=sol.residual_norm,
        charges=charges,
        embeddable=report.embeddable,
        reason=report.reason,
    )
    message = f"two-cut solution with residual {sol.residual_norm:.2e}, charges {charges[0]:.4f}/{charges[1]:.4f}"
    return message, payload
