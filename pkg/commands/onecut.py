from pathlib import Path
from typing import Any, Dict, Optional

import typer

from commands.common import build_config, execute, write_graph_files
from core.config import settings
from core.exceptions import SCurveError
from schemas.results import OneCutResponse
from schemas.run_config import RunConfig
from services import onecut_service, stokes_service
from utils.export import write_csv
from utils.parsing import parse_complex, parse_pair


def onecut(
    t: str = typer.Option(..., "--t", help="Coupling t, e.g. '-1.5+1i'"),
    k: int = typer.Option(0, "--k", min=0, max=2, help="beta-branch index"),
    pair: str = typer.Option("1,2", "--pair", help="Convergence sectors joined by the S-curve"),
    resolution: int = typer.Option(settings.SIGN_MAP_RESOLUTION, "--resolution", help="Sign map cells per axis"),
    refine: bool = typer.Option(False, "--refine", help="Repeat the embedding at doubled resolution"),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out", help="Output directory"),
    fmt: str = typer.Option("json", "--format", help="json or csv"),
    config_file: Optional[Path] = typer.Option(None, "--config", help="JSON file overriding the flags"),
):
    """
    Solve the one-cut endpoint equations on branch k and test the S-curve conditions

    Writes endpoints, G(-beta), the Stokes graph and the sign map of Re G.
    """
    flags = {
        "t": parse_complex(t),
        "branch_k": k,
        "contour_pair": parse_pair(pair),
        "resolution": resolution,
        "refine": refine,
        "out": str(out),
        "format": fmt,
    }
    execute(build_config("onecut", flags, config_file), _run)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path):
    t, k = config.t, config.branch_k or 0
    sol = onecut_service.solve_cubic_branch(t, k)
    W = onecut_service.cubic_potential(t)
    curve = stokes_service.curve_from_onecut(W, sol)
    graph, cuts, grid, report = stokes_service.analyse_configuration(
        curve, config.contour_pair, config.resolution, config.refine
    )
    short_ab = graph.short_between(sol.a, sol.b, 10 * settings.EPS_HIT * curve.scale) is not None

    try:
        g_value = onecut_service.g_cubic_at_minus_beta(t, k)
    except SCurveError:
        g_value = None

    write_csv(
        out / "onecut_endpoints.csv",
        ["name", "re", "im"],
        [(name, repr(z.real), repr(z.imag)) for name, z in (("a", sol.a), ("b", sol.b), ("beta", sol.beta))],
        metadata,
    )
    write_graph_files("onecut", out, graph, grid, metadata)

    if not short_ab:
        message = "no short line a-b"
    elif report.embeddable:
        message = f"S-curve for sectors {config.contour_pair} found on branch {k}"
    else:
        message = report.reason or "cut does not prolong into the requested sectors"

    payload = OneCutResponse(
        t=t,
        branch_k=k,
        beta=sol.beta,
        delta2=sol.delta2,
        a=sol.a,
        b=sol.b,
        residual_norm=sol.residual_norm,
        g_at_minus_beta=g_value,
        phase_indicator=None if g_value is None else g_value.real,
        short_ab=short_ab,
        embeddable=report.embeddable,
        reason=report.reason,
        positive_density=all(cut.positive for cut in cuts) if cuts else False,
    )
    return message, payload
