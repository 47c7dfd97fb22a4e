from pathlib import Path
from typing import Any, Dict, Optional

import typer

from commands.common import build_config, execute, terminal_name, write_graph_files
from core.config import settings
from models.polynomial import ComplexPolynomial
from models.stokes import SpectralCurve
from schemas.results import StokesLineRecord, StokesResponse
from schemas.run_config import RunConfig
from services import onecut_service, phase_service, stokes_service
from utils.parsing import parse_complex, parse_complex_list, parse_pair


def stokes(
    t: Optional[str] = typer.Option(None, "--t", help="Cubic model coupling"),
    k: Optional[int] = typer.Option(None, "--k", min=0, max=2, help="One-cut branch (cubic model)"),
    two_cut: bool = typer.Option(False, "--twocut", help="Use the two-cut solution at t"),
    potential: Optional[str] = typer.Option(None, "--potential", help="W coefficients t_0;t_1;... ascending"),
    endpoints: Optional[str] = typer.Option(None, "--endpoints", help="Branch points a_1^-;a_1^+;..."),
    pair: str = typer.Option("1,2", "--pair"),
    resolution: int = typer.Option(settings.SIGN_MAP_RESOLUTION, "--resolution"),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out"),
    fmt: str = typer.Option("json", "--format"),
    config_file: Optional[Path] = typer.Option(None, "--config"),
):
    """
    Trace the Stokes graph of y**2, classify shorts and legs, and write the sign map of Re G

    Either the cubic model (--t with --k or --twocut) or an explicit model
    (--potential with --endpoints) must be given.
    """
    if potential is not None or endpoints is not None:
        if potential is None or endpoints is None:
            raise typer.BadParameter("--potential and --endpoints go together")
        W = ComplexPolynomial(tuple(parse_complex_list(potential)))
        ends = parse_complex_list(endpoints)
        if len(ends) % 2 or not ends:
            raise typer.BadParameter("an even, nonzero number of endpoints is required")
        model = ("explicit", W, ends)
    elif t is not None:
        if (k is None) == (not two_cut):
            raise typer.BadParameter("give exactly one of --k and --twocut")
        model = ("cubic", k, two_cut)
    else:
        raise typer.BadParameter("either --t or --potential/--endpoints is required")

    flags = {
        "t": parse_complex(t) if t is not None else None,
        "branch_k": k,
        "contour_pair": parse_pair(pair),
        "resolution": resolution,
        "out": str(out),
        "format": fmt,
    }

    def run(config: RunConfig, metadata: Dict[str, Any], out_dir: Path):
        return _run(config, metadata, out_dir, _curve(config, model))

    execute(build_config("stokes", flags, config_file), run)


def _curve(config: RunConfig, model) -> SpectralCurve:
    if model[0] == "explicit":
        _, W, ends = model
        return stokes_service.spectral_curve(W, ends)
    _, k, two_cut = model
    if two_cut:
        sol = phase_service.default_catalogue().solve_at(config.t)
        return stokes_service.curve_from_twocut(config.t, sol)
    sol = onecut_service.solve_cubic_branch(config.t, k)
    return stokes_service.curve_from_onecut(onecut_service.cubic_potential(config.t), sol)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path, curve: SpectralCurve):
    graph, cuts, grid, report = stokes_service.analyse_configuration(curve, config.contour_pair, config.resolution)
    write_graph_files("stokes", out, graph, grid, metadata)

    records = []
    for line in graph.lines:
        kind, end = terminal_name(line)
        records.append(
            StokesLineRecord(
                origin=line.origin,
                direction_index=line.direction_index,
                direction=line.direction,
                terminal=kind,
                end=end,
                samples=len(line.samples),
            )
        )

    payload = StokesResponse(
        roots=list(curve.simple_roots),
        double_roots=list(curve.double_roots),
        lines=records,
        cuts=[cut.endpoints for cut in cuts] if cuts else [],
        charges=[cut.charge for cut in cuts] if cuts else [],
        embeddable=report.embeddable,
        reason=report.reason,
        sector_components={str(s): int(c) for s, c in zip(report.sectors, report.sector_components)},
    )
    shorts = len(graph.shorts())
    message = f"{len(graph.lines)} Stokes lines, {shorts} shorts, " + (
        "embeddable" if report.embeddable else f"not embeddable ({report.reason})"
    )
    return message, payload
