import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer
from mpmath import mp

from commands.common import build_config, execute
from core.config import settings
from core.exceptions import Unclassified
from schemas.common import mp_pair
from schemas.results import ZerosResponse
from schemas.run_config import RunConfig
from services import orthopoly_service, phase_service
from utils.export import polyline_rows, write_csv
from utils.parsing import parse_complex, parse_pair

logger = logging.getLogger(__name__)


def zeros(
    t: str = typer.Option(..., "--t", help="Cubic model coupling"),
    n: int = typer.Option(24, "--n", min=1, help="Degree of p_n (and weight scale)"),
    pair: str = typer.Option("1,2", "--pair", help="Sectors joined by the integration contour"),
    digits: int = typer.Option(settings.PRECISION_DIGITS, "--digits", help="Working precision in decimal digits"),
    hinge: str = typer.Option("0", "--hinge", help="Hinge point of the two-ray contour"),
    dump_moments: bool = typer.Option(False, "--dump-moments", help="Write the moment table as decimal strings"),
    threads: int = typer.Option(1, "--threads", min=1),
    out: Path = typer.Option(Path(settings.OUTPUT_DIR), "--out"),
    fmt: str = typer.Option("json", "--format"),
    config_file: Optional[Path] = typer.Option(None, "--config"),
):
    """
    Zeros of the degree-n orthogonal polynomial for exp(-n W) and their distance to the predicted cuts
    """
    flags = {
        "t": parse_complex(t),
        "n": n,
        "contour_pair": parse_pair(pair),
        "precision_digits": digits,
        "hinge": parse_complex(hinge),
        "threads": threads,
        "out": str(out),
        "format": fmt,
    }

    def run(config: RunConfig, metadata: Dict[str, Any], out_dir: Path):
        return _run(config, metadata, out_dir, dump_moments)

    execute(build_config("zeros", flags, config_file), run)


def _run(config: RunConfig, metadata: Dict[str, Any], out: Path, dump_moments: bool):
    t, n, digits = config.t, config.n, config.precision_digits
    moments = orthopoly_service.cubic_moments(t, n, config.contour_pair, digits, config.hinge, config.threads)
    rc = orthopoly_service.recurrence_from_moments(moments)
    zero_set = orthopoly_service.zeros_of_pn(rc)
    orthogonality = orthopoly_service.orthogonality_residuals(moments, rc)

    try:
        configuration = phase_service.find_s_curve(t, config.contour_pair)
        phase_label = configuration.label.label
        cuts = [cut.polyline for cut in configuration.cuts]
    except Unclassified as exc:
        logger.warning("no S-curve to compare against: %s", exc.detail)
        phase_label, cuts = "Unclassified", []

    comparison = orthopoly_service.zeros_vs_cuts(zero_set, cuts)

    zero_pairs = [mp_pair(z, digits // 2) for z in zero_set.zeros]
    rows = []
    for i, (re_s, im_s) in enumerate(zero_pairs):
        distance = repr(float(comparison.distances[i])) if comparison.distances.size else ""
        nearest = int(comparison.nearest_cut[i]) if comparison.nearest_cut.size else ""
        rows.append((i, re_s, im_s, distance, nearest))
    write_csv(out / "zeros.csv", ["index", "re", "im", "distance", "nearest_cut"], rows, metadata)
    if cuts:
        write_csv(out / "zeros_cuts.csv", ["cut", "vertex", "re", "im"], polyline_rows(cuts), metadata)
    if dump_moments:
        write_csv(
            out / "moments.csv",
            ["k", "re", "im"],
            [(k, *mp_pair(mu, digits)) for k, mu in enumerate(moments.moments)],
            metadata,
        )

    final = orthogonality["final"]
    payload = ZerosResponse(
        t=t,
        n=n,
        contour_pair=config.contour_pair,
        precision_digits=digits,
        phase=phase_label,
        zeros=zero_pairs,
        max_residual=zero_set.max_residual,
        max_distance=comparison.max_distance,
        hausdorff=comparison.hausdorff,
        counts_per_cut=list(comparison.counts),
        outside_tube=int(comparison.details.get("outside_tube", 0)),
        orthogonality={
            "max_pair": max(orthogonality["pairs"].values(), default=0.0),
            "max_final": max(final, default=0.0),
        },
    )
    message = (
        f"{len(zero_set.zeros)} zeros ({phase_label}); counts per cut {list(comparison.counts)}, "
        f"max distance {mp.nstr(comparison.max_distance, 3)}"
    )
    return message, payload
