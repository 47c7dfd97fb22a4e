import json
from pathlib import Path

import numpy as np
import pytest

from main import app


def _rows(path: Path):
    return [line.split(",") for line in path.read_text().splitlines() if line and not line.startswith("#")]


def test_version(runner) -> None:
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "scurve" in result.output


def test_onecut_writes_endpoints(runner, tmp_path: Path) -> None:
    result = runner.invoke(app, ["onecut", "--t", "0", "--k", "0", "--resolution", "64", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output

    envelope = json.loads((tmp_path / "onecut.json").read_text())
    assert envelope["status"] == "success"
    assert envelope["metadata"]["command"] == "onecut"
    assert len(envelope["metadata"]["config_hash"]) == 64
    data = envelope["data"]
    assert float(data["beta"][0]) == pytest.approx(-1.0)
    assert data["short_ab"] is True

    rows = {row[0]: complex(float(row[1]), float(row[2])) for row in _rows(tmp_path / "onecut_endpoints.csv")[1:]}
    assert rows["a"].real == pytest.approx(-1.0) and rows["b"].real == pytest.approx(-1.0)
    assert sorted([rows["a"].imag, rows["b"].imag]) == pytest.approx([-np.sqrt(2), np.sqrt(2)])
    assert rows["beta"] == pytest.approx(-1.0)
    assert (tmp_path / "onecut_stokes_lines.csv").exists()
    assert (tmp_path / "onecut_sign_map.pgm").read_text().startswith("P2")


def test_onecut_csv_summary(runner, tmp_path: Path) -> None:
    result = runner.invoke(
        app, ["onecut", "--t", "0.2+0.1i", "--k", "0", "--resolution", "64", "--format", "csv", "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    text = (tmp_path / "onecut.csv").read_text()
    assert text.startswith("# ")
    assert "branch_k" in text


def test_explicit_gaussian_stokes_graph(runner, tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        [
            "stokes", "--potential", "0;0;0.5", "--endpoints", "-2;2",
            "--pair", "1,0", "--resolution", "64", "--out", str(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    data = json.loads((tmp_path / "stokes.json").read_text())["data"]
    assert len(data["lines"]) == 6
    assert sum(line["terminal"] == "Short" for line in data["lines"]) == 2
    assert data["charges"] == [pytest.approx(1, abs=1e-6)]
    assert data["embeddable"] is True


def test_malformed_coupling_is_a_usage_error(runner, tmp_path: Path) -> None:
    result = runner.invoke(app, ["onecut", "--t", "minus one", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_unknown_format_is_a_usage_error(runner, tmp_path: Path) -> None:
    result = runner.invoke(app, ["onecut", "--t", "0", "--format", "xml", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_identical_sectors_are_rejected(runner, tmp_path: Path) -> None:
    result = runner.invoke(app, ["onecut", "--t", "0", "--pair", "1,1", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_stokes_needs_a_model(runner, tmp_path: Path) -> None:
    result = runner.invoke(app, ["stokes", "--t", "0", "--out", str(tmp_path)])
    assert result.exit_code == 2


def test_numerical_failure_writes_error_envelope(runner, tmp_path: Path) -> None:
    seed = tmp_path / "seed.json"
    seed.write_text(json.dumps({"t": [-1.1, 0], "endpoints": [[-1, -1], [-0.5, 0], [-0.5, 1e-9], [-1, 1]]}))
    out = tmp_path / "out"
    result = runner.invoke(app, ["twocut", "--t", "-1.1", "--seed-file", str(seed), "--out", str(out)])
    assert result.exit_code == 1

    envelope = json.loads((out / "twocut_error.json").read_text())
    assert envelope["status"] == "error"
    assert envelope["data"]["code"] == "endpoint_collision"
    assert envelope["data"]["context"]["separation"] < 1e-6
    assert not (out / "twocut.json").exists()


def test_config_file_overrides_flags(runner, tmp_path: Path) -> None:
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"t": [0.0, 0.0], "branch_k": 0, "resolution": 64}))
    result = runner.invoke(app, ["onecut", "--t", "5", "--k", "2", "--config", str(config), "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    data = json.loads((tmp_path / "onecut.json").read_text())["data"]
    assert data["branch_k"] == 0
    assert float(data["t"][0]) == 0.0


@pytest.mark.slow
def test_zeros_command(runner, tmp_path: Path) -> None:
    result = runner.invoke(
        app, ["zeros", "--t", "0", "--n", "6", "--digits", "60", "--dump-moments", "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    data = json.loads((tmp_path / "zeros.json").read_text())["data"]
    assert len(data["zeros"]) == 6
    assert data["phase"] == "OneCut(0)"
    assert len(_rows(tmp_path / "zeros.csv")) == 7
    assert len(_rows(tmp_path / "moments.csv")) == 14


@pytest.mark.slow
def test_phase_command_on_small_grid(runner, tmp_path: Path) -> None:
    result = runner.invoke(
        app,
        [
            "phase", "--grid=-0.5:0.5:-0.5:0.5:2", "--no-boundaries",
            "--threads", "1", "--resolution", "64", "--out", str(tmp_path),
        ],
    )
    assert result.exit_code == 0, result.output
    assert len(_rows(tmp_path / "phase_raster.csv")) == 5
