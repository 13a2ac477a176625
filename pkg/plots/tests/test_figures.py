"""Unit tests plus the secondary acceptance criterion: rendering both
figure kinds from real simulator artifacts succeeds, plot-layer means match
the CLI-emitted means, and kind-mismatched input is refused."""

import json
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from conftest import SIMULATOR_SRC

from rasplots import (
    AggregateMismatchError,
    FigureKind,
    FigureSpec,
    KindMismatchError,
    SchemaMismatchError,
    aggregate,
    read_rows,
    render,
)
from rasplots.figures import main

HEADER = "sweep_kind,swept_value,scheme,metric,value_db,seed,run_index"


def write_csv(path, lines):
    path.write_text("\n".join([HEADER] + lines) + "\n")
    return path


def azimuth_lines():
    lines = []
    for phi, fixed, ras in ((-0.5, -35.0, -32.0), (0.0, -32.0, -32.0), (0.5, -35.1, -32.0)):
        lines.append(f"Azimuth,{phi},Fixed,ReceivedPower,{fixed},7,0")
        lines.append(f"Azimuth,{phi},RAS,ReceivedPower,{ras},7,0")
    return lines


def power_lines(include_means=True, corrupt_mean=False):
    lines = []
    for p in (0.0, 10.0):
        for scheme, base in (("RAS", -20.0), ("Fixed", -21.0)):
            values = [base + p + delta for delta in (-0.4, 0.1, 0.3)]
            for run, value in enumerate(values):
                lines.append(f"Power,{p},{scheme},SCNR,{value},7,{run}")
            if include_means:
                mean = float(np.mean(values)) + (0.5 if corrupt_mean else 0.0)
                lines.append(f"Power,{p},{scheme},SCNR,{mean!r},7,-1")
    return lines


class TestReadRows:
    def test_round_trips_rows(self, tmp_path):
        path = write_csv(tmp_path / "ok.csv", azimuth_lines())
        rows = read_rows(path)
        assert len(rows) == 6
        assert rows[0]["scheme"] == "Fixed"
        assert rows[0]["value_db"] == -35.0

    def test_missing_column_named(self, tmp_path):
        path = tmp_path / "missing.csv"
        path.write_text("sweep_kind,swept_value,scheme,metric,value_db,seed\n")
        with pytest.raises(SchemaMismatchError, match="run_index"):
            read_rows(path)

    def test_unexpected_column_named(self, tmp_path):
        path = tmp_path / "extra.csv"
        path.write_text(HEADER + ",bogus\n")
        with pytest.raises(SchemaMismatchError, match="bogus"):
            read_rows(path)

    def test_unparseable_cell_reports_line(self, tmp_path):
        path = write_csv(tmp_path / "bad.csv", ["Azimuth,zero,RAS,ReceivedPower,1.0,7,0"])
        with pytest.raises(SchemaMismatchError, match=":2"):
            read_rows(path)

    def test_empty_artifact_rejected(self, tmp_path):
        path = write_csv(tmp_path / "empty.csv", [])
        with pytest.raises(SchemaMismatchError, match="no rows"):
            read_rows(path)


class TestAggregate:
    def test_mean_and_band(self, tmp_path):
        rows = read_rows(write_csv(tmp_path / "p.csv", power_lines()))
        series = aggregate(rows, FigureKind.POWER_SCNR)
        assert [s.scheme for s in series] == ["RAS", "Fixed"]
        ras = series[0]
        assert np.allclose(ras.x, [0.0, 10.0])
        assert np.allclose(ras.mean, [-20.0, -10.0])
        assert np.all(ras.std > 0.0)

    def test_kind_mismatch_refused(self, tmp_path):
        rows = read_rows(write_csv(tmp_path / "a.csv", azimuth_lines()))
        with pytest.raises(KindMismatchError):
            aggregate(rows, FigureKind.POWER_SCNR)

    def test_embedded_means_cross_checked(self, tmp_path):
        rows = read_rows(write_csv(tmp_path / "good.csv", power_lines()))
        aggregate(rows, FigureKind.POWER_SCNR)  # 1e-9 agreement holds
        bad = read_rows(write_csv(tmp_path / "bad.csv", power_lines(corrupt_mean=True)))
        with pytest.raises(AggregateMismatchError):
            aggregate(bad, FigureKind.POWER_SCNR)


class TestRender:
    def test_azimuth_render_creates_image(self, tmp_path):
        csv_path = write_csv(tmp_path / "a.csv", azimuth_lines())
        out = render(FigureSpec(csv_path, FigureKind.AZIMUTH_POWER, tmp_path / "a.png"))
        assert out.exists() and out.stat().st_size > 0

    def test_kind_guard_refuses_wrong_csv(self, tmp_path):
        csv_path = write_csv(tmp_path / "p.csv", power_lines())
        with pytest.raises(KindMismatchError):
            render(FigureSpec(csv_path, FigureKind.AZIMUTH_POWER, tmp_path / "x.png"))

    def test_repeat_renders_byte_identical(self, tmp_path):
        csv_path = write_csv(tmp_path / "p.csv", power_lines())
        a = render(FigureSpec(csv_path, FigureKind.POWER_SCNR, tmp_path / "one.png"))
        b = render(FigureSpec(csv_path, FigureKind.POWER_SCNR, tmp_path / "two.png"))
        assert a.read_bytes() == b.read_bytes()

    def test_style_override(self, tmp_path):
        csv_path = write_csv(tmp_path / "p.csv", power_lines())
        spec = FigureSpec(
            csv_path,
            FigureKind.POWER_SCNR,
            tmp_path / "styled.png",
            styles={"RAS": {"color": "#000000"}},
        )
        assert render(spec).stat().st_size > 0

    def test_cli_entry_point(self, tmp_path, capsys):
        csv_path = write_csv(tmp_path / "a.csv", azimuth_lines())
        out = tmp_path / "cli.png"
        assert main([str(csv_path), "--kind", "AzimuthPower", "--out", str(out)]) == 0
        assert out.exists()
        assert main([str(csv_path), "--kind", "PowerSCNR", "--out", str(out)]) == 2
        assert "error" in capsys.readouterr().err


def run_simulator(args, timeout=300):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(SIMULATOR_SRC) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-m", "rasim.cli", *args],
        env=env,
        capture_output=True,
        text=True,
        timeout=timeout,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="module")
def simulator_artifacts(tmp_path_factory):
    """Real sweep artifacts produced through the simulator CLI.

    The azimuth sweep uses the full default configuration; the power sweep
    keeps the default schema at a reduced Monte-Carlo size to stay fast.
    """
    root = tmp_path_factory.mktemp("artifacts")
    azimuth_csv = root / "azimuth.csv"
    run_simulator(["sweep-azimuth", "--out", str(azimuth_csv)])

    power_config = root / "power_config.json"
    power_config.write_text(
        json.dumps(
            {
                "array": {"rows": 2, "cols": 2},
                "placement": {"num_users": 0, "num_targets": 1, "num_clutter": 4},
                "power_sweep": {
                    "start_dbm": 0.0,
                    "stop_dbm": 30.0,
                    "step_db": 10.0,
                    "monte_carlo_runs": 8,
                },
                "optimizer": {
                    "grid": {"num_zenith": 3, "num_azimuth": 8, "max_rounds": 2},
                    "statistical_draws": 8,
                },
            }
        )
    )
    power_csv = root / "power.csv"
    run_simulator(["sweep-power", "--config", str(power_config), "--out", str(power_csv)])
    return azimuth_csv, power_csv


class TestAcceptanceCriterion9:
    def test_plot_pipeline_on_real_artifacts(self, simulator_artifacts, tmp_path):
        azimuth_csv, power_csv = simulator_artifacts

        # rendering both figure kinds succeeds
        for csv_path, kind, name in (
            (azimuth_csv, FigureKind.AZIMUTH_POWER, "azimuth.png"),
            (power_csv, FigureKind.POWER_SCNR, "power.png"),
        ):
            out = render(FigureSpec(csv_path, kind, tmp_path / name))
            assert out.exists() and out.stat().st_size > 0

        # plot-layer mean aggregates match the CLI-emitted means within 1e-9
        rows = read_rows(power_csv)
        embedded = {
            (r["scheme"], r["swept_value"]): r["value_db"]
            for r in rows
            if r["run_index"] == -1
        }
        assert embedded, "power artifact carries CLI mean rows"
        for series in aggregate(rows, FigureKind.POWER_SCNR):
            for x, mean in zip(series.x, series.mean):
                at_artifact_precision = float(format(mean, ".9g"))
                assert abs(at_artifact_precision - embedded[(series.scheme, float(x))]) <= 1e-9

        # kind-mismatched input is refused
        with pytest.raises(KindMismatchError):
            render(FigureSpec(power_csv, FigureKind.AZIMUTH_POWER, tmp_path / "no.png"))
        with pytest.raises(KindMismatchError):
            render(FigureSpec(azimuth_csv, FigureKind.POWER_SCNR, tmp_path / "no.png"))

        print("[criterion 9] PASS plot pipeline: both kinds rendered, means match, mismatch refused")
