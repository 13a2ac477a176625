"""Render simulator sweep artifacts into publication-style figures.

Consumes the CSV contract of the simulator's ``emit_results`` verbatim:

    sweep_kind,swept_value,scheme,metric,value_db,seed,run_index

and renders one line per scheme with a shaded +/-1 standard-deviation band
over the Monte-Carlo rows. The plot layer never recomputes physics: its
only arithmetic is the mean/std aggregation for display, and whenever the
artifact carries its own mean rows (run_index -1) they must agree with the
recomputed means to 1e-9 or rendering is refused - the CSV stays the
single source of numerical truth.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_COLUMNS = (
    "sweep_kind",
    "swept_value",
    "scheme",
    "metric",
    "value_db",
    "seed",
    "run_index",
)

MEAN_RUN_INDEX = -1

SCHEME_ORDER = ("RAS", "Fixed", "MA")

DEFAULT_STYLES = {
    "RAS": {"color": "#d62728", "marker": "o"},
    "Fixed": {"color": "#1f77b4", "marker": "s"},
    "MA": {"color": "#2ca02c", "marker": "^"},
}

# metadata pinned per format so repeated renders are byte-identical
_DETERMINISTIC_METADATA = {
    ".png": {"Software": "rasplots"},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
}


class PlotError(Exception):
    """Base class for rendering failures."""


class SchemaMismatchError(PlotError):
    """The CSV does not conform to the sweep artifact contract."""


class KindMismatchError(PlotError):
    """The requested figure kind does not match the CSV's sweep_kind."""


class AggregateMismatchError(PlotError):
    """Plot-layer means disagree with the artifact's own mean rows."""


class FigureKind(str, Enum):
    AZIMUTH_POWER = "AzimuthPower"
    POWER_SCNR = "PowerSCNR"


_KIND_PROPERTIES = {
    FigureKind.AZIMUTH_POWER: {
        "sweep_kind": "Azimuth",
        "metric": "ReceivedPower",
        "x_label": "user azimuth (rad)",
        "y_label": "received power (dBm)",
        "title": "Received power vs. user azimuth",
    },
    FigureKind.POWER_SCNR: {
        "sweep_kind": "Power",
        "metric": "SCNR",
        "x_label": "transmit power (dBm)",
        "y_label": "SCNR (dB)",
        "title": "SCNR vs. transmit power",
    },
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: input artifact, figure kind, output image."""

    csv_path: Path
    kind: FigureKind
    output_path: Path
    styles: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "csv_path", Path(self.csv_path))
        object.__setattr__(self, "output_path", Path(self.output_path))
        object.__setattr__(self, "kind", FigureKind(self.kind))


def read_rows(csv_path) -> list:
    """Parse a sweep artifact, validating the column contract.

    Raises SchemaMismatchError naming the offending column on any
    deviation from the expected header or on unparseable cells.
    """
    path = Path(csv_path)
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = tuple(reader.fieldnames or ())
        for column in EXPECTED_COLUMNS:
            if column not in header:
                raise SchemaMismatchError(f"{path}: missing column {column!r}")
        for column in header:
            if column not in EXPECTED_COLUMNS:
                raise SchemaMismatchError(f"{path}: unexpected column {column!r}")
        rows = []
        for line_number, record in enumerate(reader, start=2):
            try:
                rows.append(
                    {
                        "sweep_kind": record["sweep_kind"],
                        "swept_value": float(record["swept_value"]),
                        "scheme": record["scheme"],
                        "metric": record["metric"],
                        "value_db": float(record["value_db"]),
                        "seed": int(record["seed"]),
                        "run_index": int(record["run_index"]),
                    }
                )
            except (TypeError, ValueError) as exc:
                raise SchemaMismatchError(
                    f"{path}:{line_number}: unparseable row ({exc})"
                ) from exc
    if not rows:
        raise SchemaMismatchError(f"{path}: artifact holds no rows")
    return rows


@dataclass(frozen=True)
class SchemeSeries:
    """Aggregated display series of one scheme."""

    scheme: str
    x: np.ndarray
    mean: np.ndarray
    std: np.ndarray


def aggregate(rows, kind: FigureKind) -> list:
    """Group rows by scheme and sweep value; mean/std over Monte-Carlo runs.

    Refuses kind mismatches, and cross-checks any embedded mean rows
    (run_index -1) against the recomputed means at 1e-9.
    """
    props = _KIND_PROPERTIES[FigureKind(kind)]
    kinds = {r["sweep_kind"] for r in rows}
    if kinds != {props["sweep_kind"]}:
        raise KindMismatchError(
            f"figure kind {FigureKind(kind).value} requires sweep_kind "
            f"{props['sweep_kind']!r}, artifact holds {sorted(kinds)}"
        )
    rows = [r for r in rows if r["metric"] == props["metric"]]
    if not rows:
        raise SchemaMismatchError(f"artifact holds no {props['metric']} rows")

    series = []
    schemes = sorted({r["scheme"] for r in rows}, key=SCHEME_ORDER.index)
    for scheme in schemes:
        grouped = {}
        embedded_means = {}
        for r in rows:
            if r["scheme"] != scheme:
                continue
            if r["run_index"] == MEAN_RUN_INDEX:
                embedded_means[r["swept_value"]] = r["value_db"]
            else:
                grouped.setdefault(r["swept_value"], []).append(r["value_db"])
        x = np.array(sorted(grouped))
        mean = np.array([np.mean(grouped[v]) for v in x])
        std = np.array([np.std(grouped[v]) for v in x])
        for value, embedded in embedded_means.items():
            # the artifact carries 9 significant digits, so compare at the
            # artifact's own precision
            recomputed = float(format(np.mean(grouped[value]), ".9g"))
            if not math.isclose(recomputed, embedded, rel_tol=0.0, abs_tol=1e-9):
                raise AggregateMismatchError(
                    f"{scheme} at sweep value {value}: artifact mean {embedded!r} "
                    f"disagrees with recomputed mean {recomputed!r}"
                )
        series.append(SchemeSeries(scheme=scheme, x=x, mean=mean, std=std))
    return series


def render(spec: FigureSpec) -> Path:
    """Render one figure from a sweep artifact and return the image path.

    The output format follows the file extension; repeated renders of the
    same artifact are byte-identical under the pinned style.
    """
    rows = read_rows(spec.csv_path)
    series = aggregate(rows, spec.kind)
    props = _KIND_PROPERTIES[spec.kind]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        for entry in series:
            style = {**DEFAULT_STYLES.get(entry.scheme, {}), **spec.styles.get(entry.scheme, {})}
            color = style.get("color")
            ax.plot(
                entry.x,
                entry.mean,
                label=entry.scheme,
                color=color,
                marker=style.get("marker"),
                markersize=4,
                linewidth=1.5,
            )
            if np.any(entry.std > 0.0):
                ax.fill_between(
                    entry.x,
                    entry.mean - entry.std,
                    entry.mean + entry.std,
                    color=color,
                    alpha=0.18,
                    linewidth=0.0,
                )
        ax.set_xlabel(props["x_label"])
        ax.set_ylabel(props["y_label"])
        ax.set_title(props["title"])
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        metadata = _DETERMINISTIC_METADATA.get(spec.output_path.suffix.lower())
        fig.savefig(spec.output_path, dpi=150, metadata=metadata)
    finally:
        plt.close(fig)
    return spec.output_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rasplot",
        description="Render a rasim sweep artifact (CSV) into a figure.",
    )
    parser.add_argument("csv", type=Path, help="sweep artifact path")
    parser.add_argument(
        "--kind",
        choices=[k.value for k in FigureKind],
        required=True,
        help="figure kind; must match the artifact's sweep_kind",
    )
    parser.add_argument("--out", type=Path, required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        path = render(FigureSpec(args.csv, FigureKind(args.kind), args.out))
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
