"""Metric rows and deterministic CSV/JSON artifact emission.

The CSV contract is the external interface consumed by plotting tools:

    sweep_kind,swept_value,scheme,metric,value_db,seed,run_index

Values print at 9 significant digits, rows sort by (swept_value, scheme,
run_index), and repeated runs of the same configuration produce
byte-identical files. Monte-Carlo sweeps carry per-run rows (run_index
0..R-1) plus one mean row per group at run_index -1, whose value is the
arithmetic mean of the per-run dB values.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, DegeneracyError

MEAN_RUN_INDEX = -1

CSV_HEADER = "sweep_kind,swept_value,scheme,metric,value_db,seed,run_index"


class SweepKind(str, Enum):
    AZIMUTH = "Azimuth"
    POWER = "Power"


class Scheme(str, Enum):
    RAS = "RAS"
    FIXED = "Fixed"
    MA = "MA"


class MetricKind(str, Enum):
    RECEIVED_POWER = "ReceivedPower"
    SINR = "SINR"
    SCNR = "SCNR"
    SNR = "SNR"


SCHEME_BY_NAME = {"ras": Scheme.RAS, "fixed": Scheme.FIXED, "ma": Scheme.MA}


@dataclass(frozen=True)
class MetricRow:
    """One metric sample of one scheme at one sweep point."""

    sweep_kind: SweepKind
    swept_value: float
    scheme: Scheme
    metric: MetricKind
    value_db: float
    seed: int
    run_index: int

    def __post_init__(self):
        if not math.isfinite(self.value_db):
            raise DegeneracyError(
                f"non-finite metric: {self.metric.value} of {self.scheme.value} "
                f"at sweep value {self.swept_value} (run {self.run_index})"
            )


def _sig9(value: float) -> str:
    """Format a float at 9 significant digits (bit-stable output contract)."""
    return format(float(value), ".9g")


def quantize_db(value: float) -> float:
    """Round a dB value to the artifact precision (9 significant digits).

    Sweeps quantize per-run metric values at row creation so that embedded
    mean rows are exact arithmetic means of the values a consumer reads
    back from the file.
    """
    return float(_sig9(value))


def _sort_key(row: MetricRow):
    return (row.swept_value, row.scheme.value, row.run_index)


def rows_to_csv(rows) -> str:
    """Render rows as the canonical CSV text."""
    rows = sorted(rows, key=_sort_key)
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.sweep_kind.value},{_sig9(r.swept_value)},{r.scheme.value},"
            f"{r.metric.value},{_sig9(r.value_db)},{r.seed},{r.run_index}"
        )
    return "\n".join(lines) + "\n"


def rows_to_records(rows) -> list:
    """Rows as plain dicts mirroring the CSV columns (values 9-sig-digit)."""
    rows = sorted(rows, key=_sort_key)
    return [
        {
            "sweep_kind": r.sweep_kind.value,
            "swept_value": float(_sig9(r.swept_value)),
            "scheme": r.scheme.value,
            "metric": r.metric.value,
            "value_db": float(_sig9(r.value_db)),
            "seed": r.seed,
            "run_index": r.run_index,
        }
        for r in rows
    ]


def emit_results(rows, fmt: str = "csv", path=None, metadata: dict | None = None) -> Path:
    """Write rows to a CSV or JSON artifact file and return its path.

    The JSON form mirrors the CSV records exactly and adds a metadata
    object (fully resolved configuration, software version, root seed).
    """
    rows = list(rows)
    if not rows:
        raise ConfigurationError("cannot emit an empty row set")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"format must be 'csv' or 'json', got {fmt!r}")
    if path is None:
        raise ConfigurationError("an output path is required")
    path = Path(path)
    if fmt == "csv":
        payload = rows_to_csv(rows)
    else:
        document = {
            "metadata": {
                "software": "rasim",
                "version": __version__,
                "root_seed": rows[0].seed,
                **(metadata or {}),
            },
            "rows": rows_to_records(rows),
        }
        payload = json.dumps(document, indent=2, sort_keys=True) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def rows_from_records(records) -> list:
    """Rebuild MetricRow objects from JSON records (serialization inverse)."""
    return [
        MetricRow(
            sweep_kind=SweepKind(rec["sweep_kind"]),
            swept_value=float(rec["swept_value"]),
            scheme=Scheme(rec["scheme"]),
            metric=MetricKind(rec["metric"]),
            value_db=float(rec["value_db"]),
            seed=int(rec["seed"]),
            run_index=int(rec["run_index"]),
        )
        for rec in records
    ]
