"""rasplots: figure rendering for rasim sweep artifacts.

Reads the simulator's CSV contract and renders the two comparison figures
(received power vs. azimuth, SCNR vs. transmit power) with per-scheme
lines and Monte-Carlo deviation bands. Display-side aggregation only; the
CSV remains the source of numerical truth.
"""

__version__ = "0.1.0"

from .figures import (
    AggregateMismatchError,
    FigureKind,
    FigureSpec,
    KindMismatchError,
    PlotError,
    SchemaMismatchError,
    SchemeSeries,
    aggregate,
    read_rows,
    render,
)
