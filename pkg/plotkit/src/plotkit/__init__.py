"""Figure generation for the CV position-verification simulator outputs."""

from .histogram_plot import plot_score_histograms
from .security_plot import plot_security_region
from .tables import RoundsTable, SweepTable, TableFormatError

__all__ = [
    "RoundsTable",
    "SweepTable",
    "TableFormatError",
    "plot_score_histograms",
    "plot_security_region",
]
