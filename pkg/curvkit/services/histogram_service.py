"""
Histogram service: deterministic SVG histograms of curvature estimates
"""

from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from curvkit.config.constants import DEFAULT_HISTOGRAM_BINS
from curvkit.exceptions import OutputError
from curvkit.models.experiment import HistogramSummary
from curvkit.utils.logger import logger

# Fixed salt so SVG element ids, and therefore the file bytes, are reproducible
SVG_HASH_SALT = 'curvkit'


def histogram_counts(values: np.ndarray, bins: int, log_log: bool = False):
    """Bin counts and edges; log-log mode bins positive values on a geometric grid"""
    if bins < 1:
        raise OutputError(f"bins must be >= 1, got {bins}")
    values = np.asarray(values, dtype=np.float64).ravel()
    finite = values[np.isfinite(values)]
    if finite.size < values.size:
        logger.warning(f"⚠️ Dropping {values.size - finite.size} non-finite values from histogram")
    if finite.size == 0:
        raise OutputError("histogram needs at least one finite value")

    if log_log:
        positive = finite[finite > 0]
        if positive.size == 0:
            raise OutputError("log-log histogram needs at least one positive value")
        low, high = positive.min(), positive.max()
        if low == high:
            low, high = low / 2.0, high * 2.0
        return np.histogram(positive, bins=np.geomspace(low, high, bins + 1))
    return np.histogram(finite, bins=bins)


def emit_histogram(
    values: Sequence[float],
    path: Optional[Union[str, Path]] = None,
    bins: int = DEFAULT_HISTOGRAM_BINS,
    log_log: bool = False,
    title: Optional[str] = None,
    xlabel: str = 'estimated scalar curvature',
    reference: Optional[float] = None,
) -> HistogramSummary:
    """
    Render a histogram to a self-contained SVG

    Args:
        values: Values to bin (non-finite entries are dropped)
        path: Output SVG; only counts are returned when omitted
        bins: Number of bins, >= 1
        log_log: Log-scaled axes over the positive values
        title: Figure title
        xlabel: Horizontal axis label
        reference: Optional vertical marker, e.g. the true curvature

    Returns:
        HistogramSummary with the plotted counts and edges
    """
    counts, edges = histogram_counts(values, bins, log_log)
    summary = HistogramSummary(counts=counts.tolist(), edges=edges.tolist(), log_log=log_log)
    if path is None:
        return summary

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context({'svg.hashsalt': SVG_HASH_SALT, 'svg.fonttype': 'path'}):
        figure = Figure(figsize=(6.0, 4.0))
        ax = figure.subplots()
        ax.stairs(counts, edges, fill=True, color='#4c72b0')
        if reference is not None:
            ax.axvline(reference, color='#c44e52', linestyle='--', linewidth=1.0)
        if log_log:
            ax.set_xscale('log')
            ax.set_yscale('log')
        ax.set_xlabel(xlabel)
        ax.set_ylabel('count')
        if title:
            ax.set_title(title)
        figure.savefig(path, format='svg', metadata={'Date': None})

    summary.path = str(path)
    logger.debug(f"Histogram written to {path}")
    return summary
