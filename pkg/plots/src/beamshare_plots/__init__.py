"""Plotting companion for beamshare experiment output."""

from .figures import (
    AREA_CDF,
    AREA_VS_SLOT,
    BOUNDS_COLUMNS,
    KINDS,
    RUNS_COLUMNS,
    SLOTS_COLUMNS,
    TAU_CDF,
    FigureSpec,
    PlotError,
    empirical_cdf,
    final_areas,
    mean_curve,
    read_table,
    render,
)

__all__ = [
    "AREA_CDF",
    "AREA_VS_SLOT",
    "BOUNDS_COLUMNS",
    "KINDS",
    "RUNS_COLUMNS",
    "SLOTS_COLUMNS",
    "TAU_CDF",
    "FigureSpec",
    "PlotError",
    "empirical_cdf",
    "final_areas",
    "mean_curve",
    "read_table",
    "render",
]
