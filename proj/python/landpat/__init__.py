"""Landscape metrics and spatial pattern signatures for categorical rasters."""

from ._landpat import (
    Grid,
    LandpatError,
    UsageError,
    calculate_metrics,
    check_landscape,
    distance,
    load_grid,
    run_cli,
    signatures,
    write_grid,
)

__all__ = [
    "Grid",
    "LandpatError",
    "UsageError",
    "calculate_metrics",
    "check_landscape",
    "distance",
    "load_grid",
    "run_cli",
    "signatures",
    "write_grid",
]
