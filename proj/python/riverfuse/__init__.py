"""Satellite-AIS fusion engine for inland waterways."""

from ._riverfuse import (
    FormatError,
    classify_direction,
    convex_clip,
    f1,
    fuse_scene,
    generate_fixture,
    mae,
    parse_ais_csv,
    rotated_iou,
    select_scenes,
    smape_pct,
    __version__,
)

__all__ = [
    "FormatError",
    "classify_direction",
    "convex_clip",
    "f1",
    "fuse_scene",
    "generate_fixture",
    "mae",
    "parse_ais_csv",
    "rotated_iou",
    "select_scenes",
    "smape_pct",
    "__version__",
]
