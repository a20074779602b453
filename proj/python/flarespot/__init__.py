"""Flare spot detection and removal."""

from ._flarespot import (
    __version__,
    detect,
    dice,
    flare_mask,
    inpaint,
    precision_recall_f,
    remove,
    render_scene,
    rgb_to_lab,
)

__all__ = [
    "__version__",
    "detect",
    "dice",
    "flare_mask",
    "inpaint",
    "precision_recall_f",
    "remove",
    "render_scene",
    "rgb_to_lab",
]
