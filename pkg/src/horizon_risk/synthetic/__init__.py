from .contours import CONTOURS, parse_contour
from .grid import ImageGrid
from .horizon import (
    edge_rows,
    make_contour,
    pixel_average,
    region_partition,
    render,
    validate_contour,
)
from .noise import GENERATOR_NAME, add_noise, noise_field

__all__ = [
    "CONTOURS",
    "GENERATOR_NAME",
    "ImageGrid",
    "add_noise",
    "edge_rows",
    "make_contour",
    "noise_field",
    "parse_contour",
    "pixel_average",
    "region_partition",
    "render",
    "validate_contour",
]
