"""Per-class coloured mask overlays."""

import numpy as np
from scipy import ndimage

from .raster import ClassId, InstanceSet, RasterImage

# fixed RGB palette, one colour per class
PALETTE = {
    ClassId.ROAD: (0.55, 0.35, 0.15),
    ClassId.WALL: (0.35, 0.45, 0.85),
    ClassId.ROOF: (0.60, 0.20, 0.75),
    ClassId.PEOPLE: (0.95, 0.15, 0.15),
    ClassId.EQUIPMENT: (1.00, 0.80, 0.10),
    ClassId.CORRIDOR: (0.15, 0.80, 0.40),
    ClassId.SURROUNDING: (0.50, 0.50, 0.50),
}
ALPHA = 0.5


def render_overlay(image: RasterImage, iset: InstanceSet, alpha: float = ALPHA) -> RasterImage:
    """Blend each instance's class colour over the image and outline it at full strength."""
    rgb = np.repeat(image.data, 3, axis=2) if image.channels == 1 else image.data.copy()
    for inst in iset:
        color = np.array(PALETTE[inst.class_id])
        m = inst.mask
        rgb[m] = (1 - alpha) * rgb[m] + alpha * color
        edge = m & ~ndimage.binary_erosion(m)
        rgb[edge] = color
    return RasterImage(np.clip(rgb, 0.0, 1.0))
