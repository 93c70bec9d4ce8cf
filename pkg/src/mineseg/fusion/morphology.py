"""Binary morphology with a square structuring element.

The plane outside the image is treated as unset, and closing is computed on
a canvas padded by the element radius so the result equals the closing on
the unbounded plane restricted to the image. That makes it idempotent.
"""

import numpy as np
from scipy import ndimage


def _check(size: int) -> int:
    if size < 1 or size % 2 == 0:
        raise ValueError(f"structuring element side must be odd and >= 1, got {size}")
    return size // 2


def dilate(mask: np.ndarray, size: int) -> np.ndarray:
    _check(size)
    return ndimage.maximum_filter(np.asarray(mask, dtype=np.uint8), size=size,
                                  mode="constant", cval=0).astype(bool)


def erode(mask: np.ndarray, size: int) -> np.ndarray:
    _check(size)
    return ndimage.minimum_filter(np.asarray(mask, dtype=np.uint8), size=size,
                                  mode="constant", cval=0).astype(bool)


def close(mask: np.ndarray, size: int) -> np.ndarray:
    r = _check(size)
    if r == 0:
        return np.asarray(mask, dtype=bool).copy()
    padded = np.pad(np.asarray(mask, dtype=np.uint8), r)
    grown = ndimage.maximum_filter(padded, size=size, mode="constant", cval=0)
    shrunk = ndimage.minimum_filter(grown, size=size, mode="nearest")
    return shrunk[r:-r, r:-r].astype(bool)
