from pathlib import Path

import numpy as np
import pytest

from mineseg.raster import Instance, InstanceSet

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "corpus"
GOLDEN = DATA / "golden"


def rect(shape, x0, y0, x1, y1):
    m = np.zeros(shape, dtype=bool)
    m[y0:y1, x0:x1] = True
    return m


def iset(image_id, shape, *items):
    """Build an InstanceSet from (class, mask[, score]) tuples."""
    insts = [Instance(it[0], it[1], *(it[2:])) for it in items]
    return InstanceSet(image_id, shape[1], shape[0], tuple(insts))


@pytest.fixture
def corpus():
    return CORPUS
