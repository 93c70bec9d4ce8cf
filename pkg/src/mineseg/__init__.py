"""Low-light mine-scene instance segmentation toolkit.

Enhancement, dataset preparation, segmentation losses, two-model mask
fusion and evaluation; neural segmenters plug in through instance JSON files.
"""

__version__ = "0.1.0"
