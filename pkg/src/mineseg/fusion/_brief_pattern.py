"""Frozen BRIEF test pairs (x1, y1, x2, y2); see scripts/make_brief_pattern.py."""

# Gaussian G II sampling, sigma = 31/5, disc radius 15, Philox seed 20120101
PAIRS = (
    (5, -9, -4, 8), (-4, 3, 3, 6), (5, -11, 7, -9), (-8, -10, -7, -5),
    (-5, -9, -10, 0), (0, 7, 2, 8), (1, -6, -4, -9), (5, 5, -1, -7),
    (13, -1, -6, 0), (0, 0, -5, 3), (-7, 0, -4, -7), (-3, -6, 7, 1),
    (-7, 11, -2, -5), (1, 7, -4, 6), (3, -2, 0, -4), (-2, 13, -4, 0),
    (4, -4, 5, -4), (-12, 0, -2, 5), (-5, 9, 7, 3), (4, -2, -7, -11),
    (-8, 1, -8, 4), (-2, 3, 3, 1), (7, -5, 5, -4), (1, -5, -4, -1),
    (1, 2, 3, 9), (3, -1, -2, 5), (2, 0, -2, -1), (-2, 1, 3, -1),
    (-3, 0, 4, 2), (-1, 8, 3, -1), (11, -5, -14, -5), (1, 0, 9, 0),
    (1, -1, 2, -4), (-2, -2, 0, -11), (8, -3, 2, 0), (-4, -5, 10, 5),
    (-1, 6, -1, 0), (6, 8, 7, -2), (0, 14, -5, -1), (8, -7, -8, 3),
    (1, -4, -2, 0), (6, 8, 1, 5), (3, 11, -4, -3), (9, 8, -1, -11),
    (-1, 3, 9, 6), (9, -3, 3, 2), (4, -7, 2, 7), (2, -3, -12, 0),
    (-10, 0, 6, 1), (3, -3, -3, 0), (-4, 2, -3, 1), (11, -7, 2, 0),
    (-13, -2, 11, -6), (2, -9, -8, -6), (2, 6, -8, 1), (7, -6, 2, 9),
    (-3, -13, -10, 7), (7, 4, 10, 8), (7, -4, 0, 5), (2, 0, -11, -4),
    (2, -11, -5, 2), (0, 6, -1, 2), (6, -6, -11, -3), (-6, 3, -11, -4),
    (-2, -5, -4, -7), (-1, -9, 5, 0), (6, 8, -5, 5), (2, -5, -11, 2),
    (-1, 0, 10, -3), (-5, -2, -4, -9), (3, 2, 1, -9), (11, 8, -7, 8),
    (9, 10, 7, -3), (-6, -7, 4, -4), (5, -2, 9, -2), (-13, 3, 0, 4),
    (-3, 2, -6, 2), (0, -8, -2, 4), (-8, 0, 12, -6), (-4, 0, -10, 4),
    (-3, 2, 3, -2), (-1, 4, -3, -3), (6, 4, -6, 4), (-8, -1, -7, 3),
    (1, -7, 6, -9), (-10, 3, 0, 2), (3, -2, 2, 3), (0, 3, 1, -4),
    (-8, 4, 0, -2), (-3, 5, 1, -2), (13, -6, 11, -2), (2, 3, -3, 3),
    (2, 6, -4, -3), (9, 6, 4, 8), (-7, -2, 1, -8), (1, -4, 0, -4),
    (-14, 1, -1, -11), (5, 0, 1, -2), (1, -3, 3, -3), (4, 9, -12, -5),
    (1, 3, 2, 4), (4, -10, 10, -3), (-5, 3, 14, 1), (-8, -7, -3, -8),
    (-7, -7, -9, -2), (1, -6, -9, 2), (4, -4, -2, -1), (-7, -3, 2, 0),
    (-8, 8, 0, 0), (-4, 2, 1, 12), (3, 7, -8, -4), (-8, -9, 1, -7),
    (13, 2, -7, -3), (0, 3, 11, -3), (-6, 5, -3, -2), (5, -2, -1, 8),
    (11, 6, 0, -7), (6, -10, -9, -12), (12, -5, 8, -8), (1, -7, 8, 5),
    (1, 5, 2, 0), (9, 2, -11, 2), (4, 3, 0, 1), (0, 3, 1, -8),
    (-4, -10, 2, 6), (-6, -2, -1, -7), (1, 3, 4, 0), (-6, 5, 3, -5),
    (6, 2, 7, 3), (5, 0, 2, 4), (1, -9, -3, -2), (-4, 6, -6, -9),
    (0, -7, -5, -1), (-7, -5, 0, 5), (-4, -11, 2, 1), (8, -11, -8, -12),
    (-1, -4, 3, 2), (-10, -11, -1, 5), (-3, 5, -1, 3), (3, 5, -8, 2),
    (0, -7, 1, -7), (2, 1, 2, 4), (-5, -6, -4, -1), (4, 1, -4, -1),
    (-3, -8, -4, -4), (-6, -8, -2, 5), (-4, -1, -2, -1), (12, 1, -10, -3),
    (1, 8, -2, -2), (-2, -3, -3, -5), (0, -4, 2, 4), (-7, 4, 7, 12),
    (0, 2, -3, 1), (0, -6, 3, 4), (3, 0, 8, -1), (1, 13, 1, 4),
    (-6, -2, -4, 6), (-4, 1, 0, 7), (-1, -1, -4, 6), (2, 1, 5, 6),
    (8, -7, 5, 3), (4, 0, -10, 5), (8, -10, -5, 1), (-8, -3, 4, 1),
    (-3, -9, 3, 7), (-9, -9, -6, 11), (5, -8, 2, -6), (4, 0, 0, -13),
    (5, 11, 7, -9), (1, -14, 8, 7), (-4, -5, -3, 8), (4, 13, -2, 5),
    (-7, -5, 9, -3), (3, -4, 1, -4), (-7, -1, 1, -2), (7, 1, 3, 11),
    (-10, -3, 7, 9), (5, -6, 0, -5), (0, 1, -7, 2), (4, 6, 5, 13),
    (5, -5, 6, 5), (1, -4, 1, -11), (5, -2, -1, 3), (-7, -2, -6, -5),
    (-1, 5, -1, -2), (-5, -6, -1, -2), (-3, 9, 1, 1), (1, -5, -1, 3),
    (-1, -6, 7, -4), (-2, 2, -4, 3), (-5, -4, 2, -2), (1, 6, -3, -3),
    (-4, 6, -4, -2), (-2, -7, 1, 4), (2, -2, -5, 6), (2, 5, -5, -2),
    (-12, 4, -9, 8), (-1, 3, -2, 12), (-1, 1, 5, 0), (12, -2, 10, -1),
    (-13, -1, 1, -10), (-3, 4, -8, 1), (4, 0, -7, 3), (8, 2, -4, -5),
    (-2, -13, 4, 4), (3, -7, 5, 1), (1, 0, 6, -2), (9, -3, -8, -2),
    (5, -3, 9, -2), (-3, 0, 2, 3), (5, -5, 2, 12), (3, 5, 2, 3),
    (6, -5, -6, -6), (3, -6, 2, 4), (0, -7, 10, 4), (5, 5, 8, -1),
    (-3, -11, 1, 0), (-6, 3, -2, 10), (5, 3, -1, -1), (-3, 3, -9, -2),
    (5, 4, 2, 4), (2, 0, -3, -1), (-12, 2, -4, -8), (2, -10, 9, -9),
    (8, -3, -1, 8), (-3, -6, -1, 4), (10, 3, -3, 5), (-7, 10, 7, 5),
    (-3, -6, 12, 9), (10, -2, -2, -3), (-1, 10, 5, 9), (-3, 8, 6, -7),
    (-2, -2, 0, -11), (-2, -2, 0, -4), (7, -8, 8, 3), (-4, -5, 2, 6),
    (5, -1, -2, 6), (0, -4, -9, -5), (10, 6, -3, -9), (-3, -3, -2, 5),
    (-1, -1, -8, 10), (1, 0, 0, 5), (2, 2, 11, -3), (3, -7, 0, 12),
    (-3, -2, 5, 8), (1, 5, 1, 3), (-3, -8, 9, -6), (5, 1, -3, 10),
    (-4, -7, 4, -4), (13, 4, -4, 3), (4, -6, -12, -5), (6, -11, -4, -1),
    (3, 3, 6, 11), (8, 8, 1, -2), (5, -3, 4, 1), (-11, 5, 9, -5),
)
