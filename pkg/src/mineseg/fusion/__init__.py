"""Two-model mask alignment, intersection, closing and grid rules."""
