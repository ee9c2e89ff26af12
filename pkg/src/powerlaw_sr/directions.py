"""Seeded unit directions for sliced transport.

Direction ``k`` is drawn from its own generator keyed by
``(seed, *stream, k)``, so any subset of slices can be reproduced
independently of the others.
"""
import numpy as np


def random_directions(n, dim, seed, stream=()):
    """Return an (n, dim) array of unit vectors, uniform on the sphere."""
    out = np.empty((n, dim))
    for k in range(n):
        rng = np.random.default_rng([int(seed), *map(int, stream), k])
        if dim == 1:
            out[k] = rng.choice([-1.0, 1.0])
            continue
        v = rng.standard_normal(dim)
        while not np.any(v):
            v = rng.standard_normal(dim)
        out[k] = v / np.linalg.norm(v)
    return out
