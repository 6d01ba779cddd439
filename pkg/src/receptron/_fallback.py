"""Pure Python / numpy versions of the compiled kernels in ``_kernels.pyx``.

Both modules expose the same functions with the same argument layout, so
``receptron._accel`` can swap one for the other at import time.
"""

import numpy as np


def rect_complement_sum(X, axes, centers, widths):
    """Sum of ``1 - rect((x[axis] - center) / width)`` over the listed weights, per row."""
    X = np.asarray(X, dtype=np.float64)
    out = np.zeros(X.shape[0], dtype=np.float64)
    for axis, center, width in zip(axes, centers, widths):
        u = (X[:, axis] - center) / width
        out += np.where(np.abs(u) < 0.5, 0.0, 1.0)
    return out


def min_violations(X, centers, widths):
    """Minimum over domains of the per-domain violation count.

    ``X`` holds the fanned-out input: domain ``d`` reads columns
    ``d*n .. d*n + n - 1``.
    """
    X = np.asarray(X, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    widths = np.asarray(widths, dtype=np.float64)
    m, n = centers.shape
    best = np.full(X.shape[0], np.inf)
    for d in range(m):
        block = X[:, d * n:(d + 1) * n]
        u = (block - centers[d]) / widths[d]
        count = np.sum(np.abs(u) >= 0.5, axis=1).astype(np.float64)
        np.minimum(best, count, out=best)
    return best


def orbit_labels(maps):
    """Label every truth table with the smallest table of its orbit.

    ``maps`` is a ``(G, P)`` integer array; row ``g`` sends output pattern
    ``k`` to source pattern ``maps[g, k]``.  The orbit is closed under every
    row and under output complement.  Tables are integers with bit ``k``
    holding the output for pattern ``k``.
    """
    maps = [list(map(int, row)) for row in np.asarray(maps)]
    patterns = len(maps[0])
    ntables = 1 << patterns
    mask = ntables - 1
    labels = [-1] * ntables
    for table in range(ntables):
        if labels[table] >= 0:
            continue
        for row in maps:
            image = 0
            for k, src in enumerate(row):
                image |= ((table >> src) & 1) << k
            labels[image] = table
            labels[image ^ mask] = table
    return np.asarray(labels, dtype=np.int64)
