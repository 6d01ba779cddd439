"""Reference implementations used only by the tests.

None of these call into the compiled kernels or the library's batch paths.
"""

import itertools


def rect_scalar(x, center, width):
    return 1 if abs((x - center) / width) < 0.5 else 0


def box_contains(centers, widths, point):
    return int(all(rect_scalar(v, c, w) for v, c, w in zip(point, centers, widths)))


def grid_threshold_tables(n, max_weight):
    """Every truth table (as an int) realized by integer weights in
    ``[-max_weight, max_weight]`` and a half-integer threshold.

    Half-integer thresholds between the reachable integer sums cover every
    strict separation by integer weights.
    """
    patterns = [[(k >> j) & 1 for j in range(n)] for k in range(1 << n)]
    found = set()
    rng = range(-max_weight, max_weight + 1)
    for w in itertools.product(rng, repeat=n):
        sums = [sum(wj * pj for wj, pj in zip(w, p)) for p in patterns]
        for t2 in range(2 * min(sums) - 1, 2 * max(sums) + 2, 2):
            t = t2 / 2
            found.add(sum(1 << k for k, s in enumerate(sums) if s > t))
    return found


def perceptron_output(weights, t_s, pattern):
    return 1 if sum(c * p for c, p in zip(weights, pattern)) > t_s else 0
