"""Rect predicates, hyperrectangular domains, and the selective receptron
whose activation equals the domain indicator.

Domain membership is the product of per-axis rect predicates.  By De Morgan
the product's complement is the OR of violated axes, and the normalized-OR
ratio ``N / D`` collapses to the step ``h(N - t)`` because the violation
count ``N`` is a non-negative integer.  A double-threshold unit with
summands ``1 - f_i(x_i)`` and interval ``(t_l, t]``, ``t_l < 0 < t <= 1``,
therefore fires exactly inside the box.

Boundaries (``|x - c| / width == 1/2``) count as outside.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from receptron.core import (
    ArityError,
    Double,
    Receptron,
    SelectiveRect,
    ThresholdMode,
    as_input,
    rect,
)


@dataclass(frozen=True)
class RectPredicate:
    center: float
    width: float

    def __post_init__(self):
        if not math.isfinite(self.center):
            raise ValueError(f"center must be finite, got {self.center!r}")
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"width must be positive and finite, got {self.width!r}")

    def __call__(self, x: float) -> int:
        return rect_eval(self, x)


def rect_eval(p: RectPredicate, x: float) -> int:
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    return rect((x - p.center) / p.width)


def on_boundary(p: RectPredicate, x: float) -> bool:
    return abs((x - p.center) / p.width) == 0.5


@dataclass(frozen=True)
class HyperRectDomain:
    """Axis-aligned box: per-axis centers and full widths (all > 0)."""

    centers: tuple[float, ...]
    widths: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple(float(c) for c in self.centers))
        object.__setattr__(self, "widths", tuple(float(w) for w in self.widths))
        if len(self.centers) != len(self.widths):
            raise ValueError(
                f"center/width length mismatch: {len(self.centers)} vs {len(self.widths)}"
            )
        if not self.centers:
            raise ValueError("domain needs at least one axis")
        # validates every axis
        self.predicates  # noqa: B018

    @classmethod
    def cube(cls, center: Sequence[float], side: float) -> "HyperRectDomain":
        return cls(tuple(center), (side,) * len(center))

    @property
    def arity(self) -> int:
        return len(self.centers)

    @property
    def predicates(self) -> tuple[RectPredicate, ...]:
        return tuple(RectPredicate(c, w) for c, w in zip(self.centers, self.widths))

    @property
    def volume(self) -> float:
        return math.prod(self.widths)

    def bounds(self, pad: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
        """Lower/upper corners, each axis padded by ``pad`` times its width."""
        c = np.array(self.centers)
        w = np.array(self.widths)
        return c - (0.5 + pad) * w, c + (0.5 + pad) * w

    def __contains__(self, x) -> bool:
        return domain_contains(self, x) == 1


def _check_arity(d: HyperRectDomain, x) -> tuple[float, ...]:
    try:
        return as_input(x, d.arity)
    except ArityError:
        raise ArityError(f"domain has arity {d.arity}, point has {len(tuple(x))}") from None


def domain_contains(d: HyperRectDomain, x) -> int:
    x = _check_arity(d, x)
    result = 1
    for p, v in zip(d.predicates, x):
        result *= rect_eval(p, v)
    return result


def domain_contains_many(d: HyperRectDomain, X) -> np.ndarray:
    """Row-wise :func:`domain_contains` using numpy only (no compiled kernels)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != d.arity:
        raise ArityError(f"domain has arity {d.arity}, batch has shape {X.shape}")
    inside = np.ones(X.shape[0], dtype=np.int8)
    for j, p in enumerate(d.predicates):
        inside &= (np.abs((X[:, j] - p.center) / p.width) < 0.5).astype(np.int8)
    return inside


def boundary_rows(d: HyperRectDomain, X: np.ndarray) -> np.ndarray:
    """Boolean mask of rows where some coordinate sits exactly on a box face."""
    c = np.array(d.centers)
    w = np.array(d.widths)
    return np.any(np.abs((X - c) / w) == 0.5, axis=1)


def violation_count(d: HyperRectDomain, x) -> tuple[int, int]:
    """``(N, D)``: number of violated axes and the normalizer ``N + prod f_i``."""
    x = _check_arity(d, x)
    f = [rect_eval(p, v) for p, v in zip(d.predicates, x)]
    n_viol = sum(1 - fi for fi in f)
    return n_viol, n_viol + math.prod(f)


def selective_weight(p: RectPredicate, axis: int = 0) -> SelectiveRect:
    return SelectiveRect(axis, p.center, p.width)


def selective_receptron(d: HyperRectDomain, mode: ThresholdMode) -> Receptron:
    """Selective unit for ``d`` with an arbitrary threshold mode (no range checks)."""
    weights = tuple(selective_weight(p, i) for i, p in enumerate(d.predicates))
    return Receptron(d.arity, weights, mode)


def check_thresholds(t: float, t_l: float) -> None:
    # t = 1 is excluded: the interval (t_l, t] would then accept N = 1
    if not 0 < t < 1:
        raise ValueError(f"threshold t must satisfy 0 < t < 1, got {t!r}")
    if not t_l < 0:
        raise ValueError(f"lower threshold t_l must be negative, got {t_l!r}")


def build_selective_receptron(
    d: HyperRectDomain, t: float = 0.5, t_l: float = -0.5
) -> Receptron:
    """Single receptron that fires exactly on the interior of ``d``."""
    check_thresholds(t, t_l)
    return selective_receptron(d, Double(t_l, t))


# -- sampling and the equivalence harness -------------------------------------


class UniformSampler:
    """Seeded uniform points in the box ``[lo, hi]`` (per-axis bounds)."""

    def __init__(self, lo, hi, seed: int = 0):
        self.lo = np.asarray(lo, dtype=np.float64)
        self.hi = np.asarray(hi, dtype=np.float64)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be 1-D arrays of equal length")
        self.rng = np.random.default_rng(seed)

    @property
    def arity(self) -> int:
        return len(self.lo)

    def __call__(self, count: int) -> np.ndarray:
        return self.rng.uniform(self.lo, self.hi, size=(count, len(self.lo)))


def draw_off_boundary(
    sampler: Callable[[int], np.ndarray],
    count: int,
    on_edge: Callable[[np.ndarray], np.ndarray],
    max_rounds: int = 100,
) -> np.ndarray:
    """Draw ``count`` points, redrawing any row flagged by ``on_edge``."""
    pts = np.asarray(sampler(count), dtype=np.float64)
    for _ in range(max_rounds):
        bad = np.flatnonzero(on_edge(pts))
        if bad.size == 0:
            return pts
        pts[bad] = sampler(bad.size)
    raise RuntimeError("sampler keeps landing on domain boundaries")


@dataclass
class EquivalenceReport:
    name: str
    tested: int
    mismatches: int
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def lines(self, limit: int = 10) -> list[str]:
        out = [f"suite: {self.name}", f"points: {self.tested}", f"mismatches: {self.mismatches}"]
        for point, got, want in self.counterexamples[:limit]:
            coords = ", ".join(repr(float(v)) for v in point)
            out.append(f"counterexample: ({coords}) unit={got} oracle={want}")
        return out


def chunked_apply(fn, X: np.ndarray, workers: int = 1, chunk: int = 8192) -> list:
    """``[fn(X[s:s+chunk]) for s in ...]``, optionally on a thread pool.

    Results come back in chunk order whatever the worker count.
    """
    starts = range(0, len(X), chunk)
    blocks = (X[s:s + chunk] for s in starts)
    if workers > 1 and len(X) > chunk:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, blocks))
    return [fn(b) for b in blocks]


def compare_batches(
    name: str,
    X: np.ndarray,
    candidate: Callable[[np.ndarray], np.ndarray],
    oracle: Callable[[np.ndarray], np.ndarray],
    workers: int = 1,
    chunk: int = 8192,
    keep: int = 100,
) -> EquivalenceReport:
    """Evaluate ``candidate`` and ``oracle`` on the rows of ``X`` and diff them.

    Rows are split into fixed-size chunks; results are merged by chunk index so
    the report does not depend on ``workers``.
    """
    results = chunked_apply(
        lambda block: (np.asarray(candidate(block)), np.asarray(oracle(block))),
        X, workers=workers, chunk=chunk,
    )
    mismatches = 0
    examples = []
    for start, (got, want) in zip(range(0, len(X), chunk), results):
        bad = np.flatnonzero(got != want)
        mismatches += bad.size
        for i in bad[: max(0, keep - len(examples))]:
            examples.append((tuple(X[start + i]), int(got[i]), int(want[i])))
    return EquivalenceReport(name, len(X), mismatches, examples)


def verify_equivalence(
    d: HyperRectDomain,
    sampler: Callable[[int], np.ndarray],
    count: int,
    unit: Receptron | None = None,
    workers: int = 1,
) -> EquivalenceReport:
    """Check the selective unit for ``d`` against the rect-product oracle.

    ``unit`` defaults to :func:`build_selective_receptron` ``(d)``.  Points
    exactly on a face are redrawn.
    """
    unit = unit if unit is not None else build_selective_receptron(d)
    X = draw_off_boundary(sampler, count, lambda P: boundary_rows(d, P))
    return compare_batches(
        "selective vs rect-product oracle",
        X,
        unit.activate_many,
        lambda B: domain_contains_many(d, B),
        workers=workers,
    )


def random_domain(rng: np.random.Generator, n: int, span: float = 10.0,
                  min_width: float = 0.1, max_width: float = 5.0) -> HyperRectDomain:
    centers = rng.uniform(-span, span, size=n)
    widths = rng.uniform(min_width, max_width, size=n)
    return HyperRectDomain(tuple(centers), tuple(widths))
