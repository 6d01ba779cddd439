"""The receptron unit: weighted summation with input-dependent weights,
followed by single- or double-threshold activation.

A unit computes ``S(x) = sum_j x_j * w_j(x)`` and fires when ``S`` exceeds
a threshold (single mode) or lies in ``(t_l, t_h]`` (double mode).  With
all-constant weights and a single threshold it is an ordinary perceptron.

Every weight kind reports its *summand* ``x_j * w_j(x)`` directly.  The
selective kind has ``w_j(x_j) = (1 - f_j(x_j)) / x_j``, which is singular at
``x_j = 0`` while the summand ``1 - f_j(x_j)`` is not, so summation never
materializes the raw weight.  ``raw_weight`` exists for plotting and raises
:class:`SingularWeightError` at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from receptron import _accel


class ArityError(ValueError):
    """Input length does not match the unit's arity."""


class LookupMiss(KeyError):
    """A lookup weight has no entry for the presented input pattern."""


class SingularWeightError(ArithmeticError):
    """The raw weight value is undefined at this input (division by zero)."""


def as_input(x, arity: int | None = None) -> tuple[float, ...]:
    values = tuple(float(v) for v in x)
    if not values:
        raise ArityError("input vector must have at least one entry")
    if arity is not None and len(values) != arity:
        raise ArityError(f"expected {arity} inputs, got {len(values)}")
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite input {v!r}")
    return values


def as_batch(X, arity: int) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != arity:
        raise ArityError(f"expected batch of shape (k, {arity}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("non-finite input in batch")
    return X


def heaviside(u: float) -> int:
    """Step function with ``h(0) = 0``."""
    if not math.isfinite(u):
        raise ValueError(f"non-finite argument {u!r}")
    return 1 if u > 0 else 0


def negated_heaviside(u: float) -> int:
    return 1 - heaviside(u)


def rect(u: float) -> int:
    """Unit rectangle on the open interval ``|u| < 1/2``; 0 on the boundary."""
    return 1 if abs(u) < 0.5 else 0


def pattern_index(x: Sequence[float]) -> int:
    """Index of a binary input pattern, input 1 in the least significant bit.

    Raises :class:`LookupMiss` if any entry is not exactly 0 or 1.
    """
    index = 0
    for j, v in enumerate(x):
        if v == 1.0:
            index |= 1 << j
        elif v != 0.0:
            raise LookupMiss(f"input {tuple(x)} is not a binary pattern")
    return index


# -- weight functions --------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Input-independent weight ``c`` on input ``axis``: summand ``c * x[axis]``."""

    axis: int
    value: float

    def contribution(self, x: Sequence[float]) -> float:
        return self.value * x[self.axis]

    def contributions(self, X: np.ndarray) -> np.ndarray:
        return self.value * X[:, self.axis]

    def raw_weight(self, x: Sequence[float]) -> float:
        return self.value


@dataclass(frozen=True)
class SelectiveRect:
    """Selective weight ``(1 - rect((x - center) / width)) / x`` on one axis."""

    axis: int
    center: float
    width: float

    def __post_init__(self):
        if not (self.width > 0 and math.isfinite(self.width)):
            raise ValueError(f"width must be positive and finite, got {self.width!r}")
        if not math.isfinite(self.center):
            raise ValueError(f"center must be finite, got {self.center!r}")

    def inside(self, value: float) -> int:
        return rect((value - self.center) / self.width)

    def contribution(self, x: Sequence[float]) -> float:
        return float(1 - self.inside(x[self.axis]))

    def contributions(self, X: np.ndarray) -> np.ndarray:
        return _accel.rect_complement_sum(X, [self.axis], [self.center], [self.width])

    def raw_weight(self, x: Sequence[float]) -> float:
        value = x[self.axis]
        if value == 0:
            raise SingularWeightError(
                f"selective weight is singular at x[{self.axis}] = 0 "
                f"(summand there is {self.contribution(x)})"
            )
        return (1 - self.inside(value)) / value


@dataclass(frozen=True)
class Lookup:
    """Weight read from a table indexed by the whole binary input pattern.

    ``table`` maps pattern index (input 1 = least significant bit) to the
    weight value.  Summand is ``x[axis] * table[pattern(x)]``.
    """

    axis: int
    table: Mapping[int, float]

    def __post_init__(self):
        # freeze into a plain dict copy so external mutation cannot leak in
        object.__setattr__(self, "table", dict(self.table))

    def __hash__(self):
        return hash((self.axis, tuple(sorted(self.table.items()))))

    def weight_for(self, x: Sequence[float]) -> float:
        key = pattern_index(x)
        try:
            return self.table[key]
        except KeyError:
            raise LookupMiss(f"no lookup entry for pattern {key}") from None

    def contribution(self, x: Sequence[float]) -> float:
        return x[self.axis] * self.weight_for(x)

    def contributions(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.contribution(row) for row in X], dtype=np.float64)

    def raw_weight(self, x: Sequence[float]) -> float:
        return self.weight_for(x)


@dataclass(frozen=True, eq=False)
class VectorWeight:
    """Weight that depends on the full input vector.

    ``summand(x)`` returns ``x[axis] * w(x)`` directly; ``batch(X)``, when
    given, is a vectorized equivalent.  ``label`` is a human-readable tag.
    """

    axis: int
    summand: Callable[[Sequence[float]], float]
    batch: Callable[[np.ndarray], np.ndarray] | None = None
    label: str = "vector"

    def contribution(self, x: Sequence[float]) -> float:
        return float(self.summand(x))

    def contributions(self, X: np.ndarray) -> np.ndarray:
        if self.batch is not None:
            return np.asarray(self.batch(X), dtype=np.float64)
        return np.array([self.summand(tuple(row)) for row in X], dtype=np.float64)

    def raw_weight(self, x: Sequence[float]) -> float:
        value = x[self.axis]
        if value == 0:
            raise SingularWeightError(f"{self.label} weight is singular at x[{self.axis}] = 0")
        return self.contribution(x) / value


WeightFunction = Union[Constant, SelectiveRect, Lookup, VectorWeight]


# -- threshold modes ---------------------------------------------------------


@dataclass(frozen=True)
class Single:
    """Fires iff ``S > t_s``."""

    t_s: float

    def fires(self, s: float) -> int:
        return 1 if s > self.t_s else 0

    def fires_many(self, S: np.ndarray) -> np.ndarray:
        return (S > self.t_s).astype(np.int8)


@dataclass(frozen=True)
class Double:
    """Fires iff ``t_l < S <= t_h``.  ``t_h`` may be ``inf``."""

    t_l: float
    t_h: float = math.inf

    def __post_init__(self):
        if math.isnan(self.t_l) or math.isnan(self.t_h):
            raise ValueError("thresholds must not be NaN")
        if not self.t_l < self.t_h:
            raise ValueError(f"double threshold needs t_l < t_h, got ({self.t_l}, {self.t_h})")

    def fires(self, s: float) -> int:
        return 1 if self.t_l < s <= self.t_h else 0

    def fires_many(self, S: np.ndarray) -> np.ndarray:
        return ((S > self.t_l) & (S <= self.t_h)).astype(np.int8)


ThresholdMode = Union[Single, Double]


# -- the unit ----------------------------------------------------------------


@dataclass(frozen=True)
class Receptron:
    arity: int
    weights: tuple[WeightFunction, ...]
    mode: ThresholdMode
    _selective: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        if len(self.weights) != self.arity:
            raise ArityError(f"{len(self.weights)} weights for arity {self.arity}")
        for w in self.weights:
            if not 0 <= w.axis < self.arity:
                raise ValueError(f"weight axis {w.axis} out of range for arity {self.arity}")
        sel = [w for w in self.weights if isinstance(w, SelectiveRect)]
        packed = None
        if sel:
            packed = (
                np.array([w.axis for w in sel], dtype=np.int64),
                np.array([w.center for w in sel], dtype=np.float64),
                np.array([w.width for w in sel], dtype=np.float64),
            )
        object.__setattr__(self, "_selective", packed)

    def weighted_sum(self, x) -> float:
        x = as_input(x, self.arity)
        # same accumulation order as weighted_sums: selective summands first
        total = 0.0
        for w in self.weights:
            if isinstance(w, SelectiveRect):
                total += w.contribution(x)
        for w in self.weights:
            if not isinstance(w, SelectiveRect):
                total += w.contribution(x)
        return total

    def activate(self, x) -> int:
        return self.mode.fires(self.weighted_sum(x))

    def weighted_sums(self, X) -> np.ndarray:
        """Vectorized :meth:`weighted_sum` over the rows of ``X``."""
        X = as_batch(X, self.arity)
        total = np.zeros(X.shape[0], dtype=np.float64)
        if self._selective is not None:
            total += _accel.rect_complement_sum(X, *self._selective)
        for w in self.weights:
            if not isinstance(w, SelectiveRect):
                total += w.contributions(X)
        return total

    def activate_many(self, X) -> np.ndarray:
        return self.mode.fires_many(self.weighted_sums(X))


def weighted_sum(unit: Receptron, x) -> float:
    return unit.weighted_sum(x)


def activate(unit: Receptron, x) -> int:
    return unit.activate(x)


def perceptron(weights: Sequence[float], t_s: float) -> Receptron:
    """Classical threshold gate: constant weights, single threshold."""
    return Receptron(
        len(weights),
        tuple(Constant(j, float(c)) for j, c in enumerate(weights)),
        Single(float(t_s)),
    )
