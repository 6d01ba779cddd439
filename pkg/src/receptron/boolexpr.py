"""Boolean structure over rect predicates, digital synthesis, and the
perceptron linear-separability census.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linprog

from receptron import _accel
from receptron.core import (
    ArityError,
    Constant,
    Double,
    Lookup,
    Receptron,
    SelectiveRect,
    VectorWeight,
    as_input,
)
from receptron.domains import RectPredicate, check_thresholds, rect_eval

# -- expression trees --------------------------------------------------------


@dataclass(frozen=True)
class Pred:
    axis: int
    pred: RectPredicate

    def __post_init__(self):
        if self.axis < 0:
            raise ValueError(f"axis index must be non-negative, got {self.axis}")


@dataclass(frozen=True)
class And:
    children: tuple["BoolExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("And needs at least two operands")


@dataclass(frozen=True)
class Or:
    children: tuple["BoolExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ValueError("Or needs at least two operands")


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


BoolExpr = Union[Pred, And, Or, Not]


def expr_arity(e: BoolExpr) -> int:
    """One more than the largest axis index used by ``e``."""
    if isinstance(e, Pred):
        return e.axis + 1
    if isinstance(e, Not):
        return expr_arity(e.child)
    return max(expr_arity(c) for c in e.children)


def predicates(e: BoolExpr):
    if isinstance(e, Pred):
        yield e
    elif isinstance(e, Not):
        yield from predicates(e.child)
    else:
        for c in e.children:
            yield from predicates(c)


def _eval(e: BoolExpr, x: tuple[float, ...]) -> int:
    if isinstance(e, Pred):
        return rect_eval(e.pred, x[e.axis])
    if isinstance(e, Not):
        return 1 - _eval(e.child, x)
    if isinstance(e, And):
        return int(all(_eval(c, x) for c in e.children))
    return int(any(_eval(c, x) for c in e.children))


def eval_expr(e: BoolExpr, x) -> int:
    return _eval(e, as_input(x, expr_arity(e)))


def eval_expr_many(e: BoolExpr, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    n = expr_arity(e)
    if X.ndim != 2 or X.shape[1] != n:
        raise ArityError(f"expression has arity {n}, batch has shape {X.shape}")
    return _eval_many(e, X).astype(np.int8)


def _eval_many(e: BoolExpr, X: np.ndarray) -> np.ndarray:
    if isinstance(e, Pred):
        return np.abs((X[:, e.axis] - e.pred.center) / e.pred.width) < 0.5
    if isinstance(e, Not):
        return ~_eval_many(e.child, X)
    parts = [_eval_many(c, X) for c in e.children]
    op = np.logical_and if isinstance(e, And) else np.logical_or
    return op.reduce(parts)


def on_any_boundary(e: BoolExpr, X: np.ndarray) -> np.ndarray:
    hit = np.zeros(len(X), dtype=bool)
    for p in predicates(e):
        hit |= np.abs((X[:, p.axis] - p.pred.center) / p.pred.width) == 0.5
    return hit


# -- normalized OR and De Morgan ------------------------------------------------


def _bits(bits: Sequence[int]) -> list[int]:
    bits = list(bits)
    if not bits:
        raise ValueError("need at least one bit")
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"non-binary entry {b!r}")
    return [int(b) for b in bits]


def normalized_or(bits: Sequence[int]) -> int:
    """OR computed as ``sum f / (sum f + prod (1 - f))``."""
    f = _bits(bits)
    num = sum(f)
    den = num + math.prod(1 - b for b in f)
    q = num / den
    assert q in (0.0, 1.0), (f, num, den)
    return int(q)


def demorgan_product(bits: Sequence[int]) -> int:
    """AND computed as the complement of the normalized OR of complements."""
    f = _bits(bits)
    y = 1 - normalized_or([1 - b for b in f])
    assert y == math.prod(f)
    return y


# -- single-unit compilation of an expression ------------------------------------


def _conjunction_axes(e: BoolExpr) -> list[Pred] | None:
    """Predicates of ``e`` if it is a pure conjunction over distinct axes."""
    if isinstance(e, Pred):
        return [e]
    if isinstance(e, And) and all(isinstance(c, Pred) for c in e.children):
        axes = [c.axis for c in e.children]
        if len(set(axes)) == len(axes):
            return list(e.children)
    return None


def build_expr_receptron(e: BoolExpr, t: float = 0.5) -> Receptron:
    """Single receptron with ``activate(x) == eval_expr(e, x)`` off-boundary.

    Pure conjunctions over distinct axes get one per-coordinate selective
    weight per predicate.  Anything else puts ``1 - F(x)`` into a
    full-vector weight on input 0 and zero weights elsewhere.
    """
    check_thresholds(t, -0.5)
    n = expr_arity(e)
    mode = Double(-0.5, t)
    conj = _conjunction_axes(e)
    if conj is not None:
        by_axis = {p.axis: p.pred for p in conj}
        weights = tuple(
            SelectiveRect(j, by_axis[j].center, by_axis[j].width)
            if j in by_axis
            else Constant(j, 0.0)
            for j in range(n)
        )
        return Receptron(n, weights, mode)

    first = VectorWeight(
        0,
        summand=lambda x: 1 - _eval(e, tuple(x)),
        batch=lambda X: 1.0 - _eval_many(e, X),
        label="expr",
    )
    weights = (first,) + tuple(Constant(j, 0.0) for j in range(1, n))
    return Receptron(n, weights, mode)


# -- truth tables, synthesis, separability --------------------------------------


@dataclass(frozen=True)
class TruthTable:
    """Outputs for all ``2**arity`` binary patterns; pattern index has input 1
    in the least significant bit."""

    arity: int
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if self.arity < 1:
            raise ValueError("arity must be at least 1")
        if len(self.bits) != 1 << self.arity:
            raise ValueError(f"need {1 << self.arity} bits for arity {self.arity}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("truth table entries must be 0 or 1")

    @classmethod
    def from_string(cls, text: str) -> "TruthTable":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValueError(f"bitstring must contain only 0 and 1, got {text!r}")
        size = len(text)
        if size < 2 or size & (size - 1):
            raise ValueError(f"bitstring length {size} is not a power of two >= 2")
        return cls(size.bit_length() - 1, tuple(int(ch) for ch in text))

    @classmethod
    def from_int(cls, arity: int, value: int) -> "TruthTable":
        return cls(arity, tuple((value >> k) & 1 for k in range(1 << arity)))

    def to_string(self) -> str:
        return "".join(map(str, self.bits))

    def to_int(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    def __getitem__(self, pattern: int) -> int:
        return self.bits[pattern]


def binary_patterns(n: int) -> np.ndarray:
    """All ``2**n`` patterns as rows, ordered by pattern index."""
    k = np.arange(1 << n)
    return ((k[:, None] >> np.arange(n)) & 1).astype(np.float64)


def synthesize_digital(T: TruthTable) -> Receptron:
    """Lookup-weight receptron reproducing ``T`` on every binary pattern.

    The all-zero pattern always sums to 0, so the threshold interval is
    chosen to put 0 on the right side: ``(-1/2, 1/2]`` if ``T(0) = 1``
    (active patterns target S = 0, inactive S = 1), else ``(1/2, 3/2]``
    (active target 1, inactive 0).  Each nonzero pattern routes its target
    through the lookup weight of its lowest-index active input.
    """
    n = T.arity
    if T[0] == 1:
        mode, on, off = Double(-0.5, 0.5), 0.0, 1.0
    else:
        mode, on, off = Double(0.5, 1.5), 1.0, 0.0
    tables = [dict.fromkeys(range(1 << n), 0.0) for _ in range(n)]
    for p in range(1, 1 << n):
        lowest = (p & -p).bit_length() - 1
        tables[lowest][p] = on if T[p] else off
    return Receptron(n, tuple(Lookup(j, tables[j]) for j in range(n)), mode)


MAX_SEPARABILITY_ARITY = 6


def is_linearly_separable(T: TruthTable) -> int:
    """1 iff a constant-weight threshold gate separates ``T`` with margin.

    Solves the feasibility problem ``y_k (c . p_k - t) >= 1`` for real
    ``c`` and ``t``, with ``y_k = +1`` on 1-patterns and ``-1`` on 0-patterns.
    """
    n = T.arity
    if n > MAX_SEPARABILITY_ARITY:
        raise ValueError(f"arity {n} above supported bound {MAX_SEPARABILITY_ARITY}")
    return int(_separable_lp(n, T.to_int()))


def _separable_lp(n: int, table: int) -> bool:
    P = binary_patterns(n)
    y = np.where([(table >> k) & 1 for k in range(1 << n)], 1.0, -1.0)
    A = np.hstack([P, -np.ones((len(P), 1))])
    res = linprog(
        np.zeros(n + 1),
        A_ub=-(y[:, None] * A),
        b_ub=-np.ones(len(P)),
        bounds=[(None, None)] * (n + 1),
        method="highs",
    )
    if res.status == 2:
        return False
    if res.status != 0:
        raise RuntimeError(f"LP solver failed on table {table:#x}: {res.message}")
    margins = y * (A @ res.x)
    if not np.all(margins > 0.5):
        raise RuntimeError(f"LP certificate for table {table:#x} does not separate")
    return True


@lru_cache(maxsize=None)
def npn_maps(n: int) -> np.ndarray:
    """Pattern maps for every input permutation combined with every input negation."""
    rows = []
    for perm in itertools.permutations(range(n)):
        for neg in range(1 << n):
            rows.append([
                sum((((k >> perm[j]) & 1) ^ ((neg >> j) & 1)) << j for j in range(n))
                for k in range(1 << n)
            ])
    return np.asarray(rows, dtype=np.int64)


def census(n: int) -> tuple[int, int]:
    """Count linearly separable functions among all ``2**(2**n)`` tables.

    Separability is invariant under permuting inputs, negating inputs and
    negating the output, so the LP runs once per orbit and the verdict is
    shared across the orbit.
    """
    if not 1 <= n <= 4:
        raise ValueError(f"census supports 1 <= n <= 4, got {n}")
    labels = _accel.orbit_labels(npn_maps(n))
    reps, counts = np.unique(labels, return_counts=True)
    separable = sum(int(c) for r, c in zip(reps, counts) if _separable_lp(n, int(r)))
    return separable, 1 << (1 << n)
