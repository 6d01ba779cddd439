"""Feed-forward receptron networks and the two realizations of a union of
closed domains: ``m`` selective units feeding a digital OR unit, or one
unit with ``n * m`` fanned-out inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from receptron import _accel
from receptron.core import (
    ArityError,
    Constant,
    Double,
    Receptron,
    Single,
    VectorWeight,
    as_batch,
    as_input,
)
from receptron.domains import (
    EquivalenceReport,
    HyperRectDomain,
    boundary_rows,
    build_selective_receptron,
    check_thresholds,
    compare_batches,
    domain_contains,
    domain_contains_many,
    draw_off_boundary,
)


@dataclass(frozen=True)
class Source:
    """Where a unit input comes from: external input ``index`` or the output
    of unit ``index``."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("input", "unit"):
            raise ValueError(f"unknown source kind {self.kind!r}")


def ext(i: int) -> Source:
    return Source("input", i)


def node(k: int) -> Source:
    return Source("unit", k)


@dataclass(frozen=True)
class Network:
    inputs: int
    units: tuple[Receptron, ...]
    wiring: tuple[tuple[Source, ...], ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "wiring", tuple(tuple(w) for w in self.wiring))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(self.wiring) != len(self.units):
            raise ValueError("wiring needs one source list per unit")
        if not self.outputs:
            raise ValueError("network needs at least one output")
        for k, (unit, srcs) in enumerate(zip(self.units, self.wiring)):
            if len(srcs) != unit.arity:
                raise ArityError(f"unit {k} has arity {unit.arity} but {len(srcs)} sources")
            for s in srcs:
                if s.kind == "input" and not 0 <= s.index < self.inputs:
                    raise ValueError(f"unit {k} reads missing input {s.index}")
                if s.kind == "unit" and not 0 <= s.index < k:
                    raise ValueError(f"unit {k} reads unit {s.index}, which is not upstream")
        for o in self.outputs:
            if not 0 <= o < len(self.units):
                raise ValueError(f"output {o} is not a unit")


def eval_network(net: Network, x) -> list[int]:
    x = as_input(x, net.inputs)
    values: list[int] = []
    for unit, srcs in zip(net.units, net.wiring):
        args = [x[s.index] if s.kind == "input" else float(values[s.index]) for s in srcs]
        values.append(unit.activate(args))
    return [values[o] for o in net.outputs]


def eval_network_many(net: Network, X) -> np.ndarray:
    """Batch :func:`eval_network`: one row per point, one column per output."""
    X = as_batch(X, net.inputs)
    values: list[np.ndarray] = []
    for unit, srcs in zip(net.units, net.wiring):
        cols = [X[:, s.index] if s.kind == "input" else values[s.index].astype(np.float64)
                for s in srcs]
        values.append(unit.activate_many(np.column_stack(cols)))
    return np.column_stack([values[o] for o in net.outputs])


def or_unit(m: int) -> Receptron:
    """Digital OR of ``m`` bits: unit weights, single threshold 1/2."""
    return Receptron(m, tuple(Constant(j, 1.0) for j in range(m)), Single(0.5))


def _shared_arity(domains: Sequence[HyperRectDomain]) -> int:
    if not domains:
        raise ValueError("need at least one domain")
    n = domains[0].arity
    for d in domains[1:]:
        if d.arity != n:
            raise ArityError(f"mixed domain arities {n} and {d.arity}")
    return n


def build_disjunction_network(domains: Sequence[HyperRectDomain]) -> Network:
    n = _shared_arity(domains)
    m = len(domains)
    units = [build_selective_receptron(d) for d in domains] + [or_unit(m)]
    wiring = [tuple(ext(i) for i in range(n)) for _ in domains]
    wiring.append(tuple(node(k) for k in range(m)))
    return Network(n, tuple(units), tuple(wiring), (m,))


def union_contains(domains: Sequence[HyperRectDomain], x) -> int:
    return int(any(domain_contains(d, x) for d in domains))


def union_contains_many(domains: Sequence[HyperRectDomain], X) -> np.ndarray:
    out = np.zeros(len(X), dtype=np.int8)
    for d in domains:
        out |= domain_contains_many(d, X)
    return out


def fan_out(x, m: int):
    """Repeat the external input ``m`` times (the multidomain unit's wiring)."""
    if isinstance(x, np.ndarray) and x.ndim == 2:
        return np.tile(x, (1, m))
    return tuple(x) * m


def build_multidomain_unit(domains: Sequence[HyperRectDomain], t: float = 0.5) -> Receptron:
    """One receptron of arity ``n * m`` firing on the union of ``domains``.

    The sum is ``min_d N_d`` where ``N_d`` counts violated axes of domain
    ``d`` read from its own block of ``n`` fanned-out inputs.  It is carried
    by a full-vector weight on input 0; every other weight is zero.
    """
    check_thresholds(t, -0.5)
    n = _shared_arity(domains)
    m = len(domains)
    centers = np.array([d.centers for d in domains], dtype=np.float64)
    widths = np.array([d.widths for d in domains], dtype=np.float64)

    def summand(x):
        return float(_accel.min_violations(np.asarray([x], dtype=np.float64), centers, widths)[0])

    first = VectorWeight(
        0,
        summand=summand,
        batch=lambda X: _accel.min_violations(X, centers, widths),
        label="multidomain",
    )
    weights = (first,) + tuple(Constant(j, 0.0) for j in range(1, n * m))
    return Receptron(n * m, weights, Double(-0.5, t))


def equivalence_suite(
    domains: Sequence[HyperRectDomain],
    sampler,
    count: int,
    workers: int = 1,
) -> list[EquivalenceReport]:
    """Three-way agreement: union oracle, disjunction network, multidomain unit."""
    m = len(domains)
    net = build_disjunction_network(domains)
    unit = build_multidomain_unit(domains)

    def on_edge(P):
        hit = np.zeros(len(P), dtype=bool)
        for d in domains:
            hit |= boundary_rows(d, P)
        return hit

    X = draw_off_boundary(sampler, count, on_edge)
    oracle = lambda B: union_contains_many(domains, B)  # noqa: E731
    return [
        compare_batches("network vs union oracle", X,
                        lambda B: eval_network_many(net, B)[:, 0], oracle, workers=workers),
        compare_batches("multidomain unit vs union oracle", X,
                        lambda B: unit.activate_many(fan_out(B, m)), oracle, workers=workers),
        compare_batches("network vs multidomain unit", X,
                        lambda B: eval_network_many(net, B)[:, 0],
                        lambda B: unit.activate_many(fan_out(B, m)), workers=workers),
    ]
