import itertools

import numpy as np
import pytest

from oracles import box_contains
from receptron.core import ArityError, Double, Single
from receptron.domains import HyperRectDomain, UniformSampler, build_selective_receptron, random_domain
from receptron.network import (
    Network,
    build_disjunction_network,
    build_multidomain_unit,
    equivalence_suite,
    eval_network,
    eval_network_many,
    ext,
    fan_out,
    node,
    or_unit,
    union_contains,
)

A = HyperRectDomain.cube((0, 0, 0), 2)
B = HyperRectDomain.cube((10, 10, 10), 2)


def union_oracle(domains, x):
    return int(any(box_contains(d.centers, d.widths, x) for d in domains))


def test_single_unit_network_matches_bare_unit():
    unit = build_selective_receptron(B)
    net = Network(3, (unit,), ((ext(0), ext(1), ext(2)),), (0,))
    for x in [(10, 10, 10), (10, 10, 12), (0, 0, 0)]:
        assert eval_network(net, x) == [unit.activate(x)]


@pytest.mark.parametrize("x, expected", [((0, 0, 0), 1), ((5, 5, 5), 0), ((10.5, 9.7, 10.2), 1)])
def test_disjunction_network(x, expected):
    net = build_disjunction_network([A, B])
    assert len(net.units) == 3
    assert eval_network(net, x) == [expected] == [union_oracle([A, B], x)]


def test_overlapping_domains():
    C = HyperRectDomain.cube((0.5, 0.5, 0.5), 2)
    net = build_disjunction_network([A, C])
    unit = build_multidomain_unit([A, C])
    x = (0.7, 0.6, 0.4)
    assert box_contains(A.centers, A.widths, x) and box_contains(C.centers, C.widths, x)
    assert eval_network(net, x) == [1]
    assert unit.activate(fan_out(x, 2)) == 1


@pytest.mark.parametrize("x, expected", [((0, 0, 0), 1), ((5, 5, 5), 0)])
def test_multidomain_unit(x, expected):
    unit = build_multidomain_unit([A, B])
    assert unit.arity == 6
    assert isinstance(unit.mode, Double)
    assert unit.activate(fan_out(x, 2)) == expected


def test_multidomain_single_domain_matches_selective():
    unit = build_multidomain_unit([B])
    sel = build_selective_receptron(B)
    X = UniformSampler([8] * 3, [12] * 3, seed=0)(5000)
    assert np.array_equal(unit.activate_many(X), sel.activate_many(X))


def test_mixed_arities_rejected():
    with pytest.raises(ArityError):
        build_disjunction_network([A, HyperRectDomain((0, 0), (1, 1))])
    with pytest.raises(ArityError):
        build_multidomain_unit([A, HyperRectDomain((0, 0), (1, 1))])
    with pytest.raises(ValueError):
        build_disjunction_network([])


def test_wiring_validation():
    unit = build_selective_receptron(A)
    with pytest.raises(ValueError):
        Network(3, (unit,), ((ext(0), ext(1), node(0)),), (0,))
    with pytest.raises(ArityError):
        Network(3, (unit,), ((ext(0), ext(1)),), (0,))
    with pytest.raises(ValueError):
        Network(3, (unit,), ((ext(0), ext(1), ext(2)),), ())
    with pytest.raises(ValueError):
        Network(2, (unit,), ((ext(0), ext(1), ext(2)),), (0,))


@pytest.mark.parametrize("m", range(1, 11))
def test_or_unit_truth_table(m):
    unit = or_unit(m)
    assert isinstance(unit.mode, Single)
    for bits in itertools.product((0, 1), repeat=m):
        assert unit.activate(bits) == int(any(bits))


def test_topological_reordering_keeps_outputs():
    rng = np.random.default_rng(0)
    domains = [random_domain(rng, 2, span=4) for _ in range(4)]
    net = build_disjunction_network(domains)
    X = UniformSampler([-6, -6], [6, 6], seed=3)(2000)
    ref = eval_network_many(net, X)
    m = len(domains)
    for perm in itertools.permutations(range(m)):
        # layer-1 units in a different order, OR unit still last
        units = tuple(net.units[p] for p in perm) + (net.units[m],)
        wiring = tuple(net.wiring[p] for p in perm) + (tuple(node(k) for k in range(m)),)
        shuffled = Network(net.inputs, units, wiring, (m,))
        assert np.array_equal(eval_network_many(shuffled, X), ref)


def test_fan_out_consistency():
    domains = [A, B]
    unit = build_multidomain_unit(domains)
    X = UniformSampler([-2] * 3, [12] * 3, seed=1)(3000)
    F = fan_out(X, 2)
    assert np.array_equal(F[:, :3], X) and np.array_equal(F[:, 3:], X)
    assert list(unit.activate_many(F)) == [unit.activate(fan_out(tuple(x), 2)) for x in X]
    assert list(unit.activate_many(F)) == [union_contains(domains, x) for x in X]


def test_batch_network_matches_scalar():
    net = build_disjunction_network([A, B])
    X = UniformSampler([-2] * 3, [12] * 3, seed=2)(1000)
    assert [list(r) for r in eval_network_many(net, X)] == [eval_network(net, x) for x in X]


@pytest.mark.parametrize("m, n, count", [(2, 3, 10_000), (5, 4, 10_000), (1, 3, 1000)])
def test_equivalence_suite_examples(m, n, count):
    rng = np.random.default_rng(100 * m + n)
    domains = [random_domain(rng, n, span=3, min_width=1, max_width=4) for _ in range(m)]
    reports = equivalence_suite(domains, UniformSampler([-6] * n, [6] * n, seed=m), count)
    assert len(reports) == 3
    for r in reports:
        assert r.tested == count and r.mismatches == 0


@pytest.mark.parametrize("m", range(1, 6))
@pytest.mark.parametrize("n", range(1, 5))
def test_triple_agreement_grid(m, n):
    rng = np.random.default_rng(7 * m + n)
    domains = [random_domain(rng, n, span=3, min_width=1, max_width=4) for _ in range(m)]
    reports = equivalence_suite(domains, UniformSampler([-6] * n, [6] * n, seed=n), 2000)
    assert all(r.ok for r in reports)
