import math

import numpy as np
import pytest

from rwspn import (
    Generator,
    LumpabilityError,
    TransientBudgetError,
    build_generator,
    check_strong_lumpability,
    default_grid,
    lump_generator,
    measure_series,
    quotient_partition,
    reliability,
    throughput,
    transient,
)
from rwspn.statespace import TransitionSystem

from conftest import ordinary_ts, quotient_ts


def two_state_chain(lam=0.1):
    return Generator(2, {(0, 1): lam})


def test_generator_basics():
    gen = two_state_chain()
    assert gen.diagonal[0] == pytest.approx(-0.1)
    assert gen.diagonal[1] == 0.0
    assert gen.entries() == ((0, 1, 0.1),)
    assert np.allclose(np.asarray(gen.matrix.sum(axis=1)).ravel(), 0.0, atol=1e-12)


def test_generator_rejects_negative_rates():
    with pytest.raises(ValueError):
        Generator(2, {(0, 1): -1.0})


def test_build_generator_sums_parallel_edges_and_skips_self_loops():
    ts = TransitionSystem(
        mode="quotient",
        states=[None, None],
        edges=[(0, 0, "x", 9.0), (0, 1, "a", 0.5), (0, 1, "b", 0.5)],
        levels=[0, 1],
        _index={"a": 0, "b": 1},
    )
    gen = build_generator(ts)
    assert gen.entries() == ((0, 1, 1.0),)
    assert gen.diagonal[0] == -1.0


def test_initial_aggregated_row():
    gen = build_generator(quotient_ts(2))
    row = {(i, j): r for i, j, r in gen.entries() if i == 0}
    assert sorted(row.values()) == [pytest.approx(0.004), pytest.approx(1.0)]


def test_lumpability_singleton_partition():
    gen = build_generator(quotient_ts(1))
    ok, detail = check_strong_lumpability(gen, list(range(gen.n)))
    assert ok and detail is None
    lumped = lump_generator(gen, list(range(gen.n)))
    assert lumped.entries() == gen.entries()


def test_lumpability_negative_case():
    # 3-state chain: lumping the two non-equivalent upstream states fails
    gen = Generator(3, {(0, 1): 1.0, (1, 2): 2.0})
    ok, detail = check_strong_lumpability(gen, [0, 0, 1])
    assert not ok
    assert detail["class"] == 0
    assert detail["states"] == (0, 1)
    with pytest.raises(LumpabilityError):
        lump_generator(gen, [0, 0, 1])


def test_normalize_partition_is_lumpable():
    for n in (1, 2):
        ordinary, quotient = ordinary_ts(n), quotient_ts(n)
        gen = build_generator(ordinary)
        part = quotient_partition(ordinary, quotient)
        ok, detail = check_strong_lumpability(gen, part, tol=1e-9)
        assert ok, detail


def test_lumped_equals_quotient_generator():
    for n in (1, 2):
        ordinary, quotient = ordinary_ts(n), quotient_ts(n)
        part = quotient_partition(ordinary, quotient)
        lumped = lump_generator(build_generator(ordinary), part, tol=1e-9)
        direct = build_generator(quotient)
        assert lumped.n == direct.n
        a = dict(((i, j), r) for i, j, r in lumped.entries())
        b = dict(((i, j), r) for i, j, r in direct.entries())
        assert a.keys() == b.keys()
        for key in a:
            assert abs(a[key] - b[key]) <= 1e-9


def test_transient_t0_and_absorbing():
    gen = two_state_chain()
    pi0 = np.array([1.0, 0.0])
    assert np.array_equal(transient(gen, pi0, 0.0), pi0)
    for t in (1.0, 10.0, 100.0):
        pi = transient(gen, pi0, t, eps=1e-10)
        assert abs(pi[1] - (1.0 - math.exp(-0.1 * t))) <= 1e-10


def test_transient_mass_conservation():
    gen = two_state_chain()
    details = {}
    transient(gen, np.array([1.0, 0.0]), 50.0, eps=1e-10, details=details)
    assert abs(details["raw_mass"] - 1.0) <= 1e-10


def test_transient_cycle_converges_to_uniform():
    gen = Generator(3, {(0, 1): 1.0, (1, 2): 1.0, (2, 0): 1.0})
    pi = transient(gen, np.array([1.0, 0.0, 0.0]), 500.0, eps=1e-12)
    assert np.allclose(pi, 1 / 3, atol=1e-9)


def test_transient_budget():
    gen = two_state_chain(lam=1000.0)
    with pytest.raises(TransientBudgetError):
        transient(gen, np.array([1.0, 0.0]), 1e6, eps=1e-12, max_terms=100)


def test_transient_validates_inputs():
    gen = two_state_chain()
    with pytest.raises(ValueError):
        transient(gen, np.array([1.0, 0.0]), -1.0)
    with pytest.raises(ValueError):
        transient(gen, np.array([1.0]), 1.0)


def test_throughput_simple():
    ts = TransitionSystem(
        mode="quotient",
        states=[None, None],
        edges=[(0, 1, "as", 2.0)],
        levels=[0, 1],
        _index={"a": 0, "b": 1},
    )
    assert throughput(ts, [1.0, 0.0], "as") == 2.0
    assert throughput(ts, [0.0, 1.0], "as") == 0.0
    with pytest.warns(UserWarning):
        assert throughput(ts, [1.0, 0.0], "zz") == 0.0


def test_reliability_bounds():
    ts = quotient_ts(1)
    pi0 = np.zeros(len(ts))
    pi0[0] = 1.0
    assert reliability(ts, pi0) == 1.0
    absorbed = np.zeros(len(ts))
    absorbed[ts.final_states()[0]] = 1.0
    assert reliability(ts, absorbed) == pytest.approx(0.0)


def test_measure_series_shape_and_grid_validation():
    ts = quotient_ts(1)
    gen = build_generator(ts)
    with pytest.raises(ValueError):
        measure_series(ts, gen, [2.0, 1.0])
    series = measure_series(ts, gen, [1.0, 10.0, 100.0], eps=1e-9)
    assert series.times == [1.0, 10.0, 100.0]
    assert all(x >= 0 for x in series.throughput)
    assert series.reliability == sorted(series.reliability, reverse=True)


def test_throughput_reward_constant_within_classes():
    ordinary, quotient = ordinary_ts(1), quotient_ts(1)
    part = quotient_partition(ordinary, quotient)
    reward = np.zeros(len(ordinary))
    for src, _dst, label, rate in ordinary.edges:
        if label == "as":
            reward[src] += rate
    per_class = {}
    for i, cls in enumerate(part):
        per_class.setdefault(cls, set()).add(round(reward[i], 12))
    assert all(len(vals) == 1 for vals in per_class.values())


def test_lumping_commutes_with_transient():
    ordinary, quotient = ordinary_ts(1), quotient_ts(1)
    part = np.asarray(quotient_partition(ordinary, quotient))
    gen_o = build_generator(ordinary)
    gen_q = build_generator(quotient)
    pi_o = np.zeros(len(ordinary))
    pi_o[0] = 1.0
    pi_q = np.zeros(len(quotient))
    pi_q[0] = 1.0
    eps = 1e-10
    for t in (1.0, 100.0, 2000.0):
        po = transient(gen_o, pi_o, t, eps=eps)
        pq = transient(gen_q, pi_q, t, eps=eps)
        agg = np.zeros(len(quotient))
        for i, cls in enumerate(part):
            agg[cls] += po[i]
        assert np.max(np.abs(agg - pq)) <= 2 * eps


def test_default_grid():
    grid = default_grid()
    assert len(grid) == 60
    assert grid[0] == pytest.approx(1.0)
    assert grid[-1] == pytest.approx(1e4)
