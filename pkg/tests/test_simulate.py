"""Graph engine: edge function, shortest paths, counts, samplers."""
import math
from itertools import permutations

import numpy as np
import pytest
import scipy.stats

from fpplab import numerics, simulate, theory
from fpplab.errors import DomainError, UnsupportedPathLengthError
from fpplab.simulate import WeightModel

D05 = theory.Disorder(0.5)


def model(seed=123456789, s=0.5):
    return WeightModel(theory.Disorder(s), seed)


def test_edge_weight_symmetric_and_deterministic():
    m1 = model()
    m2 = model()
    for i, j in ((1, 2), (3, 97), (12345, 6789)):
        assert simulate.edge_weight(m1, i, j) == \
            simulate.edge_weight(m1, j, i)
        assert simulate.edge_weight(m1, i, j) == \
            simulate.edge_weight(m2, i, j)
    m3 = model(seed=987654321)
    assert simulate.edge_weight(m1, 1, 2) != simulate.edge_weight(m3, 1, 2)


def test_edge_weight_rejects_bad_vertices():
    m = model()
    with pytest.raises(DomainError):
        simulate.edge_weight(m, 3, 3)
    with pytest.raises(DomainError):
        simulate.edge_weight(m, 0, 1)


def test_edge_law_uniformity():
    # invert the weight map back to its uniform seed and KS-test it
    m = model(seed=24680)
    targets = np.arange(2, 1_000_002, dtype=np.uint64)
    w = simulate._edge_weights_vec(m, 1, targets)
    e = np.power(w, -1.0 / m.disorder.s)
    u = -np.expm1(-e)
    stat = scipy.stats.kstest(u, "uniform").statistic
    assert stat < 0.002


def test_replication_seeds_distinct():
    seeds = {simulate.replication_seed(20260819, r) for r in range(10000)}
    assert len(seeds) == 10000


def test_two_vertex_graph_is_single_edge():
    m = model()
    res = simulate.shortest_path(m, 3, 1, 2)
    direct = simulate.edge_weight(m, 1, 2)
    assert res.hopcount >= 1
    assert res.weight <= direct
    tiny = simulate.shortest_path(m, 2, 1, 2)
    assert tiny.hopcount == 1
    assert tiny.weight == direct
    assert tiny.vertices == (1, 2)


def test_path_weight_equals_edge_sum():
    m = model(seed=777)
    res = simulate.shortest_path(m, 300, 1, 300)
    total = sum(simulate.edge_weight(m, a, b)
                for a, b in zip(res.vertices, res.vertices[1:]))
    assert res.weight == pytest.approx(total, rel=1e-12)
    assert res.hopcount == len(res.vertices) - 1
    assert res.vertices[0] == 1 and res.vertices[-1] == 300


def test_optimum_below_two_edge_bound():
    for seed in (5, 17, 99):
        m = model(seed=seed)
        res = simulate.shortest_path(m, 400, 1, 400)
        assert res.weight <= simulate.min_two_edge(m, 400) + 1e-15


def test_optimum_above_hop_times_min_edge():
    for seed in (11, 222):
        m = model(seed=seed)
        n = 30
        res = simulate.shortest_path(m, n, 1, n)
        idx = np.arange(1, n + 1, dtype=np.uint64)
        wmin = math.inf
        for u in range(1, n + 1):
            w = simulate._edge_weights_vec(m, u, idx)
            w[u - 1] = np.inf
            wmin = min(wmin, float(np.min(w)))
        assert res.weight >= res.hopcount * wmin - 1e-15


def test_shortest_path_matches_enumeration_small_n():
    for n in (5, 6, 7):
        for r in range(10):
            m = model(seed=simulate.replication_seed(424242, 10 * n + r),
                      s=0.8)
            res = simulate.shortest_path(m, n, 1, n)
            best_w, best_p = math.inf, None
            for L in range(0, n - 1):
                for mid in permutations(range(2, n), L):
                    path = (1,) + mid + (n,)
                    tot = sum(simulate.edge_weight(m, a, b)
                              for a, b in zip(path, path[1:]))
                    if tot < best_w:
                        best_w, best_p = tot, path
            assert res.weight == pytest.approx(best_w, rel=1e-12)
            assert res.vertices == best_p


def test_multipoint_matches_single_runs():
    m = model(seed=31415)
    res = simulate.multipoint_weights(m, 200, 3)
    assert len(res) == 3
    for offset, r in enumerate(res):
        single = simulate.shortest_path(m, 200, 1, 2 + offset)
        assert r.weight == single.weight
        assert r.vertices == single.vertices
    with pytest.raises(DomainError):
        simulate.multipoint_weights(m, 200, 200)


def test_count_vanishes_for_tiny_threshold():
    m = model(seed=5150)
    for k in (2, 3):
        assert simulate.count_paths_below(m, 150, k, 1e-9).count == 0
    with pytest.raises(DomainError):
        simulate.count_paths_below(m, 150, 2, 0.0)


def test_count_matches_brute_force():
    for n in (6, 9, 12):
        for seed in (1, 2, 3, 4, 5):
            m = model(seed=seed)
            zs = [0.5, 1.0, 2.0, 4.0]
            for z in zs:
                for k in (2, 3):
                    got = simulate.count_paths_below(m, n, k, z).count
                    want = 0
                    for mid in permutations(range(2, n), k - 1):
                        path = (1,) + mid + (n,)
                        tot = sum(simulate.edge_weight(m, a, b)
                                  for a, b in zip(path, path[1:]))
                        want += tot < z
                    assert got == want


def test_count_rejects_unsupported_length():
    m = model()
    with pytest.raises(UnsupportedPathLengthError):
        simulate.count_paths_below(m, 100, 4, 1.0)
    with pytest.raises(DomainError):
        simulate.count_paths_below(m, 3, 3, 1.0)


def test_sum_sampler_single_term_law():
    d = theory.Disorder(1.0)
    rng = simulate.weight_stream(13579, label=1)
    x = simulate.sample_weight_sums(d, 1, 100_000, rng)
    # Z_1 = E^{-1}: P(Z_1 <= z) = exp(-1/z)
    stat = scipy.stats.kstest(x, lambda z: np.exp(-1.0 / z)).statistic
    assert stat < 0.006


def test_sum_sampler_two_term_probability():
    # P(Z_2 <= 1/2) at s = 1 against the quadrature value, 3 SE
    d = theory.Disorder(1.0)
    rng = simulate.weight_stream(97531, label=2)
    total, hits = 10_000_000, 0
    for _ in range(5):
        x = simulate.sample_weight_sums(d, 2, total // 5, rng)
        hits += int(np.sum(x <= 0.5))
    phat = hits / total
    pnum = math.exp(float(numerics.log_cdf(1.0, 2, 0.5)))
    se = math.sqrt(phat * (1.0 - phat) / total)
    assert abs(phat - pnum) <= 3.0 * se


def test_sum_sampler_stochastically_increasing_in_k():
    d = theory.Disorder(0.7)
    rng = simulate.weight_stream(11111, label=3)
    z2 = np.sort(simulate.sample_weight_sums(d, 2, 40_000, rng))
    z3 = np.sort(simulate.sample_weight_sums(d, 3, 40_000, rng))
    # compare empirical quantiles away from the extremes
    qs = np.linspace(0.05, 0.95, 19)
    q2 = np.quantile(z2, qs)
    q3 = np.quantile(z3, qs)
    assert np.all(q3 > q2)


def test_min_sampler_matches_direct_minimum():
    # k = 2, m = n - 2 = 18 routes: sampler vs explicit minimum of sums
    d = D05
    n = 20
    rng1 = simulate.weight_stream(2222, label=4)
    draws = np.array([simulate.sample_min_independent(d, 2, n, rng1)
                      for _ in range(20_000)])
    rng2 = simulate.weight_stream(3333, label=5)
    direct = np.min(
        simulate.sample_weight_sums(d, 2, 20_000 * (n - 2), rng2)
        .reshape(20_000, n - 2), axis=1)
    stat = scipy.stats.ks_2samp(draws, direct).statistic
    assert stat < 0.013
    assert np.all(draws > 0.0)


def test_min_sampler_batch_matches_scalar_law():
    d = D05
    rng1 = simulate.weight_stream(4444, label=6)
    many = simulate.sample_min_independent_many(d, 2, 1000.0, 5000, rng1)
    rng2 = simulate.weight_stream(5555, label=7)
    single = np.array([simulate.sample_min_independent(d, 2, 1000.0, rng2)
                       for _ in range(5000)])
    stat = scipy.stats.ks_2samp(many, single).statistic
    assert stat < 0.03


def test_min_sampler_survival_at_center():
    # P(standardized minimum > 0) should sit near the limit value
    d = D05
    n = 4000.0
    k = 2
    rng = simulate.weight_stream(6666, label=8)
    draws = simulate.sample_min_independent_many(d, k, n, 4000, rng)
    t = theory.standardize_weight(d.s, k, math.log(n), draws)
    phat = float(np.mean(t > 0.0))
    want = theory.gumbel_sf(d.s, k, 0.0)
    assert abs(phat - want) <= 0.03


def test_dijkstra_deterministic_across_calls():
    m = model(seed=808)
    a = simulate.shortest_path(m, 500, 1, 500)
    b = simulate.shortest_path(m, 500, 1, 500)
    assert a == b
