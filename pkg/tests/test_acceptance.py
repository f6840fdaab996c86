"""End-to-end checks on the bundled datasets and the bound property suites."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from lib.curvature import alpha_upper_bound_check, ricci_all, transport_lower_bound_check, w1
from lib.graph_core import (
    Graph,
    Hypergraph,
    gen_complete,
    gen_erdos_renyi,
    gen_path,
    gen_random_regular,
    gen_remark_union,
    is_connected,
    laplacian,
    load_builtin,
)
from lib.hypergraph import (
    check_c_bound,
    clique_expand,
    gen_random_hypergraph,
    gen_tightness_design,
    hyper_probabilities,
    hyper_sparsify,
    hypergraph_quadratic_form,
)
from lib.local_stats import alpha, clustering, common_neighbors, compute_local_stats, lower_bound_report
from lib.sampler import SampleConfig, edge_probabilities, percolate, sample_count, sparsify
from lib.spectral import (
    effective_resistance,
    local_subgraph_resistance,
    pseudo_inverse,
    pseudo_inverse_sqrt,
    verify_spectral,
)
from lib.transport import solve_transport


def connected_graphs(family, count, max_tries=2000):
    found = []
    for seed in range(max_tries):
        g = family(seed)
        if g.num_edges and is_connected(g):
            found.append(g)
        if len(found) == count:
            return found
    raise AssertionError(f"only {len(found)} connected graphs in {max_tries} tries")


def enumerate_w1(supply, demand, cost):
    """Minimum cost over every basic feasible solution, by peeling spanning trees."""
    rows, cols = len(supply), len(demand)
    cells = [(i, j) for i in range(rows) for j in range(cols)]
    best = None
    for basis in itertools.combinations(cells, rows + cols - 1):
        left_s, left_d = list(supply), list(demand)
        open_cells = set(basis)
        flow = {}
        while open_cells:
            leaf = None
            for i in range(rows):
                mine = [c for c in open_cells if c[0] == i]
                if len(mine) == 1:
                    leaf = (mine[0], left_s[i])
                    break
            if leaf is None:
                for j in range(cols):
                    mine = [c for c in open_cells if c[1] == j]
                    if len(mine) == 1:
                        leaf = (mine[0], left_d[j])
                        break
            if leaf is None:
                break
            (i, j), x = leaf
            flow[(i, j)] = x
            left_s[i] -= x
            left_d[j] -= x
            open_cells.discard((i, j))
        if open_cells or any(left_s) or any(left_d) or any(x < 0 for x in flow.values()):
            continue
        value = sum((cost[i][j] * x for (i, j), x in flow.items()), Fraction(0))
        best = value if best is None else min(best, value)
    return best


class TestNetworkStatistics:
    def test_karate(self):
        stats = compute_local_stats(load_builtin("karate"))
        assert stats.n == 34
        assert stats.avg_degree == pytest.approx(4.59, abs=0.005)
        assert stats.alpha == pytest.approx(1.40, abs=0.01)
        assert stats.clustering_deg2 == pytest.approx(0.59, abs=0.01)

    def test_dolphins(self):
        stats = compute_local_stats(load_builtin("dolphins"))
        assert stats.n == 62
        assert stats.avg_degree == pytest.approx(5.13, abs=0.005)
        assert stats.alpha == pytest.approx(1.58, abs=0.01)

    def test_common_neighbors_match_triple_loop(self):
        for seed in range(3):
            g = gen_erdos_renyi(30 + 10 * seed, 0.15, seed)
            adj = np.zeros((g.n, g.n), dtype=bool)
            for i, j in g.edges:
                adj[i, j] = adj[j, i] = True
            counts = common_neighbors(g)
            for i, j in g.edges:
                assert counts[(i, j)] == sum(1 for k in range(g.n) if adj[i, k] and adj[j, k])

    def test_small_graph_clustering(self):
        c = clustering(gen_complete(4))
        assert c.c_local.tolist() == [1.0] * 4 and c.c_all == 1.0
        assert clustering(Graph(6, [(0, k) for k in range(1, 6)])).c_all == 0.0

    def test_alpha_of_complete_graphs(self):
        for n in range(3, 21):
            assert alpha(gen_complete(n)) == pytest.approx((n - 1) / n, abs=1e-12)


@pytest.mark.slow
class TestAlphaLowerBound:
    def test_random_graph_families(self):
        graphs = connected_graphs(lambda s: gen_erdos_renyi(10 + s % 90, min(1.0, 6.0 / (10 + s % 90)), s), 100)
        graphs += connected_graphs(lambda s: gen_random_regular(12 + 2 * (s % 40), 3 + s % 4, s), 100)
        for g in graphs:
            report = lower_bound_report(g)
            assert report["alpha"] >= report["alpha_lower_bound"] - 1e-12
            assert report["per_node_holds"]

    @pytest.mark.parametrize("n,d", [(6, 3), (10, 4), (20, 3)])
    def test_remark_union(self, n, d):
        report = lower_bound_report(gen_remark_union(n, d, seed=1))
        assert report["holds"]


class TestSamplingBudget:
    def test_epsilon_halved_quadruples_m(self):
        g = load_builtin("karate")
        raw = lambda eps: 8 * alpha(g) * g.n * math.log(g.n) / eps ** 2
        assert raw(0.25) == pytest.approx(4 * raw(0.5))
        assert sample_count(g, 0.5) == math.ceil(raw(0.5))

    def test_every_draw_contributes_one(self):
        g = load_builtin("dolphins")
        dist = edge_probabilities(g)
        m = 777
        h = sparsify(g, SampleConfig(epsilon=0.5, m_override=m, seed=12))
        probs = dict(zip(dist.edges, dist.probs))
        assert math.fsum(w * m * probs[e] for e, w in h.weights.items()) == pytest.approx(m)

    def test_triangle_with_pendant(self):
        dist = edge_probabilities(Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)]))
        assert dist.probs.tolist() == pytest.approx([2 / 9, 2 / 9, 1 / 3, 2 / 9])

    def test_percolation_mean(self):
        g = gen_complete(20)
        mean = np.mean([percolate(g, 0.5, seed).num_edges for seed in range(500)])
        assert abs(mean - 95) <= 3 * math.sqrt(190 * 0.25 / 500)


class TestSpectralCertificate:
    def test_single_edge_projector(self):
        M = pseudo_inverse_sqrt(laplacian(gen_path(2)))
        assert M @ laplacian(gen_path(2)) @ M == pytest.approx(np.array([[0.5, -0.5], [-0.5, 0.5]]))

    def test_pseudo_inverse_identity(self):
        L = laplacian(load_builtin("dolphins"))
        assert L @ pseudo_inverse(L) @ L == pytest.approx(L, abs=1e-8)

    def test_scaled_beyond_epsilon_fails(self):
        L = laplacian(load_builtin("karate"))
        report = verify_spectral(L, 2.0 * L, 0.5)
        assert report.eig_max == pytest.approx(2.0)
        assert not report.passed

    def test_resistances(self):
        assert effective_resistance(gen_path(2), 0, 1) == pytest.approx(1.0)
        assert effective_resistance(gen_complete(3), 0, 1) == pytest.approx(2 / 3)
        assert effective_resistance(gen_path(4), 0, 3) == pytest.approx(3.0)

    def test_local_subgraph_closed_form(self):
        for t in range(21):
            assert abs(local_subgraph_resistance(t) - 2 / (t + 2)) <= 1e-10

    def test_rayleigh_monotonicity(self):
        g = load_builtin("karate")
        kept = [e for e in g.edges if e != (0, 1)]
        sub = Graph(g.n, kept)
        assert is_connected(sub)
        R_g, R_sub = pseudo_inverse(laplacian(g)), pseudo_inverse(laplacian(sub))
        for i, j in [(0, 1), (0, 33), (5, 16), (11, 26)]:
            r_g = R_g[i, i] + R_g[j, j] - 2 * R_g[i, j]
            r_sub = R_sub[i, i] + R_sub[j, j] - 2 * R_sub[i, j]
            assert r_g <= r_sub + 1e-12

    @pytest.mark.slow
    def test_karate_sparsifier_passes_on_most_seeds(self):
        g = load_builtin("karate")
        L_G = laplacian(g)
        passed = sum(
            verify_spectral(L_G, laplacian(sparsify(g, SampleConfig(epsilon=0.5, seed=seed))), 0.5).passed
            for seed in range(40)
        )
        assert passed >= 36


class TestCurvatureBounds:
    @pytest.mark.slow
    def test_complete_graphs(self):
        for n in range(3, 13):
            g = gen_complete(n)
            report = ricci_all(g)
            check = alpha_upper_bound_check(g, report)
            assert check.applicable and check.holds
            assert report.kappa_min == Fraction(n - 2, n - 1)
            assert transport_lower_bound_check(g, report)["holds"]

    @pytest.mark.parametrize("name", ["karate", "dolphins"])
    def test_transport_lower_bound_on_datasets(self, name):
        assert transport_lower_bound_check(load_builtin(name))["holds"]

    def test_karate_has_both_signs(self):
        report = ricci_all(load_builtin("karate"))
        assert report.kappa_min < 0 < report.kappa_max

    def test_single_edge_and_triangle(self):
        assert w1(gen_path(2), 0, 1) == 1
        assert w1(gen_complete(3), 0, 1) == Fraction(1, 2)
        assert w1(gen_complete(3), 2, 2) == 0
        assert not alpha_upper_bound_check(gen_path(3)).applicable

    def test_w1_is_a_metric(self):
        g = load_builtin("karate")
        rng = np.random.default_rng(0)
        for _ in range(10):
            i, j, k = (int(v) for v in rng.choice(g.n, size=3, replace=False))
            assert w1(g, i, j) == w1(g, j, i)
            assert w1(g, i, k) <= w1(g, i, j) + w1(g, j, k)

    def test_transport_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            rows, cols = (int(v) for v in rng.integers(1, 4, size=2))
            supply = [Fraction(int(v)) for v in rng.integers(1, 5, size=rows)]
            total = sum(supply)
            weights = [Fraction(int(v)) for v in rng.integers(1, 5, size=cols)]
            demand = [w * total / sum(weights) for w in weights]
            cost = [[Fraction(int(c)) for c in row] for row in rng.integers(0, 4, size=(rows, cols))]
            assert solve_transport(supply, demand, cost).cost == enumerate_w1(supply, demand, cost)


class TestHypergraphSuite:
    def test_two_overlapping_hyperedges(self):
        ce = clique_expand(Hypergraph(4, [[0, 1, 2], [0, 1, 3]]))
        assert ce.graph.weight(0, 1) == 2.0 and ce.c_scores[(0, 1)] == 6
        assert ce.graph.weight(0, 2) == 1.0 and ce.c_scores[(0, 2)] == 3
        dist = hyper_probabilities(ce)
        assert dict(zip(dist.edges, dist.probs))[(0, 1)] == pytest.approx(1 / 9)

    def test_single_hyperedge(self):
        h = Hypergraph(3, [[0, 1, 2]])
        assert check_c_bound(h).sum_inv_c == 1
        assert hyper_probabilities(clique_expand(h)).probs.tolist() == pytest.approx([1 / 3] * 3)
        sparse = hyper_sparsify(h, 0.5, seed=1, m_override=3)
        assert set(sparse.edges) <= {(0, 1), (0, 2), (1, 2)}
        assert sparse.total_weight() == pytest.approx(3.0)

    def test_single_hyperedge_is_unbiased(self):
        h = Hypergraph(3, [[0, 1, 2]])
        ce = clique_expand(h)
        mean = sum(laplacian(hyper_sparsify(h, 0.5, seed=s, m_override=30, ce=ce)) for s in range(200)) / 200
        assert mean == pytest.approx(laplacian(ce.graph), abs=0.1)

    def test_c_bound_on_random_hypergraphs(self):
        for seed in range(100):
            n = 8 + seed % 20
            h = gen_random_hypergraph(n, n, min(n, 6), seed)
            assert check_c_bound(h).holds

    def test_laplacian_identity(self):
        rng = np.random.default_rng(5)
        for seed in range(100):
            h = gen_random_hypergraph(10, 8, 5, seed)
            x = rng.normal(size=10)
            L = laplacian(clique_expand(h).graph)
            assert abs(hypergraph_quadratic_form(h, x) - x @ L @ x) <= 1e-9 * max(1.0, abs(x @ L @ x))

    def test_tightness_designs(self):
        for k in range(2, 7):
            assert check_c_bound(gen_tightness_design(k)).sum_inv_c == Fraction((k - 1) * k * k, 2)

    @pytest.mark.slow
    def test_design_sparsifier_passes_on_most_seeds(self):
        h = gen_tightness_design(3)
        ce = clique_expand(h)
        L_G = laplacian(ce.graph)
        passed = sum(verify_spectral(L_G, laplacian(hyper_sparsify(h, 0.5, seed, ce=ce)), 0.5).passed
                     for seed in range(20))
        assert passed >= 18
