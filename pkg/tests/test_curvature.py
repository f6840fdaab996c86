from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from lib.curvature import (
    alpha_upper_bound_check,
    edge_style,
    edges_below,
    graph_distance,
    kappa_summary,
    neighbor_measure,
    read_dot,
    ricci_all,
    ricci_edge,
    to_dot,
    transport_lower_bound_check,
    w1,
)
from lib.errors import DisconnectedGraphError, ParameterError, PreconditionError
from lib.graph_core import Graph, gen_complete, gen_erdos_renyi, gen_path, gen_random_regular, gen_star, load_builtin


def double_star():
    """Centers 0 and 1 joined by an edge, three leaves on each."""
    return Graph(8, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6), (1, 7)])


def linprog_w1(g, i, j):
    ref = nx.Graph(list(g.edges))
    src, dst = list(g.neighbors(i)), list(g.neighbors(j))
    cost = np.array([[nx.shortest_path_length(ref, a, b) for b in dst] for a in src], dtype=float)
    rows, cols = cost.shape
    A_eq = []
    for r in range(rows):
        a = np.zeros(rows * cols)
        a[r * cols:(r + 1) * cols] = 1
        A_eq.append(a)
    for c in range(cols):
        a = np.zeros(rows * cols)
        a[c::cols] = 1
        A_eq.append(a)
    b_eq = [1 / rows] * rows + [1 / cols] * cols
    return linprog(cost.ravel(), A_eq=np.array(A_eq), b_eq=b_eq, bounds=(0, None), method="highs").fun


class TestMeasures:
    def test_uniform_on_neighbors(self):
        mu = neighbor_measure(gen_star(4), 0)
        assert mu.support == (1, 2, 3, 4)
        assert mu.masses() == [Fraction(1, 4)] * 4
        assert sum(mu.masses()) == 1

    def test_isolated_node(self):
        with pytest.raises(PreconditionError):
            neighbor_measure(Graph(3, [(0, 1)]), 2)

    def test_graph_distance_matches_networkx(self):
        g = load_builtin("karate")
        ref = nx.single_source_shortest_path_length(nx.Graph(list(g.edges)), 5)
        assert graph_distance(g, [5])[5].tolist() == [ref[v] for v in range(g.n)]

    def test_graph_distance_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            graph_distance(Graph(4, [(0, 1), (2, 3)]), [0])


class TestEdgeCurvature:
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_complete_graph(self, n):
        assert ricci_edge(gen_complete(n), 0, 1) == Fraction(n - 2, n - 1)

    def test_triangle(self):
        assert ricci_edge(gen_complete(3), 1, 2) == Fraction(1, 2)

    def test_trees_without_triangles_are_flat(self):
        assert ricci_edge(gen_path(4), 1, 2) == 0
        assert ricci_edge(gen_path(3), 0, 1) == 0
        assert ricci_edge(gen_star(5), 0, 3) == 0

    def test_double_star_bridge_is_negative(self):
        assert ricci_edge(double_star(), 0, 1) == -1
        assert w1(double_star(), 0, 1) == 2

    def test_symmetric(self):
        g = load_builtin("karate")
        assert ricci_edge(g, 0, 31) == ricci_edge(g, 31, 0)

    def test_non_edge(self):
        with pytest.raises(PreconditionError):
            ricci_edge(gen_path(4), 0, 2)

    def test_w1_matches_linprog(self):
        g = load_builtin("karate")
        for i, j in [(0, 1), (0, 31), (32, 33), (5, 16), (2, 27)]:
            assert float(w1(g, i, j)) == pytest.approx(linprog_w1(g, i, j), abs=1e-9)

    def test_curvature_is_at_most_one(self):
        g = gen_random_regular(20, 4, seed=3)
        for i, j in g.edges[:15]:
            assert ricci_edge(g, i, j) <= 1


class TestRicciAll:
    def test_report_on_complete_graph(self):
        report = ricci_all(gen_complete(5))
        assert set(report.kappa.values()) == {Fraction(3, 4)}
        assert report.kappa_min == report.kappa_max == Fraction(3, 4)
        assert report.alpha_bound == Fraction(4, 3)

    def test_no_alpha_bound_without_positive_curvature(self):
        report = ricci_all(double_star())
        assert report.kappa_min == -1
        assert report.alpha_bound is None

    def test_parallel_matches_serial(self):
        g = load_builtin("karate")
        assert ricci_all(g, parallel_workers=4).kappa == ricci_all(g).kappa

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            ricci_all(Graph(3, []))
        with pytest.raises(DisconnectedGraphError):
            ricci_all(Graph(4, [(0, 1), (2, 3)]))

    def test_json(self):
        data = ricci_all(gen_complete(3)).to_json()
        assert data["kappa"] == [
            {"i": 0, "j": 1, "kappa": 0.5},
            {"i": 0, "j": 2, "kappa": 0.5},
            {"i": 1, "j": 2, "kappa": 0.5},
        ]
        assert data["alpha_bound"] == 2.0


class TestBounds:
    @pytest.mark.parametrize("n", [3, 5, 8])
    def test_alpha_upper_bound_on_complete_graphs(self, n):
        check = alpha_upper_bound_check(gen_complete(n))
        assert check.applicable and check.holds
        assert check.alpha == pytest.approx((n - 1) / n)

    def test_alpha_upper_bound_not_applicable(self):
        check = alpha_upper_bound_check(gen_path(5))
        assert not check.applicable
        assert check.holds

    @pytest.mark.parametrize("g", [gen_complete(6), double_star(), gen_path(6), load_builtin("karate")])
    def test_transport_lower_bound(self, g):
        result = transport_lower_bound_check(g)
        assert result["holds"]
        assert result["min_slack"] >= 0

    def test_transport_lower_bound_is_tight_on_complete_graphs(self):
        assert transport_lower_bound_check(gen_complete(5))["min_slack"] == pytest.approx(0.0)

    def test_random_graphs(self):
        for seed in range(4):
            g = gen_erdos_renyi(16, 0.4, seed)
            if not nx.is_connected(nx.Graph(list(g.edges))) or len({v for e in g.edges for v in e}) < g.n:
                continue
            report = ricci_all(g)
            assert transport_lower_bound_check(g, report)["holds"]
            assert alpha_upper_bound_check(g, report).holds


class TestOutput:
    def test_edge_style(self):
        assert edge_style(Fraction(-1)) == ("blue", 4.0)
        assert edge_style(0) == ("black", 0.25)
        assert edge_style(Fraction(1, 2)) == ("red", 2.0)
        assert edge_style(0.01) == ("red", 0.25)

    def test_edges_below(self):
        report = ricci_all(double_star())
        assert edges_below(report, 0) == 1
        assert edges_below(report, Fraction(1, 10)) == len(report.kappa)

    def test_kappa_summary(self):
        summary = kappa_summary(ricci_all(double_star()), kappa0=0.0)
        assert summary["negative"] == 1
        assert summary["zero"] == 6
        assert summary["positive"] == 0
        assert summary["edges_below_kappa0"] == 1
        assert summary["mean"] == pytest.approx(-1 / 7)

    def test_dot_round_trip(self):
        g = double_star()
        report = ricci_all(g)
        text = to_dot(g, report, labels=[f"v{k}" for k in range(g.n)])
        assert text.startswith("graph curvature {")
        assert 'label="v3"' in text
        edges = read_dot(text)
        assert set(edges) == set(g.edges)
        assert edges[(0, 1)]["color"] == "blue"
        assert float(edges[(0, 1)]["kappa"]) == -1.0
        assert edges[(0, 2)]["color"] == "black"
        assert float(edges[(0, 2)]["penwidth"]) == 0.25

    def test_dot_rejects_other_documents(self):
        with pytest.raises(ParameterError):
            read_dot("digraph x { a -> b; }")
