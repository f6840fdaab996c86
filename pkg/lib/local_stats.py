"""
Common-neighbor counts, clustering coefficients and the alpha statistic.

    T_ij   number of common neighbors of the endpoints of edge (i, j)
    t_i    triangles at node i, t_i = sum_{j in N_i} T_ij / 2
    c_i    2 t_i / (d_i (d_i - 1)), defined as 0 when d_i <= 1
    alpha  (1/n) sum_{(i,j) in E} 2 / (T_ij + 2)

Per-edge counting is done by intersecting sorted adjacency arrays, batched over
a worker pool. Results are indexed by edge position so every reduction runs in
the fixed edge order.
"""

import math
from dataclasses import dataclass

import numpy as np

from lib.errors import PreconditionError
from lib.pool import run_batches


def common_neighbor_counts(g, parallel_workers=1, verbose=False):
    """T_ij for every edge, as an int array parallel to g.edges."""
    edges = g.edges

    def count_batch(start, end):
        return [
            np.intersect1d(g.neighbors(i), g.neighbors(j), assume_unique=True).size
            for i, j in edges[start:end]
        ]

    counts = run_batches(count_batch, len(edges), parallel_workers, verbose, label="edge batch")
    return np.array(counts, dtype=np.int64)


def common_neighbors(g, parallel_workers=1):
    """Map (i, j) -> T_ij, keyed by the stored orientation i < j."""
    counts = common_neighbor_counts(g, parallel_workers)
    return {e: int(t) for e, t in zip(g.edges, counts)}


def resolve_counts(g, t=None):
    """T_ij array from a precomputed map or array, or computed afresh."""
    if t is None:
        return common_neighbor_counts(g)
    if isinstance(t, dict):
        return np.array([t[e] for e in g.edges], dtype=np.int64)
    return np.asarray(t, dtype=np.int64)


def triangles(g, t=None):
    """Triangles through each node."""
    counts = resolve_counts(g, t)
    per_node = np.zeros(g.n, dtype=np.int64)
    if g.edges:
        ends = np.array(g.edges, dtype=np.int64)
        np.add.at(per_node, ends[:, 0], counts)
        np.add.at(per_node, ends[:, 1], counts)
    return per_node // 2


@dataclass(frozen=True)
class Clustering:
    c_local: np.ndarray
    c_all: float      # mean over every node
    c_deg2: float     # mean over nodes of degree >= 2


def clustering(g, t=None):
    deg = g.degrees()
    tri = triangles(g, t)
    c_local = np.zeros(g.n)
    eligible = deg >= 2
    c_local[eligible] = 2.0 * tri[eligible] / (deg[eligible] * (deg[eligible] - 1))
    c_all = math.fsum(c_local) / g.n if g.n else 0.0
    c_deg2 = math.fsum(c_local[eligible]) / int(eligible.sum()) if eligible.any() else 0.0
    return Clustering(c_local, c_all, c_deg2)


def transitivity(g, t=None):
    """Global clustering: 3 * triangles / connected triples."""
    deg = g.degrees()
    wedges = int((deg * (deg - 1) // 2).sum())
    if wedges == 0:
        return 0.0
    return float(triangles(g, t).sum()) / wedges


def alpha_sum(g, t=None):
    """Unnormalized sum of 2 / (T_ij + 2) over all edges."""
    counts = resolve_counts(g, t)
    return math.fsum(2.0 / (counts + 2.0))


def alpha(g, t=None):
    if g.n == 0:
        return 0.0
    return alpha_sum(g, t) / g.n


def alpha_lower_bound(g, t=None):
    """1 / (4c + (2/n) sum_i 1/d_i), with c averaged over all nodes."""
    deg = g.degrees()
    if g.n == 0 or (deg == 0).any():
        isolated = np.flatnonzero(deg == 0).tolist()
        raise PreconditionError(f"alpha lower bound needs every degree >= 1; isolated nodes: {isolated[:10]}")
    c = clustering(g, t).c_all
    return 1.0 / (4.0 * c + 2.0 / g.n * math.fsum(1.0 / deg))


def lower_bound_report(g, t=None):
    """Both sides of the lower bound, plus the per-node step

        sum_{j in N_i} 2 / (T_ij + 2) >= 1 / (2 c_i + 1/d_i)

    that the bound is assembled from.
    """
    counts = resolve_counts(g, t)
    deg = g.degrees()
    a = alpha(g, counts)
    bound = alpha_lower_bound(g, counts)

    node_sums = np.zeros(g.n)
    if g.edges:
        ends = np.array(g.edges, dtype=np.int64)
        contrib = 2.0 / (counts + 2.0)
        np.add.at(node_sums, ends[:, 0], contrib)
        np.add.at(node_sums, ends[:, 1], contrib)
    c_local = clustering(g, counts).c_local
    node_bounds = 1.0 / (2.0 * c_local + 1.0 / deg)
    node_slack = node_sums - node_bounds

    return {
        "alpha": a,
        "alpha_lower_bound": bound,
        "holds": a >= bound - 1e-12,
        "per_node_holds": bool((node_slack >= -1e-12).all()),
        "min_node_slack": float(node_slack.min()),
    }


@dataclass(frozen=True)
class LocalStats:
    n: int
    edge_count: int
    avg_degree: float
    t: dict
    c_local: np.ndarray
    clustering_all: float
    clustering_deg2: float
    clustering_transitivity: float
    alpha: float
    alpha_sum: float
    alpha_lower_bound: object   # None when some node is isolated

    def to_json(self):
        return {
            "n": self.n,
            "edges": self.edge_count,
            "avg_degree": self.avg_degree,
            "clustering_all": self.clustering_all,
            "clustering_deg2": self.clustering_deg2,
            "clustering_transitivity": self.clustering_transitivity,
            "alpha": self.alpha,
            "alpha_lower_bound": self.alpha_lower_bound,
        }


def compute_local_stats(g, parallel_workers=1, verbose=False):
    counts = common_neighbor_counts(g, parallel_workers, verbose)
    clus = clustering(g, counts)
    try:
        bound = alpha_lower_bound(g, counts)
    except PreconditionError:
        bound = None
    return LocalStats(
        n=g.n,
        edge_count=g.num_edges,
        avg_degree=2.0 * g.num_edges / g.n if g.n else 0.0,
        t={e: int(c) for e, c in zip(g.edges, counts)},
        c_local=clus.c_local,
        clustering_all=clus.c_all,
        clustering_deg2=clus.c_deg2,
        clustering_transitivity=transitivity(g, counts),
        alpha=alpha(g, counts),
        alpha_sum=alpha_sum(g, counts),
        alpha_lower_bound=bound,
    )
