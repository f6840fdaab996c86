"""
Hypergraph sparsification through the clique expansion.

A hypergraph is replaced by the weighted graph G in which w_ij counts the
hyperedges containing both i and j. Edges are then sampled with probability
proportional to 1 / C_ij, where C_ij is the total size of those hyperedges:

    C_ij = sum_{e : {i,j} subset of e} |e|
    P_ij = C_ij^-1 / sum_E C^-1

The budget is m = ceil(4 d n ln(n) / epsilon^2), d being the largest number of
hyperedges any node belongs to.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from lib.errors import DisconnectedGraphError, ParameterError, PreconditionError
from lib.graph_core import Hypergraph, WeightedGraph, is_connected
from lib.sampler import assemble_sparsifier, check_epsilon, check_seed, normalized_distribution


def incidence_matrix(h):
    """n x |E| 0/1 matrix, column k marking the nodes of hyperedge k."""
    H = np.zeros((h.n, h.num_hyperedges), dtype=np.int64)
    for k, he in enumerate(h.hyperedges):
        H[list(he), k] = 1
    return H


@dataclass(frozen=True)
class CliqueExpansion:
    graph: WeightedGraph
    c_scores: dict          # edge -> C_ij (int)

    def c_array(self):
        return np.array([self.c_scores[e] for e in self.graph.edges], dtype=np.int64)


def clique_expand(h):
    H = incidence_matrix(h)
    sizes = H.sum(axis=0)
    shared = H @ H.T                    # hyperedges containing both endpoints
    size_sums = (H * sizes) @ H.T       # total size of those hyperedges
    rows, cols = np.nonzero(np.triu(shared, k=1))
    weights = {(int(i), int(j)): float(shared[i, j]) for i, j in zip(rows, cols)}
    c_scores = {(int(i), int(j)): int(size_sums[i, j]) for i, j in zip(rows, cols)}
    return CliqueExpansion(WeightedGraph(h.n, weights), c_scores)


def hypergraph_quadratic_form(h, x):
    """sum over hyperedges of sum over node pairs in it of (x_i - x_j)^2."""
    x = np.asarray(x, dtype=float)
    total = []
    for he in h.hyperedges:
        vals = x[list(he)]
        diff = vals[:, None] - vals[None, :]
        total.append(float(np.triu(diff ** 2, k=1).sum()))
    return math.fsum(total)


def hyper_probabilities(ce):
    if ce.graph.num_edges == 0:
        raise PreconditionError("Clique expansion has no edges")
    return normalized_distribution(ce.graph.edges, 1.0 / ce.c_array())


class CBound(NamedTuple):
    sum_inv_c: Fraction
    d: int
    bound: Fraction     # d n / 2
    holds: bool


def check_c_bound(h, ce=None):
    """Exact sum of 1 / C_ij over expansion edges against d n / 2."""
    ce = ce or clique_expand(h)
    sum_inv_c = sum((Fraction(1, c) for c in ce.c_scores.values()), Fraction(0))
    d = h.max_membership()
    bound = Fraction(d * h.n, 2)
    return CBound(sum_inv_c, d, bound, sum_inv_c <= bound)


# Golomb rulers whose doubled length stays below k^2, so every difference is
# distinct modulo k^2.
_GOLOMB_RULERS = {
    2: (0, 1),
    3: (0, 1, 3),
    4: (0, 1, 4, 6),
    5: (0, 1, 4, 9, 11),
    6: (0, 1, 4, 10, 12, 17),
}


def _is_prime(k):
    return k >= 2 and all(k % p for p in range(2, math.isqrt(k) + 1))


def _shift_design(k):
    # node b*k + p is element p of block b; hyperedge (i, j) takes position
    # sigma_i^b(j) = j + b*i (mod k) from block b
    return [[b * k + (j + b * i) % k for b in range(k)] for i in range(1, k + 1) for j in range(k)]


def _cyclic_design(k):
    ruler = _GOLOMB_RULERS[k]
    n = k * k
    return [[(x + r) % n for r in ruler] for x in range(n)]


def gen_tightness_design(k, construction="auto"):
    """k^2 nodes, k^2 hyperedges of size k, every node in exactly k hyperedges.

    construction:
        "shift"  blocks V_1..V_k of k nodes each; hyperedge (i, j) picks
                 element sigma_i^(b-1)(j) of block b with sigma_i(j) = i + j mod k.
                 Pairs are covered at most once only when k is prime.
        "cyclic" translates of a Golomb ruler modulo k^2 (k <= 6); pairs are
                 covered at most once for every supported k.
        "auto"   "shift" for prime k, "cyclic" otherwise.
    """
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    if construction == "auto":
        construction = "shift" if _is_prime(k) or k not in _GOLOMB_RULERS else "cyclic"
    if construction == "shift":
        hyperedges = _shift_design(k)
    elif construction == "cyclic":
        if k not in _GOLOMB_RULERS:
            raise ParameterError(f"cyclic design is available for k <= {max(_GOLOMB_RULERS)}, got {k}")
        hyperedges = _cyclic_design(k)
    else:
        raise ParameterError(f"Unknown construction '{construction}'")
    return Hypergraph(k * k, hyperedges)


def gen_random_hypergraph(n, num_hyperedges, max_size, seed):
    """Hyperedges of uniform random size in [2, max_size] covering every node.

    A random permutation of the nodes is dealt out over the hyperedges first so
    that every node is covered; remaining slots are filled with random nodes.
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if not 2 <= max_size <= n:
        raise ParameterError(f"max_size must be in [2, {n}], got {max_size}")
    if num_hyperedges < 1:
        raise ParameterError(f"num_hyperedges must be >= 1, got {num_hyperedges}")
    check_seed(seed)
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, max_size + 1, size=num_hyperedges)
    if int(sizes.sum()) < n:
        raise ParameterError(f"{num_hyperedges} hyperedges of at most {max_size} nodes cannot cover {n} nodes")

    perm = rng.permutation(n).tolist()
    pos = 0
    hyperedges = []
    for size in sizes.tolist():
        members = perm[pos:pos + size]
        pos += len(members)
        if len(members) < size:
            others = np.setdiff1d(np.arange(n), members)
            members += rng.choice(others, size=size - len(members), replace=False).tolist()
        hyperedges.append(members)
    return Hypergraph(n, hyperedges)


def hyper_sample_count(h, epsilon):
    """m = ceil(4 d n ln(n) / epsilon^2)."""
    if h.n < 2:
        raise PreconditionError(f"sample count needs n >= 2, got n={h.n}")
    check_epsilon(epsilon)
    return math.ceil(4.0 * h.max_membership() * h.n * math.log(h.n) / epsilon ** 2)


def hyper_sparsify(h, epsilon, seed, m_override=None, ce=None):
    """Sparsifier of the clique expansion; each draw of edge e adds w_e / (m P_e)."""
    check_epsilon(epsilon)
    check_seed(seed)
    ce = ce or clique_expand(h)
    if not is_connected(ce.graph):
        raise DisconnectedGraphError("Clique expansion is not connected")
    dist = hyper_probabilities(ce)
    m = m_override if m_override is not None else hyper_sample_count(h, epsilon)
    if m < 1:
        raise ParameterError(f"sample count must be a positive integer, got {m}")
    rng = np.random.default_rng(seed)
    return assemble_sparsifier(h.n, dist, dist.draw_counts(m, rng), m, base_weights=ce.graph.weight_array)
