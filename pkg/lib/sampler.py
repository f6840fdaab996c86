"""
Common-neighbor edge sampler and the bond-percolation baseline.

The sparsifier draws m edges with replacement, edge (i, j) with probability

    p_ij = (2 / (T_ij + 2)) / sum_E 2 / (T_ab + 2)

and gives every draw the weight 1 / (m p_ij); weights of repeated draws add up.
The default budget is m = ceil(8 alpha n ln(n) / epsilon^2).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from lib.errors import DisconnectedGraphError, ParameterError, PreconditionError
from lib.graph_core import WeightedGraph, is_connected
from lib.local_stats import alpha, resolve_counts


def check_epsilon(epsilon):
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must be strictly inside (0, 1), got {epsilon}")


def check_seed(seed):
    if seed is None or int(seed) < 0 or int(seed) >= 2 ** 64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")


@dataclass(frozen=True)
class SampleConfig:
    epsilon: float
    m_override: Optional[int] = None
    seed: int = 1

    def __post_init__(self):
        check_epsilon(self.epsilon)
        check_seed(self.seed)
        if self.m_override is not None and self.m_override < 1:
            raise ParameterError(f"sample count must be a positive integer, got {self.m_override}")


@dataclass(frozen=True)
class EdgeDistribution:
    edges: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if len(probs) != len(self.edges):
            raise ParameterError(f"{len(self.edges)} edges but {len(probs)} probabilities")
        if len(probs) == 0:
            raise PreconditionError("Edge distribution over an empty edge set")
        if not (probs > 0).all():
            raise ParameterError("Every edge probability must be positive")
        total = math.fsum(probs)
        if abs(total - 1.0) > 1e-12:
            raise ParameterError(f"Edge probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", probs)

    def cdf(self):
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        return cdf

    def draw_counts(self, m, rng):
        """Hit count per edge after m independent categorical draws (inverse CDF)."""
        idx = np.searchsorted(self.cdf(), rng.random(m), side="right")
        np.minimum(idx, len(self.edges) - 1, out=idx)
        return np.bincount(idx, minlength=len(self.edges))


def normalized_distribution(edges, scores):
    """Distribution proportional to the given positive scores."""
    scores = np.asarray(scores, dtype=float)
    if len(edges) == 0:
        raise PreconditionError("Cannot sample from an empty edge set")
    return EdgeDistribution(tuple(edges), scores / math.fsum(scores))


def edge_probabilities(g, t=None):
    counts = resolve_counts(g, t)
    return normalized_distribution(g.edges, 2.0 / (counts + 2.0))


def sample_count(g, epsilon, t=None):
    """m = ceil(8 alpha n ln(n) / epsilon^2)."""
    if g.n < 2:
        raise PreconditionError(f"sample count needs n >= 2, got n={g.n}")
    check_epsilon(epsilon)
    return math.ceil(8.0 * alpha(g, t) * g.n * math.log(g.n) / epsilon ** 2)


def resolve_sample_count(g, cfg, t=None):
    return cfg.m_override if cfg.m_override is not None else sample_count(g, cfg.epsilon, t)


def assemble_sparsifier(n, dist, counts, m, base_weights=None):
    """Weighted graph on the drawn edges with weight w_e * count_e / (m p_e)."""
    hit = np.flatnonzero(counts)
    scale = counts[hit] / (m * dist.probs[hit])
    if base_weights is not None:
        scale = scale * np.asarray(base_weights, dtype=float)[hit]
    return WeightedGraph(n, {dist.edges[k]: float(w) for k, w in zip(hit.tolist(), scale)})


def sparsify(g, cfg, t=None):
    """Common-neighbor sparsifier of a connected graph."""
    if not is_connected(g):
        raise DisconnectedGraphError("Sparsification requires a connected graph")
    counts = resolve_counts(g, t)
    dist = edge_probabilities(g, counts)
    m = resolve_sample_count(g, cfg, counts)
    rng = np.random.default_rng(cfg.seed)
    return assemble_sparsifier(g.n, dist, dist.draw_counts(m, rng), m)


def percolate(g, keep_prob, seed):
    """Keep every edge independently with probability keep_prob, weight 1."""
    if not 0.0 <= keep_prob <= 1.0:
        raise ParameterError(f"keep_prob must be in [0, 1], got {keep_prob}")
    check_seed(seed)
    rng = np.random.default_rng(seed)
    keep = rng.random(g.num_edges) < keep_prob
    return WeightedGraph(g.n, {e: 1.0 for e, k in zip(g.edges, keep) if k})


def percolation_keep_prob(g, budget):
    """Keep probability whose expected number of retained edges equals budget."""
    if budget < 0:
        raise ParameterError(f"budget must be nonnegative, got {budget}")
    if g.num_edges == 0:
        raise PreconditionError("Percolation budget on an empty edge set")
    return min(1.0, budget / g.num_edges)
