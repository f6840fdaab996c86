"""
Ollivier-Ricci curvature of graph edges.

Every node i carries the uniform measure m_i on its neighbors (mass 1/d_i each).
For an edge (i, j)

    kappa(i, j) = 1 - W1(m_i, m_j)

where W1 is the optimal transport cost between the two measures under hop
distance. W1 is solved exactly with lib.transport, so curvatures are
Fractions and their signs carry no solver tolerance.
"""

import math
import re
import sys
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from lib.errors import DisconnectedGraphError, ParameterError, PreconditionError
from lib.graph_core import is_connected
from lib.local_stats import alpha, resolve_counts
from lib.pool import run_batches
from lib.transport import solve_transport

ZERO_TOL = 1e-9


@dataclass(frozen=True)
class NeighborMeasure:
    node: int
    support: tuple
    mass: Fraction      # same mass on every support node

    def masses(self):
        return [self.mass] * len(self.support)


def neighbor_measure(g, i):
    support = tuple(int(k) for k in g.neighbors(i))
    if not support:
        raise PreconditionError(f"Node {i} has no neighbors; its neighbor measure is undefined")
    return NeighborMeasure(node=i, support=support, mass=Fraction(1, len(support)))


def _bfs(g, source):
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def graph_distance(g, sources):
    """Hop distances from each source to every node: {source: array of length n}."""
    table = {}
    for s in sources:
        if not 0 <= s < g.n:
            raise ParameterError(f"Source {s} outside [0, {g.n})")
        dist = _bfs(g, s)
        if (dist < 0).any():
            unreachable = int(np.flatnonzero(dist < 0)[0])
            raise DisconnectedGraphError(f"Node {unreachable} is unreachable from node {s}")
        table[s] = dist
    return table


def w1(g, i, j, distances=None):
    """Exact W1 between the neighbor measures of i and j."""
    if i == j:
        return Fraction(0)
    mi, mj = neighbor_measure(g, i), neighbor_measure(g, j)
    if distances is None:
        distances = graph_distance(g, mi.support)
    cost = [[int(distances[a][b]) for b in mj.support] for a in mi.support]
    return solve_transport(mi.masses(), mj.masses(), cost).cost


def ricci_edge(g, i, j, distances=None):
    if not g.has_edge(i, j):
        raise PreconditionError(f"({i}, {j}) is not an edge; curvature is computed on edges only")
    return 1 - w1(g, i, j, distances)


@dataclass(frozen=True)
class CurvatureReport:
    kappa: dict                 # edge -> Fraction
    kappa_min: Fraction
    kappa_max: Fraction
    alpha_bound: Optional[Fraction]   # 1 / kappa_min when kappa_min > 0

    def to_json(self):
        return {
            "kappa": [{"i": i, "j": j, "kappa": float(k)} for (i, j), k in self.kappa.items()],
            "kappa_min": float(self.kappa_min),
            "kappa_max": float(self.kappa_max),
            "alpha_bound": None if self.alpha_bound is None else float(self.alpha_bound),
        }


def ricci_all(g, parallel_workers=1, verbose=False):
    if g.num_edges == 0:
        raise PreconditionError("Curvature report of a graph without edges")
    if not is_connected(g):
        raise DisconnectedGraphError("Curvature requires a connected graph")
    distances = graph_distance(g, range(g.n))
    edges = g.edges

    def curvature_batch(start, end):
        return [ricci_edge(g, i, j, distances) for i, j in edges[start:end]]

    values = run_batches(curvature_batch, len(edges), parallel_workers, verbose, label="curvature batch", min_batch_size=16)
    if verbose:
        print(f"Computed curvature on {len(edges)} edges", file=sys.stderr)
    kappa = dict(zip(edges, values))
    k_min, k_max = min(values), max(values)
    return CurvatureReport(
        kappa=kappa,
        kappa_min=k_min,
        kappa_max=k_max,
        alpha_bound=1 / k_min if k_min > 0 else None,
    )


class UpperBoundCheck(NamedTuple):
    kappa_min: Fraction
    alpha: float
    applicable: bool    # kappa_min > 0
    holds: bool         # vacuously true when not applicable


def alpha_upper_bound_check(g, report=None):
    """alpha <= 1 / kappa_min whenever every edge has positive curvature."""
    report = report or ricci_all(g)
    a = alpha(g)
    applicable = report.kappa_min > 0
    holds = (not applicable) or a <= float(1 / report.kappa_min)
    return UpperBoundCheck(report.kappa_min, a, applicable, holds)


def transport_lower_bound_check(g, report=None, t=None):
    """W1(m_i, m_j) >= 1 - T_ij * min(1/d_i, 1/d_j) on every edge, in exact arithmetic."""
    report = report or ricci_all(g)
    counts = resolve_counts(g, t)
    slacks = []
    for (i, j), tij in zip(g.edges, counts):
        w = 1 - report.kappa[(i, j)]
        bound = 1 - int(tij) * min(Fraction(1, g.degree(i)), Fraction(1, g.degree(j)))
        slacks.append(w - bound)
    return {"holds": all(s >= 0 for s in slacks), "min_slack": float(min(slacks))}


def edges_below(report, kappa0):
    """Number of edges with curvature strictly below kappa0."""
    return sum(1 for k in report.kappa.values() if k < kappa0)


def edge_style(kappa):
    """DOT color and penwidth: blue negative, black zero, red positive; width grows with |kappa|."""
    k = float(kappa)
    if abs(k) < ZERO_TOL:
        color = "black"
    elif k < 0:
        color = "blue"
    else:
        color = "red"
    return color, max(0.25, 4.0 * abs(k))


def to_dot(g, report, labels=None, name="curvature"):
    """Undirected DOT drawing, one edge per curvature value.

    Edges carry the exact kappa as an attribute. Width is 4|kappa| with a floor
    of 0.25, so flat edges stay visible.
    """
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in range(g.n):
        label = labels[v] if labels else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for (i, j), k in report.kappa.items():
        color, width = edge_style(k)
        lines.append(f'  {i} -- {j} [kappa="{float(k):.12g}", label="{float(k):.3f}", color={color}, penwidth={width:.3f}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_EDGE = re.compile(r'^\s*(\w+)\s*--\s*(\w+)\s*\[(.*)\]\s*;?\s*$')
_DOT_ATTR = re.compile(r'(\w+)\s*=\s*("[^"]*"|[^,\s]+)')


def read_dot(text):
    """Edges of a DOT document written by to_dot: {(i, j): {attr: value}}."""
    stripped = text.strip()
    if not (re.match(r'^(strict\s+)?graph\b', stripped) and stripped.endswith("}")):
        raise ParameterError("Not an undirected DOT graph")
    edges = {}
    for line in stripped.splitlines()[1:-1]:
        match = _DOT_EDGE.match(line)
        if not match:
            continue
        attrs = {key: value.strip('"') for key, value in _DOT_ATTR.findall(match.group(3))}
        edges[(int(match.group(1)), int(match.group(2)))] = attrs
    return edges


def kappa_summary(report, kappa0=0.0):
    values = [float(k) for k in report.kappa.values()]
    return {
        "negative": sum(1 for k in values if k < -ZERO_TOL),
        "zero": sum(1 for k in values if abs(k) < ZERO_TOL),
        "positive": sum(1 for k in values if k > ZERO_TOL),
        "edges_below_kappa0": edges_below(report, Fraction(kappa0).limit_denominator(10 ** 12)),
        "mean": math.fsum(values) / len(values),
    }
