"""
Graph, weighted graph and hypergraph representations.

Nodes are dense integer ids 0..n-1. Edges are stored once, as (i, j) with
i < j, sorted. All types are immutable after construction.

Edge-list format (one edge per line):
    i j        unweighted edge
    i j w      weighted edge, w > 0
'#' starts a comment, blank lines are ignored.

Hyperedge format: one hyperedge per line, whitespace-separated node ids,
at least two distinct nodes per line.
"""

import math
import sys
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from lib.errors import (
    DatasetNotFoundError,
    ParameterError,
    ParseError,
)

BUILTIN_DATASETS = ("karate", "dolphins")
DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def _normalize_pair(i, j, n):
    i, j = int(i), int(j)
    if i == j:
        raise ParameterError(f"Self-loop on node {i} is not allowed")
    if not (0 <= i < n and 0 <= j < n):
        raise ParameterError(f"Edge ({i}, {j}) has an endpoint outside [0, {n})")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes 0..n-1."""
    n: int
    edges: tuple
    _adj: tuple = field(init=False, repr=False, compare=False)
    _adj_sets: tuple = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"Node count must be nonnegative, got {self.n}")
        normalized = sorted(_normalize_pair(i, j, self.n) for i, j in self.edges)
        for a, b in zip(normalized, normalized[1:]):
            if a == b:
                raise ParameterError(f"Duplicate edge {a}")
        neighbors = [[] for _ in range(self.n)]
        for i, j in normalized:
            neighbors[i].append(j)
            neighbors[j].append(i)
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_adj", tuple(np.array(sorted(nb), dtype=np.int64) for nb in neighbors))
        object.__setattr__(self, "_adj_sets", tuple(frozenset(nb) for nb in neighbors))
        object.__setattr__(self, "_index", {e: k for k, e in enumerate(normalized)})

    @property
    def num_edges(self):
        return len(self.edges)

    def neighbors(self, i):
        """Sorted neighbor ids of node i."""
        return self._adj[i]

    def neighbor_set(self, i):
        return self._adj_sets[i]

    def degree(self, i):
        return len(self._adj[i])

    def degrees(self):
        return np.array([len(nb) for nb in self._adj], dtype=np.int64)

    def has_edge(self, i, j):
        return j in self._adj_sets[i]

    def edge_index(self, i, j):
        """Position of edge {i, j} in `edges`."""
        key = (i, j) if i < j else (j, i)
        return self._index[key]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with positive edge weights."""
    n: int
    weights: dict
    edges: tuple = field(init=False)
    weight_array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"Node count must be nonnegative, got {self.n}")
        merged = {}
        for (i, j), w in self.weights.items():
            key = _normalize_pair(i, j, self.n)
            w = float(w)
            if not w > 0 or not math.isfinite(w):
                raise ParameterError(f"Edge {key} has non-positive weight {w}")
            if key in merged:
                raise ParameterError(f"Duplicate edge {key}")
            merged[key] = w
        ordered = sorted(merged)
        object.__setattr__(self, "weights", {e: merged[e] for e in ordered})
        object.__setattr__(self, "edges", tuple(ordered))
        object.__setattr__(self, "weight_array", np.array([merged[e] for e in ordered], dtype=float))

    @property
    def num_edges(self):
        return len(self.edges)

    def weight(self, i, j):
        key = (i, j) if i < j else (j, i)
        return self.weights.get(key, 0.0)

    def weighted_degrees(self):
        deg = np.zeros(self.n)
        if self.edges:
            ends = np.array(self.edges, dtype=np.int64)
            np.add.at(deg, ends[:, 0], self.weight_array)
            np.add.at(deg, ends[:, 1], self.weight_array)
        return deg

    def weighted_degree(self, i):
        return float(self.weighted_degrees()[i])

    def support(self):
        """The unweighted graph on the same edge set."""
        return Graph(self.n, self.edges)

    def total_weight(self):
        return math.fsum(self.weight_array)


@dataclass(frozen=True)
class Hypergraph:
    """Node count plus a list of hyperedges; duplicates are allowed."""
    n: int
    hyperedges: tuple

    def __post_init__(self):
        cleaned = []
        for k, he in enumerate(self.hyperedges):
            members = [int(v) for v in he]
            if len(set(members)) != len(members):
                raise ParameterError(f"Hyperedge {k} repeats a node: {members}")
            if len(members) < 2:
                raise ParameterError(f"Hyperedge {k} has fewer than two nodes: {members}")
            for v in members:
                if not 0 <= v < self.n:
                    raise ParameterError(f"Hyperedge {k} has node {v} outside [0, {self.n})")
            cleaned.append(tuple(sorted(members)))
        object.__setattr__(self, "hyperedges", tuple(cleaned))

    @property
    def num_hyperedges(self):
        return len(self.hyperedges)

    def membership(self):
        """Number of hyperedges containing each node."""
        counts = np.zeros(self.n, dtype=np.int64)
        for he in self.hyperedges:
            counts[list(he)] += 1
        return counts

    def max_membership(self):
        return int(self.membership().max()) if self.n else 0


def _edge_arrays(g):
    if isinstance(g, WeightedGraph):
        return g.edges, g.weight_array
    return g.edges, np.ones(len(g.edges))


def laplacian(g):
    """Dense Laplacian L = D - A (weights used where present)."""
    L = np.zeros((g.n, g.n))
    edges, weights = _edge_arrays(g)
    if not edges:
        return L
    ends = np.array(edges, dtype=np.int64)
    rows, cols = ends[:, 0], ends[:, 1]
    np.add.at(L, (rows, cols), -weights)
    np.add.at(L, (cols, rows), -weights)
    np.add.at(L, (rows, rows), weights)
    np.add.at(L, (cols, cols), weights)
    return L


def components(g):
    """Connected components as sorted node lists, by breadth-first search."""
    support = g.support() if isinstance(g, WeightedGraph) else g
    seen = np.zeros(support.n, dtype=bool)
    result = []
    for start in range(support.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        comp = []
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in support.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        result.append(sorted(comp))
    return result


def is_connected(g):
    return len(components(g)) == 1


# Generators. Every random generator is a pure function of (parameters, seed).

def gen_complete(n):
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def gen_path(n):
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def gen_star(leaves):
    """Center 0 joined to nodes 1..leaves."""
    if leaves < 0:
        raise ParameterError(f"leaves must be >= 0, got {leaves}")
    return Graph(leaves + 1, [(0, k) for k in range(1, leaves + 1)])


def gen_erdos_renyi(n, p, seed):
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    return Graph(n, list(zip(rows[keep].tolist(), cols[keep].tolist())))


def _check_regular_params(n, d):
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if (n * d) % 2 != 0:
        raise ParameterError(f"n * d must be even, got n={n}, d={d}")
    if not 0 <= d < n:
        raise ParameterError(f"the 0 <= d < n inequality must be satisfied, got n={n}, d={d}")


def _regular_edges(n, d, rng, max_attempts=1000):
    """Stub pairing: pairs forming self-loops or repeated edges are rejected
    and their stubs re-paired; a dead end restarts the whole pairing."""

    def _suitable(edges, potential):
        if not potential:
            return True
        for s1 in potential:
            for s2 in potential:
                if s1 == s2:
                    break
                if s1 > s2:
                    s1, s2 = s2, s1
                if (s1, s2) not in edges:
                    return True
        return False

    def _try_creation():
        edges = set()
        stubs = np.repeat(np.arange(n), d)
        while stubs.size:
            potential = {}
            rng.shuffle(stubs)
            for s1, s2 in zip(stubs[0::2].tolist(), stubs[1::2].tolist()):
                if s1 > s2:
                    s1, s2 = s2, s1
                if s1 != s2 and (s1, s2) not in edges:
                    edges.add((s1, s2))
                else:
                    potential[s1] = potential.get(s1, 0) + 1
                    potential[s2] = potential.get(s2, 0) + 1
            if not _suitable(edges, potential):
                return None
            stubs = np.array([node for node, count in sorted(potential.items()) for _ in range(count)], dtype=np.int64)
        return edges

    for _ in range(max_attempts):
        edges = _try_creation()
        if edges is not None:
            return sorted(edges)
    raise ParameterError(f"Could not generate a {d}-regular graph on {n} nodes in {max_attempts} attempts")


def gen_random_regular(n, d, seed):
    _check_regular_params(n, d)
    rng = np.random.default_rng(seed)
    return Graph(n, _regular_edges(n, d, rng))


def gen_remark_union(n, d, seed):
    """Random d-regular graph on 0..n-1, complete graph on n..2n-1, bridge (0, n)."""
    _check_regular_params(n, d)
    rng = np.random.default_rng(seed)
    regular = _regular_edges(n, d, rng)
    clique = [(n + i, n + j) for i in range(n) for j in range(i + 1, n)]
    return Graph(2 * n, regular + clique + [(0, n)])


# Edge-list and hyperedge I/O

class LoadedGraph(NamedTuple):
    graph: object          # Graph, or WeightedGraph when any line carries a weight
    labels: tuple          # labels[i] is the input label of node i
    weighted: bool


def _content_lines(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, raw.rstrip("\n"), line.split()


def _label_mapping(labels_in_order):
    """Integer labels keep their value as node id; anything else is remapped
    in order of first appearance."""
    if all(lab.isascii() and lab.isdigit() for lab in labels_in_order):
        n = max((int(lab) for lab in labels_in_order), default=-1) + 1
        return {lab: int(lab) for lab in labels_in_order}, tuple(str(i) for i in range(n))
    mapping = {}
    for lab in labels_in_order:
        if lab not in mapping:
            mapping[lab] = len(mapping)
    return mapping, tuple(mapping)


def parse_edge_list(text, source="<string>"):
    rows = []
    weighted = False
    for number, raw, tokens in _content_lines(text):
        if len(tokens) not in (2, 3):
            raise ParseError(source, number, raw, f"expected 'i j' or 'i j w', got {len(tokens)} fields")
        w = 1.0
        if len(tokens) == 3:
            weighted = True
            try:
                w = float(tokens[2])
            except ValueError:
                raise ParseError(source, number, raw, "weight is not a number") from None
            if not w > 0 or not math.isfinite(w):
                raise ParseError(source, number, raw, "weight must be positive")
        if tokens[0] == tokens[1]:
            raise ParseError(source, number, raw, "self-loop")
        rows.append((number, raw, tokens[0], tokens[1], w))

    order = [lab for _, _, a, b, _ in rows for lab in (a, b)]
    mapping, labels = _label_mapping(order)
    n = len(labels)

    edges = {}
    for number, raw, a, b, w in rows:
        i, j = mapping[a], mapping[b]
        key = (i, j) if i < j else (j, i)
        if key in edges:
            print(f"Warning: {source}:{number}: duplicate edge {a} {b} ignored", file=sys.stderr)
            continue
        edges[key] = w

    graph = WeightedGraph(n, edges) if weighted else Graph(n, list(edges))
    return LoadedGraph(graph, labels, weighted)


def _read_text(path):
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        number = data.count(b"\n", 0, e.start) + 1
        line = data.split(b"\n")[number - 1].rstrip(b"\r").decode("utf-8", errors="replace")
        raise ParseError(path, number, line, f"byte {e.start} is not valid UTF-8") from None


def read_edge_list(path):
    path = Path(path)
    return parse_edge_list(_read_text(path), source=path)


def parse_hyperedges(text, source="<string>"):
    rows = []
    for number, raw, tokens in _content_lines(text):
        if len(tokens) < 2:
            raise ParseError(source, number, raw, "hyperedge needs at least two nodes")
        if len(set(tokens)) != len(tokens):
            raise ParseError(source, number, raw, "hyperedge repeats a node")
        rows.append(tokens)
    mapping, labels = _label_mapping([lab for row in rows for lab in row])
    hypergraph = Hypergraph(len(labels), [[mapping[lab] for lab in row] for row in rows])
    return hypergraph, labels


def read_hyperedges(path):
    path = Path(path)
    return parse_hyperedges(_read_text(path), source=path)


def format_edge_list(g):
    """Edge-list text; weights printed with full precision."""
    lines = [f"# n={g.n} edges={g.num_edges}"]
    if isinstance(g, WeightedGraph):
        lines += [f"{i} {j} {w!r}" for (i, j), w in g.weights.items()]
    else:
        lines += [f"{i} {j}" for i, j in g.edges]
    return "\n".join(lines) + "\n"


def format_hyperedges(h):
    lines = [f"# n={h.n} hyperedges={h.num_hyperedges}"]
    lines += [" ".join(str(v) for v in he) for he in h.hyperedges]
    return "\n".join(lines) + "\n"


def load_builtin(name, data_dir=None):
    """Bundled dataset by name ('karate' or 'dolphins')."""
    if name not in BUILTIN_DATASETS:
        raise DatasetNotFoundError(f"Unknown builtin dataset '{name}'. Available: {', '.join(BUILTIN_DATASETS)}")
    path = Path(data_dir or DATA_DIR) / f"{name}.edges"
    if not path.exists():
        raise DatasetNotFoundError(f"Builtin dataset file not found: {path}")
    return read_edge_list(path).graph


def load_input(descriptor, data_dir=None):
    """Graph named by 'builtin:NAME' or by an edge-list path."""
    descriptor = str(descriptor)
    if descriptor.startswith("builtin:"):
        g = load_builtin(descriptor.split(":", 1)[1], data_dir)
        return LoadedGraph(g, tuple(str(i) for i in range(g.n)), False)
    return read_edge_list(descriptor)
