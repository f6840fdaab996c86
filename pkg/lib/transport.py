"""
Exact transportation simplex.

Solves

    minimize    sum_ij cost[i][j] * x[i][j]
    subject to  sum_j x[i][j] = supply[i],  sum_i x[i][j] = demand[j],  x >= 0

over fractions.Fraction, so optimal values are exact rationals.

The method is the classic one: a northwest-corner starting basis, u/v
potentials from the basis tree, the most negative reduced cost enters, and
flow is shifted around the cycle the entering cell closes.

Degenerate pivots are avoided by the usual perturbation: every supply gets
+delta and the last demand gets +rows*delta. Quantities are carried as
(value, delta-coefficient) pairs and compared lexicographically, which is the
limit delta -> 0+. Under this perturbation no basic flow is ever zero, so every
pivot strictly decreases the cost and the method terminates.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from lib.errors import ParameterError

_ZERO = (Fraction(0), Fraction(0))


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class TransportSolution:
    cost: Fraction
    flow: dict          # (row, col) -> Fraction, positive entries only
    pivots: int


def _as_fractions(values, name):
    try:
        out = [Fraction(v) for v in values]
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{name} must be rational numbers: {e}") from e
    if not out:
        raise ParameterError(f"{name} must not be empty")
    if any(v < 0 for v in out):
        raise ParameterError(f"{name} must be nonnegative")
    return out


def north_west_corner(supply, demand):
    """Staircase starting basis: (rows + cols - 1) cells forming a spanning tree."""
    supply_copy = list(supply)
    demand_copy = list(demand)
    i = 0
    j = 0
    bfs = {}

    while len(bfs) < len(supply) + len(demand) - 1:
        v = min(supply_copy[i], demand_copy[j])
        supply_copy[i] = _sub(supply_copy[i], v)
        demand_copy[j] = _sub(demand_copy[j], v)
        bfs[(i, j)] = v

        if supply_copy[i] <= _ZERO and i < len(supply) - 1:
            i += 1
        elif demand_copy[j] <= _ZERO and j < len(demand) - 1:
            j += 1
        else:
            i = min(i + 1, len(supply) - 1)

    return bfs


def _tree_adjacency(basis, rows, cols):
    # nodes: ('r', i) and ('c', j)
    adj = {("r", i): [] for i in range(rows)}
    adj.update({("c", j): [] for j in range(cols)})
    for i, j in basis:
        adj[("r", i)].append(("c", j))
        adj[("c", j)].append(("r", i))
    return adj


def potentials(basis, cost, rows, cols):
    """u, v with u[i] + v[j] = cost[i][j] on every basic cell, u[0] = 0."""
    us = [None] * rows
    vs = [None] * cols
    us[0] = Fraction(0)
    adj = _tree_adjacency(basis, rows, cols)
    queue = deque([("r", 0)])
    while queue:
        kind, k = queue.popleft()
        for nxt in adj[(kind, k)]:
            if kind == "r" and vs[nxt[1]] is None:
                vs[nxt[1]] = cost[k][nxt[1]] - us[k]
                queue.append(nxt)
            elif kind == "c" and us[nxt[1]] is None:
                us[nxt[1]] = cost[nxt[1]][k] - vs[k]
                queue.append(nxt)
    return us, vs


def _tree_path(basis, rows, cols, i, j):
    """Basic cells on the tree path from row i to column j, in walking order."""
    adj = _tree_adjacency(basis, rows, cols)
    start, goal = ("r", i), ("c", j)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nxt in adj[node]:
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    nodes = [goal]
    while parent[nodes[-1]] is not None:
        nodes.append(parent[nodes[-1]])
    nodes.reverse()
    cells = []
    for a, b in zip(nodes, nodes[1:]):
        cells.append((a[1], b[1]) if a[0] == "r" else (b[1], a[1]))
    return cells


def _entering_cell(basis, cost, us, vs, rows, cols):
    best, best_cell = Fraction(0), None
    for i in range(rows):
        for j in range(cols):
            if (i, j) in basis:
                continue
            reduced = cost[i][j] - us[i] - vs[j]
            if reduced < best:
                best, best_cell = reduced, (i, j)
    return best_cell


def loop_pivoting(basis, cell, rows, cols):
    """Enter `cell`, shift flow around its cycle, drop the first cell emptied."""
    path = _tree_path(basis, rows, cols, *cell)
    minus_cells = path[0::2]
    plus_cells = path[1::2]
    leaving = min(minus_cells, key=lambda p: basis[p])
    theta = basis[leaving]

    new_basis = dict(basis)
    new_basis[cell] = theta
    for p in minus_cells:
        new_basis[p] = _sub(new_basis[p], theta)
    for p in plus_cells:
        new_basis[p] = _add(new_basis[p], theta)
    del new_basis[leaving]
    return new_basis


def solve_transport(supply, demand, cost, max_pivots=100000):
    supply = _as_fractions(supply, "supply")
    demand = _as_fractions(demand, "demand")
    rows, cols = len(supply), len(demand)
    if len(cost) != rows or any(len(row) != cols for row in cost):
        raise ParameterError(f"cost must be a {rows}x{cols} matrix")
    cost = [[Fraction(c) for c in row] for row in cost]
    if sum(supply) != sum(demand):
        raise ParameterError(f"unbalanced problem: supply {sum(supply)} != demand {sum(demand)}")

    # zero-demand columns carry no flow and would make the perturbation degenerate
    active = [j for j in range(cols) if demand[j] > 0]
    if not active:
        return TransportSolution(cost=Fraction(0), flow={}, pivots=0)
    sub_cost = [[row[j] for j in active] for row in cost]
    sub_cols = len(active)

    lex_supply = [(s, Fraction(1)) for s in supply]
    lex_demand = [(demand[j], Fraction(0)) for j in active]
    lex_demand[-1] = (lex_demand[-1][0], Fraction(rows))

    basis = north_west_corner(lex_supply, lex_demand)
    pivots = 0
    while True:
        us, vs = potentials(basis, sub_cost, rows, sub_cols)
        cell = _entering_cell(basis, sub_cost, us, vs, rows, sub_cols)
        if cell is None:
            break
        basis = loop_pivoting(basis, cell, rows, sub_cols)
        pivots += 1
        if pivots > max_pivots:
            raise ParameterError(f"transportation simplex exceeded {max_pivots} pivots")

    flow = {(i, active[j]): v[0] for (i, j), v in basis.items() if v[0] != 0}
    total = sum((cost[i][j] * x for (i, j), x in flow.items()), Fraction(0))
    return TransportSolution(cost=total, flow=flow, pivots=pivots)
