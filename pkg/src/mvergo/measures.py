"""Invariant measures of finite multi-valued systems.

A probability vector on states is invariant iff it is the common marginal of
some probability weighting on edges whose tail and head marginals agree (an
edge circulation).  Invariance is decided by a transportation feasibility
problem; the extreme points of the invariant set are simple-cycle measures
that survive an exact convex-combination elimination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .system import FiniteMVSystem, simple_cycles

FLOAT_MASS_TOL = 1e-12
FLOAT_BALANCE_TOL = 1e-9


def _is_exact(values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


@dataclass(frozen=True)
class VertexMeasure:
    """Probability weights on states (exact rationals or floats)."""

    weights: tuple

    @classmethod
    def make(cls, weights: Sequence) -> "VertexMeasure":
        w = tuple(weights)
        if any(v < 0 for v in w):
            raise ValueError("measure weights must be non-negative")
        total = sum(w)
        if _is_exact(w):
            if total != 1:
                raise ValueError(f"measure weights must sum to 1, got {total}")
        elif abs(total - 1) > FLOAT_MASS_TOL:
            raise ValueError(f"measure weights must sum to 1, got {total}")
        return cls(w)

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(v) for v in self.weights)


@dataclass(frozen=True)
class EdgeCirculation:
    """Probability weights on edges with equal tail and head marginals."""

    weights: tuple

    @classmethod
    def make(cls, system: FiniteMVSystem, weights: Sequence) -> "EdgeCirculation":
        w = tuple(weights)
        if len(w) != len(system.edges):
            raise ValueError("circulation length must equal the edge count")
        if any(v < 0 for v in w):
            raise ValueError("circulation weights must be non-negative")
        total = sum(w)
        exact = _is_exact(w)
        if exact:
            if total != 1:
                raise ValueError(f"circulation weights must sum to 1, got {total}")
        elif abs(total - 1) > FLOAT_MASS_TOL:
            raise ValueError(f"circulation weights must sum to 1, got {total}")
        tail, head = _raw_marginals(system, w)
        for x in range(system.n_states):
            gap = tail[x] - head[x]
            if (exact and gap != 0) or (not exact and abs(gap) > FLOAT_BALANCE_TOL):
                raise ValueError(f"circulation is unbalanced at state {x}")
        return cls(w)


@dataclass(frozen=True)
class Cycle:
    """A simple directed cycle, stored as the state sequence starting at its
    smallest state; consecutive states (wrapping around) are edges."""

    states: tuple[int, ...]

    def __post_init__(self):
        if not self.states:
            raise ValueError("a cycle has at least one state")
        if len(set(self.states)) != len(self.states):
            raise ValueError("cycle states must be distinct")

    def __len__(self):
        return len(self.states)

    def edge_pairs(self) -> list[tuple[int, int]]:
        k = len(self.states)
        return [(self.states[i], self.states[(i + 1) % k]) for i in range(k)]


def validate_cycle(system: FiniteMVSystem, cycle: Cycle) -> None:
    for t, h in cycle.edge_pairs():
        if not system.has_edge(t, h):
            raise ValueError(f"cycle uses missing edge ({t}, {h})")


def _raw_marginals(system: FiniteMVSystem, weights: Sequence):
    tail = [0] * system.n_states
    head = [0] * system.n_states
    for w, (t, h) in zip(weights, system.edges):
        tail[t] = tail[t] + w
        head[h] = head[h] + w
    return tail, head


def marginals(circulation: EdgeCirculation, system: FiniteMVSystem) -> tuple[VertexMeasure, VertexMeasure]:
    """Tail and head marginals of an edge circulation; equal for a valid one."""
    tail, head = _raw_marginals(system, circulation.weights)
    return VertexMeasure.make(tail), VertexMeasure.make(head)


def cycle_measure(cycle: Cycle, system: FiniteMVSystem) -> tuple[VertexMeasure, EdgeCirculation]:
    """Uniform weight 1/k on a simple cycle's edges and its vertex marginal."""
    validate_cycle(system, cycle)
    k = len(cycle)
    share = Fraction(1, k)
    edge_w = [Fraction(0)] * len(system.edges)
    vert_w = [Fraction(0)] * system.n_states
    for t, h in cycle.edge_pairs():
        edge_w[system.edge_index[(t, h)]] += share
        vert_w[t] += share
    return VertexMeasure.make(vert_w), EdgeCirculation.make(system, edge_w)


def _max_flow(n_nodes: int, arcs: list[tuple[int, int, object]], source: int, sink: int, exact: bool):
    """Edmonds-Karp max flow.  Returns (value, flow-per-arc)."""
    zero = Fraction(0) if exact else 0.0
    eps = 0 if exact else 1e-15
    # adjacency of arc ids; residual capacity per directed arc + reverse arc
    cap = []
    to = []
    adj: list[list[int]] = [[] for _ in range(n_nodes)]
    for u, v, c in arcs:
        adj[u].append(len(cap))
        to.append(v)
        cap.append(c)
        adj[v].append(len(cap))
        to.append(u)
        cap.append(zero)
    value = zero
    while True:
        parent_arc = [-1] * n_nodes
        parent_arc[source] = -2
        queue = deque([source])
        while queue and parent_arc[sink] == -1:
            u = queue.popleft()
            for a in adj[u]:
                v = to[a]
                if parent_arc[v] == -1 and cap[a] > eps:
                    parent_arc[v] = a
                    queue.append(v)
        if parent_arc[sink] == -1:
            break
        # bottleneck along the path
        bottleneck = None
        v = sink
        while v != source:
            a = parent_arc[v]
            bottleneck = cap[a] if bottleneck is None else min(bottleneck, cap[a])
            v = to[a ^ 1]
        v = sink
        while v != source:
            a = parent_arc[v]
            cap[a] -= bottleneck
            cap[a ^ 1] += bottleneck
            v = to[a ^ 1]
        value += bottleneck
    flows = [cap[2 * i + 1] for i in range(len(arcs))]
    return value, flows


def is_invariant(system: FiniteMVSystem, mu: VertexMeasure) -> tuple[bool, EdgeCirculation | None]:
    """Decide invariance of a vertex measure; return a witness circulation.

    Feasibility of the transportation problem on the bipartite tails/heads
    graph: supply mu(x) at each tail, demand mu(y) at each head, infinite
    capacity on the edges of the system.  Feasible iff the max flow moves the
    whole unit of mass.
    """
    w = mu.weights
    if len(w) != system.n_states:
        raise ValueError("measure length must equal n_states")
    exact = _is_exact(w)
    total = sum(w)
    if (exact and total != 1) or (not exact and abs(total - 1) > FLOAT_MASS_TOL):
        raise ValueError("measure must sum to 1")
    n = system.n_states
    source, sink = 2 * n, 2 * n + 1
    big = Fraction(2) if exact else 2.0
    arcs: list[tuple[int, int, object]] = []
    for x in range(n):
        if w[x] > 0:
            arcs.append((source, x, Fraction(w[x]) if exact else float(w[x])))
    inner_start = len(arcs)
    for t, h in system.edges:
        arcs.append((t, n + h, big))
    for y in range(n):
        if w[y] > 0:
            arcs.append((n + y, sink, Fraction(w[y]) if exact else float(w[y])))
    value, flows = _max_flow(2 * n + 2, arcs, source, sink, exact)
    deficit = 1 - value
    ok = (deficit == 0) if exact else (abs(deficit) <= FLOAT_BALANCE_TOL)
    if not ok:
        return False, None
    edge_w = flows[inner_start:inner_start + len(system.edges)]
    witness = EdgeCirculation.make(system, edge_w)
    return True, witness


def invariant_by_subsets(system: FiniteMVSystem, mu: VertexMeasure) -> bool:
    """Independent invariance test: mu(A) <= mu(T^{-1} A) over every subset A.

    Exponential in n_states; guarded to small systems.  Used as the oracle
    against the flow-based decision.
    """
    n = system.n_states
    if n > 16:
        raise ValueError("subset oracle is limited to n_states <= 16")
    w = mu.weights
    pred = system.predecessors
    for mask in range(1, 1 << n):
        members = [x for x in range(n) if mask >> x & 1]
        mass_a = sum(w[x] for x in members)
        preimage = set()
        for x in members:
            preimage.update(pred[x])
        mass_pre = sum(w[x] for x in preimage)
        if mass_a > mass_pre:
            return False
    return True


def convex_combination(target, points):
    """Exact convex-combination witness: weights lambda >= 0 summing to 1 with
    sum(lambda_j * points_j) = target, or None when infeasible.

    Phase-1 simplex over Fractions with Bland's rule.
    """
    if not points:
        return None
    dim = len(target)
    m = len(points)
    # constraint rows: coordinates, then the convex-combination row (sum = 1)
    rows = []
    for i in range(dim):
        rows.append([Fraction(p[i]) for p in points] + [Fraction(target[i])])
    rows.append([Fraction(1)] * m + [Fraction(1)])
    n_rows = dim + 1
    # artificial columns form the initial basis
    width = m + n_rows + 1
    tab = []
    for r, row in enumerate(rows):
        line = row[:-1] + [Fraction(0)] * n_rows + [row[-1]]
        line[m + r] = Fraction(1)
        tab.append(line)
    basis = [m + r for r in range(n_rows)]
    # objective: minimize the artificial sum, expressed over nonbasic columns
    z = [Fraction(0)] * (width - 1)
    zval = Fraction(0)
    for r in range(n_rows):
        for j in range(m):
            z[j] += tab[r][j]
        zval += tab[r][-1]
    while True:
        enter = -1
        for j in range(width - 1):
            if z[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave, best = -1, None
        for r in range(n_rows):
            a = tab[r][enter]
            if a > 0:
                ratio = tab[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave < 0:
            raise RuntimeError("phase-1 simplex cannot be unbounded")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for r in range(n_rows):
            if r != leave and tab[r][enter] != 0:
                f = tab[r][enter]
                tab[r] = [v - f * p for v, p in zip(tab[r], tab[leave])]
        f = z[enter]
        z = [v - f * p for v, p in zip(z, tab[leave][:-1])]
        zval -= f * tab[leave][-1]
        basis[leave] = enter
    if zval != 0:
        return None
    weights = [Fraction(0)] * m
    for r in range(n_rows):
        if basis[r] < m:
            weights[basis[r]] = tab[r][-1]
    return weights


def extreme_invariant_measures(system: FiniteMVSystem) -> list[VertexMeasure]:
    """Extreme points of the set of invariant measures, exactly.

    Every extreme point is the vertex-projection of a simple-cycle
    circulation; projections that are convex combinations of the others are
    eliminated with an exact feasibility test.  Empty when no cycle exists.
    """
    cycles = simple_cycles(system)
    seen: dict[tuple, VertexMeasure] = {}
    for states in cycles:
        vm, _ = cycle_measure(Cycle(states), system)
        seen.setdefault(vm.weights, vm)
    candidates = sorted(seen)
    survivors = []
    for i, weights in enumerate(candidates):
        others = [c for j, c in enumerate(candidates) if j != i]
        if convex_combination(weights, others) is None:
            survivors.append(seen[weights])
    return survivors
