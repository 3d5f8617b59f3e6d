"""Chromatic numbers, small exact Turán numbers, and the Erdős–Stone leading term."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .poset import Graph, _bits


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by backtracking colouring (DSATUR order)."""
    if g.v < 1:
        raise ValueError("graph needs at least one vertex")
    if g.m == 0:
        return 1
    adj = g.adjacency()
    lower = max(2, _greedy_clique(adj))
    for c in range(lower, g.v + 1):
        if _colourable(adj, g.v, c):
            return c
    return g.v


def _greedy_clique(adj: list[int]) -> int:
    best = 1
    for start in range(len(adj)):
        clique, cand = 1, adj[start]
        while cand:
            nxt = max(_bits(cand), key=lambda x: (adj[x] & cand).bit_count())
            clique += 1
            cand &= adj[nxt]
        best = max(best, clique)
    return best


def _colourable(adj: list[int], v: int, c: int) -> bool:
    colour = [-1] * v

    def pick() -> int:
        # most distinct neighbour colours, then highest degree
        best, key = -1, None
        for x in range(v):
            if colour[x] < 0:
                seen = {colour[y] for y in _bits(adj[x]) if colour[y] >= 0}
                k = (len(seen), adj[x].bit_count())
                if key is None or k > key:
                    best, key = x, k
        return best

    def rec(done: int, used: int) -> bool:
        if done == v:
            return True
        x = pick()
        banned = {colour[y] for y in _bits(adj[x])}
        # a fresh colour is interchangeable with any other unused one
        for col in range(min(used + 1, c)):
            if col in banned:
                continue
            colour[x] = col
            if rec(done + 1, max(used, col + 1)):
                return True
        colour[x] = -1
        return False

    return rec(0, 0)


def clique_number(g: Graph) -> int:
    adj = g.adjacency()
    best = 0

    def rec(size: int, cand: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if not cand:
            best = size
            return
        x = (cand & -cand).bit_length() - 1
        rec(size + 1, cand & adj[x])
        rec(size, cand & ~(1 << x))

    rec(0, (1 << g.v) - 1)
    return best


# -- subgraph containment ---------------------------------------------------


def _pattern_order(padj: list[int], first: tuple[int, int] | None) -> list[int]:
    order: list[int] = list(first) if first else []
    placed = sum(1 << u for u in order)
    rest = [u for u in range(len(padj)) if not placed >> u & 1]
    while rest:
        u = max(rest, key=lambda x: ((padj[x] & placed).bit_count(), padj[x].bit_count(), -x))
        order.append(u)
        rest.remove(u)
        placed |= 1 << u
    return order


def graph_embed(host_adj: list[int], host_v: int, g: Graph,
                fixed: tuple[tuple[int, int], tuple[int, int]] | None = None):
    """Injective map of ``g``'s vertices into the host sending edges to edges.

    ``fixed = ((u, w), (a, b))`` pins pattern edge ``u-w`` onto host edge ``a-b``.
    Returns the vertex map as a list or ``None``.
    """
    padj = g.adjacency()
    order = _pattern_order(padj, fixed[0] if fixed else None)
    f = [-1] * g.v
    pdeg = [row.bit_count() for row in padj]
    hdeg = [row.bit_count() for row in host_adj]
    everything = (1 << host_v) - 1

    def rec(pos: int, used: int) -> bool:
        if pos == g.v:
            return True
        u = order[pos]
        cand = everything & ~used
        for w in _bits(padj[u]):
            if f[w] >= 0:
                cand &= host_adj[f[w]]
        for h in _bits(cand):
            if hdeg[h] < pdeg[u]:
                continue
            f[u] = h
            if rec(pos + 1, used | 1 << h):
                return True
        f[u] = -1
        return False

    if fixed is None:
        return f if rec(0, 0) else None
    (u, w), (a, b) = fixed
    if not host_adj[a] >> b & 1 or hdeg[a] < pdeg[u] or hdeg[b] < pdeg[w]:
        return None
    f[u], f[w] = a, b
    return f if rec(2, 1 << a | 1 << b) else None


def contains_subgraph(host: Graph, g: Graph):
    if g.v > host.v or g.m > host.m:
        return None
    return graph_embed(host.adjacency(), host.v, g)


# -- Turán numbers ----------------------------------------------------------


@dataclass(frozen=True)
class TuranResult:
    nv: int
    forbidden: Graph
    value: int
    witness: Graph
    status: str  # "exact" | "lower-bound"
    nodes: int
    elapsed: float

    def to_json(self) -> dict:
        return {
            "nv": self.nv,
            "forbidden": self.forbidden.literal(),
            "value": self.value,
            "witness": self.witness.literal(),
            "status": self.status,
            "nodes": self.nodes,
        }


def turan_graph(nv: int, parts: int) -> Graph:
    """Complete balanced ``parts``-partite graph on ``nv`` vertices."""
    if parts < 1:
        return Graph(nv, frozenset())
    return Graph.from_edges(nv, [(a, b) for a, b in combinations(range(nv), 2)
                                 if a % parts != b % parts])


class _OutOfBudget(Exception):
    pass


def turan_exact(nv: int, g: Graph, max_nodes: int | None = None,
                max_seconds: float | None = None, averaging: bool = True) -> TuranResult:
    """Maximum edge count of a ``g``-free graph on ``nv`` vertices.

    Branch and bound over the edges of ``K_nv`` in colex order (all edges inside
    vertices ``0..j`` before any edge touching ``j+1``).  Before including an
    edge only embeddings through that edge are tested.  A node is cut when its
    edges plus every undecided edge that could still be added alone cannot
    beat the incumbent.

    The incumbent starts at the Turán graph ``T(nv, chi(g)-1)``, which is always
    ``g``-free.  With ``averaging=True`` the search also stops once the
    incumbent meets ``floor(nv * t(nv-1, g) / (nv-2))``: each edge lies in
    ``nv-2`` of the ``nv`` vertex-deleted subgraphs, each holding at most
    ``t(nv-1, g)`` edges.
    """
    if nv < 1:
        raise ValueError("nv must be >= 1")
    if g.m < 1:
        raise ValueError("forbidden graph must have an edge")
    start = time.perf_counter()
    edges = sorted(combinations(range(nv), 2), key=lambda e: (e[1], e[0]))
    total = len(edges)

    init = turan_graph(nv, chromatic_number(g) - 1)
    best = init.m
    best_edges = frozenset(init.edges)
    ceiling = total
    if averaging and nv >= 3:
        prev = turan_exact(nv - 1, g, averaging=True).value
        ceiling = min(ceiling, nv * prev // (nv - 2))
    nodes = 0
    pattern_edges = g.sorted_edges()

    def creates_copy(adj: list[int], a: int, b: int) -> bool:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        try:
            for u, w in pattern_edges:
                for pair in ((a, b), (b, a)):
                    if graph_embed(adj, nv, g, ((u, w), pair)) is not None:
                        return True
            return False
        finally:
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)

    adj = [0] * nv
    chosen: list[tuple[int, int]] = []

    def rec(i: int, size: int) -> None:
        nonlocal best, best_edges, nodes
        if best >= ceiling:
            return
        nodes += 1
        if nodes % 4096 == 0:
            if max_nodes is not None and nodes >= max_nodes:
                raise _OutOfBudget
            if max_seconds is not None and time.perf_counter() - start > max_seconds:
                raise _OutOfBudget
        if size + (total - i) <= best:
            return
        if i == total:
            best, best_edges = size, frozenset(chosen)
            return
        live = [j for j in range(i, total) if not creates_copy(adj, *edges[j])]
        if size + len(live) <= best:
            return
        if not live:
            rec(total, size)
            return
        j = live[0]
        a, b = edges[j]
        # edges skipped before j are dead now and stay dead as the graph grows
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        chosen.append((a, b))
        rec(j + 1, size + 1)
        chosen.pop()
        adj[a] &= ~(1 << b)
        adj[b] &= ~(1 << a)
        # exclude edge j; only live edges after it can still be added
        if size + len(live) - 1 > best:
            rec(j + 1, size)

    status = "exact"
    try:
        rec(0, 0)
    except _OutOfBudget:
        status = "lower-bound"
    witness = Graph.from_edges(nv, best_edges)
    return TuranResult(nv, g, best, witness, status, nodes, time.perf_counter() - start)


@dataclass(frozen=True)
class EssValue:
    value: float
    chi: int
    note: str


def ess_value(nv: int, g: Graph) -> EssValue:
    """Leading term ``(1 - 1/(chi-1)) nv^2 / 2`` of ``t(nv, g)``."""
    if g.m < 1:
        raise ValueError("forbidden graph must have an edge")
    chi = chromatic_number(g)
    coeff = 1 - 1 / (chi - 1)
    note = ""
    if chi == 2:
        note = "bipartite: leading term vanishes; t(n,G) = o(n^2), not computed"
    return EssValue(coeff * nv * nv / 2, chi, note)
