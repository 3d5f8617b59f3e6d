"""Finite posets, their constructors, and weak (non-induced) containment.

A poset on ``p`` elements is stored as its strict order: ``up[i]`` is a
bitmask of every ``j`` with ``i < j``.  Reflexivity is implicit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _close(up: list[int]) -> list[int]:
    # Warshall on bitmask rows
    up = list(up)
    for k in range(len(up)):
        bit = 1 << k
        row = up[k]
        for i in range(len(up)):
            if up[i] & bit:
                up[i] |= row
    return up


@dataclass(frozen=True)
class Poset:
    size: int
    up: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.up) != self.size:
            raise ValueError("up-set table length must equal size")
        full = (1 << self.size) - 1
        for i, row in enumerate(self.up):
            if row & ~full:
                raise ValueError(f"element {i} relates to an element out of range")
            if row >> i & 1:
                raise ValueError(f"relation is not irreflexive at element {i}")

    @classmethod
    def from_relations(cls, size: int, pairs, labels=None) -> "Poset":
        """Build a poset from ``(a, b)`` pairs meaning ``a < b``; the transitive
        closure is taken.  Raises ``ValueError`` if the pairs contain a cycle."""
        up = [0] * size
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"relation {a}<{b} out of range for size {size}")
            up[a] |= 1 << b
        up = _close(up)
        for i, row in enumerate(up):
            if row >> i & 1:
                raise ValueError("relations contain a cycle")
        return cls(size, tuple(up), tuple(labels) if labels is not None else None)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * self.size
        for i, row in enumerate(self.up):
            for j in _bits(row):
                down[j] |= 1 << i
        return tuple(down)

    def less(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def leq(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b)

    def relations(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.size) for j in _bits(self.up[i])]

    @property
    def num_relations(self) -> int:
        return sum(row.bit_count() for row in self.up)

    def covers(self) -> list[tuple[int, int]]:
        """Cover pairs ``(a, b)``: ``a < b`` with nothing strictly between."""
        out = []
        for a in range(self.size):
            for b in _bits(self.up[a]):
                if not self.up[a] & self.down[b]:
                    out.append((a, b))
        return out

    def comparability_degree(self, i: int) -> int:
        return self.up[i].bit_count() + self.down[i].bit_count()

    def dual(self) -> "Poset":
        return Poset(self.size, self.down, self.labels)

    def is_closed(self) -> bool:
        return list(self.up) == _close(list(self.up))


# -- constructors -----------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..v-1``."""

    v: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            if not (0 <= a < b < self.v):
                raise ValueError(f"edge {a}-{b} must satisfy 0 <= a < b < v")

    @classmethod
    def from_edges(cls, v: int, edges) -> "Graph":
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            norm.add((min(a, b), max(a, b)))
        return cls(v, frozenset(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> list[int]:
        adj = [0] * self.v
        for a, b in self.edges:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return adj

    def literal(self) -> str:
        return f"v={self.v};e=" + ",".join(f"{a}-{b}" for a, b in self.sorted_edges())


def cycle_graph(k: int) -> Graph:
    if k < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, combinations(range(k), 2))


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


_GRAPH_RE = re.compile(r"^v=(\d+);e=(\d+-\d+(?:,\d+-\d+)*)?$")


def parse_graph(text: str) -> Graph:
    """Parse ``v=<n>;e=a-b,c-d`` (0-based vertices; the edge list may be empty)."""
    m = _GRAPH_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise ValueError(f"bad graph literal {text!r}")
    v = int(m.group(1))
    edges = []
    if m.group(2):
        for tok in m.group(2).split(","):
            a, b = tok.split("-")
            edges.append((int(a), int(b)))
    return Graph.from_edges(v, edges)


def chain(k: int) -> Poset:
    return Poset.from_relations(k, combinations(range(k), 2))


def two_level(r: int, s: int) -> Poset:
    """``K_{r,s}``: bottoms ``0..r-1`` each below tops ``r..r+s-1``."""
    return Poset.from_relations(r + s, [(i, r + j) for i in range(r) for j in range(s)])


def baton(k: int, s: int, t: int) -> Poset:
    """A ``k``-chain whose bottom is replicated to ``s`` copies and top to ``t``."""
    if k < 3 or s < 1 or t < 1:
        raise ValueError("baton needs k >= 3 and s, t >= 1")
    bottoms = list(range(s))
    middle = list(range(s, s + k - 2))
    tops = list(range(s + k - 2, s + k - 2 + t))
    pairs = [(b, middle[0]) for b in bottoms]
    pairs += list(zip(middle, middle[1:]))
    pairs += [(middle[-1], t_) for t_ in tops]
    return Poset.from_relations(s + t + k - 2, pairs)


def kfork(k: int, r: int) -> Poset:
    """``_kV_r``: a chain ``A_1 < ... < A_k`` with ``r`` tops above ``A_k``."""
    if k < 1 or r < 1:
        raise ValueError("kfork needs k, r >= 1")
    pairs = [(i, i + 1) for i in range(k - 1)]
    pairs += [(k - 1, k + j) for j in range(r)]
    return Poset.from_relations(k + r, pairs)


def crown(length: int) -> Poset:
    """Height-two poset whose comparability graph is a cycle of ``length``."""
    if length < 4 or length % 2:
        raise ValueError("crown length must be even and at least 4")
    k = length // 2
    pairs = []
    for i in range(k):
        pairs += [(i, k + i), (i, k + (i + 1) % k)]
    return Poset.from_relations(length, pairs)


def boolean_lattice(m: int) -> Poset:
    p = 1 << m
    pairs = [(a, b) for a in range(p) for b in range(p) if a != b and a & b == a]
    return Poset.from_relations(p, pairs)


def poset_of_graph(g: Graph) -> Poset:
    """P(G): vertices ``0..v-1`` then one element per edge (sorted order),
    with ``vertex < edge`` whenever the edge is incident to the vertex."""
    pairs = []
    for idx, (a, b) in enumerate(g.sorted_edges()):
        pairs += [(a, g.v + idx), (b, g.v + idx)]
    labels = [f"v{i}" for i in range(g.v)] + [f"e{a}-{b}" for a, b in g.sorted_edges()]
    return Poset.from_relations(g.v + g.m, pairs, labels)


# -- the spec DSL -----------------------------------------------------------

_SPEC_RE = re.compile(r"^([a-z_]+)(?::(.*))?$")
_FIXED = {
    "butterfly": lambda: two_level(2, 2),
    "diamond": lambda: boolean_lattice(2),
    # A<B, C<B, C<D with A=0, C=1, B=2, D=3
    "nposet": lambda: Poset.from_relations(4, [(0, 2), (1, 2), (1, 3)], "ACBD"),
}
_ARITY = {
    "chain": 1, "fork": 1, "kfork": 2, "baton": 3, "krs": 2, "crown": 1, "boolean": 1,
}


def _int_args(name: str, text: str | None) -> list[int]:
    if text is None or text == "":
        raise ValueError(f"{name} needs integer parameters")
    try:
        args = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"bad parameters for {name}: {text!r}") from None
    if len(args) != _ARITY[name]:
        raise ValueError(f"{name} takes {_ARITY[name]} parameter(s), got {len(args)}")
    return args


def _tree_from_literal(text: str) -> Poset:
    m = _GRAPH_RE.match(text.strip().replace(" ", ""))
    if not m:
        raise ValueError(f"bad tree literal {text!r}")
    v = int(m.group(1))
    pairs = []
    for tok in (m.group(2) or "").split(","):
        if tok:
            a, b = map(int, tok.split("-"))
            if a == b or not (0 <= a < v and 0 <= b < v):
                raise ValueError(f"bad tree edge {tok}")
            pairs.append((a, b))
    p = Poset.from_relations(v, pairs)
    if not is_up_down_tree(p):
        raise ValueError("tree literal does not describe an up-down tree")
    return p


def parse_spec(spec: str) -> tuple[str, tuple[int, ...] | str]:
    """Split a spec into ``(name, params)``; graph-valued params stay text."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ValueError(f"cannot parse poset spec {spec!r}")
    name, rest = m.group(1), m.group(2)
    if name in ("pg", "tree"):
        if not rest:
            raise ValueError(f"{name} needs a graph literal")
        return name, rest
    if name in _FIXED:
        if rest:
            raise ValueError(f"{name} takes no parameters")
        return name, ()
    if name not in _ARITY:
        raise ValueError(f"unknown poset {name!r}")
    return name, tuple(_int_args(name, rest))


def build_poset(spec: str) -> Poset:
    """Build a poset from the DSL, e.g. ``chain:3``, ``baton:4,2,3``,
    ``crown:6``, ``pg:v=3;e=0-1,1-2,0-2``."""
    name, params = parse_spec(spec)
    if name == "pg":
        return poset_of_graph(parse_graph(params))
    if name == "tree":
        return _tree_from_literal(params)
    if name in _FIXED:
        return _FIXED[name]()
    if any(x < 0 for x in params):
        raise ValueError(f"{name} parameters must be nonnegative")
    if name == "chain":
        (k,) = params
        if k < 1:
            raise ValueError("chain needs k >= 1")
        return chain(k)
    if name == "fork":
        (r,) = params
        if r < 1:
            raise ValueError("fork needs r >= 1")
        return two_level(1, r)
    if name == "kfork":
        return kfork(*params)
    if name == "baton":
        return baton(*params)
    if name == "krs":
        r, s = params
        if r < 1 or s < 1:
            raise ValueError("krs needs r, s >= 1")
        return two_level(r, s)
    if name == "crown":
        return crown(params[0])
    if name == "boolean":
        (m,) = params
        if m > 6:
            raise ValueError("boolean:m is limited to m <= 6")
        return boolean_lattice(m)
    raise AssertionError(name)


def parse_covers(text: str) -> Poset:
    """Read the cover-relation format: one ``a<b`` per line."""
    pairs = []
    size = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = re.fullmatch(r"(\d+)\s*<\s*(\d+)", line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'a<b', got {line!r}")
        a, b = int(m.group(1)), int(m.group(2))
        pairs.append((a, b))
        size = max(size, a + 1, b + 1)
    return Poset.from_relations(size, pairs)


def format_covers(p: Poset) -> str:
    return "".join(f"{a}<{b}\n" for a, b in p.covers())


# -- structural queries -----------------------------------------------------


def height(p: Poset) -> int:
    """Cardinality of a longest chain (0 for the empty poset)."""
    depth = [0] * p.size
    order = sorted(range(p.size), key=lambda i: p.down[i].bit_count())
    # an element's strict down-set is strictly larger than any of its lower elements'
    for i in order:
        best = 0
        for j in _bits(p.down[i]):
            best = max(best, depth[j])
        depth[i] = best + 1
    return max(depth, default=0)


def is_up_down_tree(p: Poset) -> bool:
    if p.size == 0 or height(p) > 2:
        return False
    # height <= 2: comparability graph has one edge per relation
    if p.num_relations != p.size - 1:
        return False
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for i in _bits(frontier):
            nxt |= p.up[i] | p.down[i]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << p.size) - 1


# -- embedding search -------------------------------------------------------


def _search_order(pattern: Poset, first: int | None = None) -> list[int]:
    """Pattern elements, highest comparability degree first, preferring
    elements tied to already-placed ones so constraints bite early."""
    deg = [pattern.comparability_degree(i) for i in range(pattern.size)]
    nbr = [pattern.up[i] | pattern.down[i] for i in range(pattern.size)]
    remaining = set(range(pattern.size))
    order: list[int] = []
    placed = 0
    while remaining:
        if first is not None and not order:
            nxt = first
        else:
            nxt = max(remaining, key=lambda i: ((nbr[i] & placed).bit_count(), deg[i], -i))
        order.append(nxt)
        remaining.discard(nxt)
        placed |= 1 << nxt
    return order


def embed(host_up, host_down, pattern: Poset, allowed: int, order=None, fixed=None,
          counts=None):
    """Backtracking embedding of ``pattern`` into a host given by up/down bitmask
    tables, using only host elements in ``allowed``.

    ``fixed`` optionally pins one pattern element: ``(u, h)``.  ``counts`` is an
    optional ``(up_count, down_count)`` table for the host used as a dominance
    filter.  Returns a list ``f`` (pattern index -> host index) or ``None``.
    """
    if order is None:
        order = _search_order(pattern, fixed[0] if fixed else None)
    size = pattern.size
    f = [-1] * size
    pup, pdown = pattern.up, pattern.down
    need = [(pup[u].bit_count(), pdown[u].bit_count()) for u in range(size)]

    def cands(u: int, used: int) -> int:
        c = allowed & ~used
        for v in _bits(pdown[u]):
            if f[v] >= 0:
                c &= host_up[f[v]]
        for v in _bits(pup[u]):
            if f[v] >= 0:
                c &= host_down[f[v]]
        return c

    def ok_counts(u: int, h: int) -> bool:
        if counts is None:
            return True
        nu, nd = need[u]
        return counts[0][h] >= nu and counts[1][h] >= nd

    def rec(pos: int, used: int) -> bool:
        if pos == size:
            return True
        u = order[pos]
        for h in _bits(cands(u, used)):
            if not ok_counts(u, h):
                continue
            f[u] = h
            if rec(pos + 1, used | 1 << h):
                return True
        f[u] = -1
        return False

    start = 0
    used = 0
    if fixed is not None:
        u, h = fixed
        if not (allowed >> h & 1) or not ok_counts(u, h):
            return None
        if order[0] != u:
            raise ValueError("fixed element must come first in the search order")
        f[u] = h
        used = 1 << h
        start = 1
    if rec(start, used):
        return f
    return None


def contains_subposet(host: Poset, pattern: Poset) -> dict[int, int] | None:
    """Find an injective map ``f`` with ``u < v`` in ``pattern`` implying
    ``f(u) < f(v)`` in ``host``.  Extra comparabilities in the host are allowed."""
    if pattern.size == 0:
        return {}
    if pattern.size > host.size or height(pattern) > height(host):
        return None
    counts = (
        [host.up[h].bit_count() for h in range(host.size)],
        [host.down[h].bit_count() for h in range(host.size)],
    )
    f = embed(host.up, host.down, pattern, (1 << host.size) - 1, counts=counts)
    if f is None:
        return None
    return dict(enumerate(f))


def is_embedding(host: Poset, pattern: Poset, f) -> bool:
    f = dict(f) if not isinstance(f, dict) else f
    if len(set(f.values())) != pattern.size or set(f) != set(range(pattern.size)):
        return False
    return all(host.less(f[a], f[b]) for a, b in pattern.relations())


def is_isomorphic(p: Poset, q: Poset) -> bool:
    """An injective order-preserving map between posets of equal size and equal
    relation count is a bijection on relations, hence an isomorphism."""
    if p.size != q.size or p.num_relations != q.num_relations:
        return False
    return contains_subposet(p, q) is not None
