"""Exact La(n, H) by branch and bound, plus middle-level constructions."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .family import SetFamily, contains_pattern
from .poset import Poset, _bits, _search_order, embed, is_isomorphic

# 2^n candidate sets are materialized, so exact search is capped well below 64
MAX_EXACT_N = 8
CHECK_EVERY = 4096


@dataclass(frozen=True)
class LaResult:
    n: int
    value: int
    witness: SetFamily
    status: str  # "exact" | "lower-bound"
    nodes: int
    elapsed: float

    @property
    def exact(self) -> bool:
        return self.status == "exact"


class _OutOfBudget(Exception):
    pass


def canonical_order(n: int) -> list[int]:
    """All subsets of [n], nearest the middle level first, then by size, then value."""
    return sorted(range(1 << n), key=lambda m: (abs(m.bit_count() - n / 2), m.bit_count(), m))


class _BooleanHost:
    """Up/down bitmask tables for B_n, indexed by the subset mask itself."""

    def __init__(self, n: int):
        full = (1 << n) - 1
        size = 1 << n
        up = [0] * size
        down = [0] * size
        for a in range(size):
            rest = full & ~a
            # enumerate proper supersets of a via submasks of its complement
            sub = rest
            while sub:
                b = a | sub
                up[a] |= 1 << b
                down[b] |= 1 << a
                sub = (sub - 1) & rest
        self.up = up
        self.down = down
        self.counts = ([row.bit_count() for row in up], [row.bit_count() for row in down])


def la_exact(n: int, pattern: Poset, max_nodes: int | None = None,
             max_seconds: float | None = None, symmetry: bool = False) -> LaResult:
    """Largest ``pattern``-free family in ``2^[n]``.

    Depth-first include/exclude branching over subsets in ``canonical_order``.
    A branch is cut when its size plus all undecided sets cannot beat the
    incumbent.  Including a set ``S`` only tests embeddings that map some
    pattern element onto ``S``; every other embedding was already excluded.

    With ``symmetry=True`` (only valid for self-dual patterns) families that
    drop the first set but keep its complement are skipped, since the
    complement family is then an equally large solution that does not.
    """
    if not 1 <= n <= MAX_EXACT_N:
        raise ValueError(f"la_exact supports 1 <= n <= {MAX_EXACT_N}")
    if pattern.size == 0:
        raise ValueError("pattern poset must be nonempty")
    if symmetry and not is_isomorphic(pattern, pattern.dual()):
        raise ValueError("complement symmetry needs a self-dual pattern")

    start = time.perf_counter()
    host = _BooleanHost(n)
    order = canonical_order(n)
    total = len(order)
    orders = [_search_order(pattern, u) for u in range(pattern.size)]
    full = (1 << n) - 1
    sym_first = order[0]
    sym_partner = full & ~sym_first

    def creates_copy(s: int, cur: int) -> bool:
        allowed = cur | 1 << s
        for u in range(pattern.size):
            if embed(host.up, host.down, pattern, allowed, orders[u], (u, s), host.counts):
                return True
        return False

    best = -1
    best_fam = 0
    nodes = 0

    def rec(i: int, cur: int, size: int, first_in: bool) -> None:
        nonlocal best, best_fam, nodes
        nodes += 1
        if nodes % CHECK_EVERY == 0:
            if max_nodes is not None and nodes >= max_nodes:
                raise _OutOfBudget
            if max_seconds is not None and time.perf_counter() - start > max_seconds:
                raise _OutOfBudget
        if size + (total - i) <= best:
            return
        if i == total:
            best, best_fam = size, cur
            return
        s = order[i]
        blocked = symmetry and s == sym_partner and i > 0 and not first_in
        if not blocked and not creates_copy(s, cur):
            rec(i + 1, cur | 1 << s, size + 1, first_in or (i == 0))
        rec(i + 1, cur, size, first_in)

    status = "exact"
    try:
        rec(0, 0, 0, False)
    except _OutOfBudget:
        status = "lower-bound"
    witness = SetFamily(n, tuple(_bits(best_fam)))
    return LaResult(n, len(witness), witness, status, nodes, time.perf_counter() - start)


def middle_level_range(n: int, m: int) -> range:
    """Sizes of the ``m`` levels nearest ``n/2``, ties resolved downward."""
    if not 1 <= m <= n + 1:
        raise ValueError(f"m must be in 1..{n + 1}")
    return range((n - m + 1) // 2, (n + m - 1) // 2 + 1)


def construct_middle_levels(n: int, m: int) -> SetFamily:
    return SetFamily.levels(n, middle_level_range(n, m))


def max_hfree_middle_levels(n: int, pattern: Poset) -> int:
    """Largest ``m`` for which the middle ``m`` levels of ``B_n`` avoid ``pattern``
    (0 if even the central level contains it)."""
    best = 0
    for m in range(1, n + 2):
        if contains_pattern(construct_middle_levels(n, m), pattern) is not None:
            break
        best = m
    return best
