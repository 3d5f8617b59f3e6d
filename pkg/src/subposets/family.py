"""Families of subsets of [n] as bitmasks, and chain statistics over them.

Element ``i`` of the ground set ``[n] = {1..n}`` is bit ``i - 1``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .poset import Poset, embed

MAX_N = 64
# Monte Carlo draws are grouped into fixed blocks, each with its own substream
BLOCK = 4096


def _popcount_key(mask: int) -> tuple[int, int]:
    return (mask.bit_count(), mask)


@dataclass(frozen=True)
class SetFamily:
    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"ground set size must be in 1..{MAX_N}")
        full = (1 << self.n) - 1
        for m in self.members:
            if m < 0 or m & ~full:
                raise ValueError(f"mask {m:#x} does not fit in {self.n} bits")
        canon = tuple(sorted(set(self.members), key=_popcount_key))
        if canon != self.members:
            object.__setattr__(self, "members", canon)

    @classmethod
    def from_sets(cls, n: int, sets) -> "SetFamily":
        """Build from iterables of 1-based elements."""
        masks = []
        for s in sets:
            mask = 0
            for e in s:
                if not 1 <= e <= n:
                    raise ValueError(f"element {e} not in [1, {n}]")
                mask |= 1 << (e - 1)
            masks.append(mask)
        return cls(n, tuple(masks))

    @classmethod
    def levels(cls, n: int, sizes) -> "SetFamily":
        masks = []
        for k in sizes:
            for combo in combinations(range(n), k):
                masks.append(sum(1 << i for i in combo))
        return cls(n, tuple(masks))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self._member_set

    @property
    def _member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    def as_sets(self) -> list[list[int]]:
        return [[i + 1 for i in range(self.n) if m >> i & 1] for m in self.members]

    def relabel(self, perm) -> "SetFamily":
        """Apply a permutation of ground indices (0-based list ``perm``)."""
        out = []
        for m in self.members:
            out.append(sum(1 << perm[i] for i in range(self.n) if m >> i & 1))
        return SetFamily(self.n, tuple(out))

    def containment_poset(self) -> Poset:
        """The poset ``(F, strict subset)`` indexed like ``members``."""
        ms = self.members
        up = []
        for i, a in enumerate(ms):
            row = 0
            for j, b in enumerate(ms):
                if a != b and a & b == a:
                    row |= 1 << j
            up.append(row)
        return Poset(len(ms), tuple(up))


# -- file format ------------------------------------------------------------


def parse_family(text: str) -> SetFamily:
    """Line format: ``n=<int>`` header, then ``1,3,4`` / ``empty`` / ``0x1a``
    per member; ``#`` starts a comment line."""
    n = None
    masks = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            if not line.startswith("n="):
                raise ValueError(f"line {lineno}: expected header 'n=<int>'")
            n = int(line[2:])
            if not 1 <= n <= MAX_N:
                raise ValueError(f"n={n} outside 1..{MAX_N}")
            continue
        if line == "empty":
            masks.append(0)
        elif line.lower().startswith("0x"):
            masks.append(int(line, 16))
        else:
            mask = 0
            for tok in line.split(","):
                e = int(tok)
                if not 1 <= e <= n:
                    raise ValueError(f"line {lineno}: element {e} not in [1, {n}]")
                mask |= 1 << (e - 1)
            masks.append(mask)
    if n is None:
        raise ValueError("missing 'n=<int>' header")
    return SetFamily(n, tuple(masks))


def format_family(fam: SetFamily) -> str:
    lines = [f"n={fam.n}"]
    for s in fam.as_sets():
        lines.append(",".join(map(str, s)) if s else "empty")
    return "\n".join(lines) + "\n"


def read_family(path) -> SetFamily:
    with open(path) as fh:
        return parse_family(fh.read())


# -- chain statistics -------------------------------------------------------


@lru_cache(maxsize=None)
def _fact(k: int) -> int:
    return math.factorial(k)


def lubell_mass(fam: SetFamily) -> Fraction:
    return sum((Fraction(1, math.comb(fam.n, m.bit_count())) for m in fam.members),
               Fraction(0))


def chain_moment(fam: SetFamily, k: int) -> Fraction:
    """Exact ``E[C(X, k)]`` where ``X = |F ∩ C|`` for a uniform maximal chain ``C``.

    Each ``k``-chain ``F_1 < ... < F_k`` contributes
    ``|F_1|! (|F_2|-|F_1|)! ... (n-|F_k|)! / n!``.  The sum runs as a DP over
    chains ending at each member, in integers.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = fam.n
    ms = fam.members
    sizes = [m.bit_count() for m in ms]
    # weight[i] = sum over j-chains ending at ms[i] of the factorial product so far
    weight = [_fact(s) for s in sizes]
    for _ in range(k - 1):
        nxt = [0] * len(ms)
        for i, b in enumerate(ms):
            acc = 0
            for j in range(i):
                a = ms[j]
                if sizes[j] < sizes[i] and a & b == a and weight[j]:
                    acc += weight[j] * _fact(sizes[i] - sizes[j])
            nxt[i] = acc
        weight = nxt
    total = sum(w * _fact(n - s) for w, s in zip(weight, sizes))
    return Fraction(total, _fact(n))


@dataclass(frozen=True)
class ChainStats:
    k: int
    exact: Fraction | None
    estimate: float
    stderr: float
    samples: int


def _block_counts(n: int, members: np.ndarray, seed: int, block: int, size: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    perms = rng.permuted(np.tile(np.arange(n, dtype=np.uint64), (size, 1)), axis=1)
    bits = np.left_shift(np.uint64(1), perms)
    prefix = np.bitwise_or.accumulate(bits, axis=1)
    chain = np.concatenate([np.zeros((size, 1), dtype=np.uint64), prefix], axis=1)
    return np.isin(chain, members).sum(axis=1)


def sample_chain_stats(fam: SetFamily, k: int, samples: int, seed: int,
                       workers: int = 1, exact: bool = True) -> ChainStats:
    """Monte Carlo estimate of ``E[C(X, k)]`` from uniformly random permutations.

    Draws are split into blocks of ``BLOCK`` samples; block ``b`` uses the
    substream ``SeedSequence(seed, spawn_key=(b,))``, so the result depends
    only on ``(seed, samples)`` and not on ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    members = np.array(fam.members, dtype=np.uint64)
    sizes = [(b, min(BLOCK, samples - b * BLOCK)) for b in range((samples + BLOCK - 1) // BLOCK)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda bs: _block_counts(fam.n, members, seed, *bs), sizes))
    else:
        parts = [_block_counts(fam.n, members, seed, b, s) for b, s in sizes]
    xs = np.concatenate(parts)
    table = np.array([math.comb(x, k) for x in range(fam.n + 2)], dtype=float)
    vals = table[xs]
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return ChainStats(k, chain_moment(fam, k) if exact else None, est, se, samples)


# -- containment and trimming -----------------------------------------------


def contains_pattern(fam: SetFamily, pattern: Poset) -> dict[int, int] | None:
    """Embed ``pattern`` into ``(F, subset)``; returns pattern element -> member mask."""
    if pattern.size == 0:
        return {}
    if pattern.size > len(fam):
        return None
    host = fam.containment_poset()
    counts = (
        [row.bit_count() for row in host.up],
        [row.bit_count() for row in host.down],
    )
    f = embed(host.up, host.down, pattern, (1 << host.size) - 1, counts=counts)
    if f is None:
        return None
    return {u: fam.members[h] for u, h in enumerate(f)}


def band_radius(n: int) -> float:
    return 2.0 * math.sqrt(n * math.log(n))


def in_middle_band(n: int, size: int) -> bool:
    r = band_radius(n)
    return n / 2 - r < size < n / 2 + r


def trim_middle_band(fam: SetFamily) -> SetFamily:
    """Keep members with ``n/2 - 2 sqrt(n ln n) < |F| < n/2 + 2 sqrt(n ln n)``."""
    if fam.n < 2:
        raise ValueError("trimming needs n >= 2")
    keep = tuple(m for m in fam.members if in_middle_band(fam.n, m.bit_count()))
    return SetFamily(fam.n, keep)
