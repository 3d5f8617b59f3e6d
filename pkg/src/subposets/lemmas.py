"""Exact checks of the correlation and binomial-moment inequalities on finite
integer distributions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class IntDistribution:
    support: tuple[int, ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probabilities differ in length")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be sorted and duplicate-free")
        if any(x < 0 for x in self.support):
            raise ValueError("support must be nonnegative")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if sum(self.probs, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")

    @classmethod
    def from_weights(cls, weights: dict[int, int]) -> "IntDistribution":
        """Normalize nonnegative integer weights keyed by value."""
        items = sorted((x, w) for x, w in weights.items() if w)
        total = sum(w for _, w in items)
        return cls(tuple(x for x, _ in items), tuple(Fraction(w, total) for _, w in items))

    @classmethod
    def constant(cls, c: int) -> "IntDistribution":
        return cls((c,), (Fraction(1),))

    def expect(self, fn) -> Fraction:
        return sum((p * fn(x) for x, p in zip(self.support, self.probs)), Fraction(0))

    @property
    def mean(self) -> Fraction:
        return self.expect(lambda x: x)


@dataclass(frozen=True)
class MonotoneFn:
    """Nondecreasing function tabulated on ``0..len(values)-1``."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        for i in range(len(vals) - 1):
            if vals[i + 1] < vals[i]:
                raise ValueError(f"not nondecreasing at {i}")

    def __call__(self, x: int) -> Fraction:
        return self.values[x]

    def increments(self) -> list[Fraction]:
        return [self.values[k] - self.values[k - 1] for k in range(1, len(self.values))]


def step(k: int):
    """``h_k(x) = 1 if x >= k else 0``."""
    return lambda x: 1 if x >= k else 0


def step_decomposition(f: MonotoneFn):
    """Rebuild ``f`` as ``f(0) + sum_k (f(k) - f(k-1)) h_k``."""
    incs = f.increments()
    base = f.values[0]
    return lambda x: base + sum((d for k, d in enumerate(incs, 1) if x >= k), Fraction(0))


@dataclass(frozen=True)
class Check:
    lhs: Fraction
    rhs: Fraction
    holds: bool
    applicable: bool = True


def _covers(dist: IntDistribution, f: MonotoneFn, label: str) -> None:
    if dist.support[-1] >= len(f.values):
        raise ValueError(f"{label} is not tabulated up to {dist.support[-1]}")


def fkg_check(dist: IntDistribution, f: MonotoneFn, g: MonotoneFn) -> Check:
    """``E[f(X) g(X)] >= E[f(X)] E[g(X)]`` for nondecreasing ``f``, ``g``."""
    _covers(dist, f, "f")
    _covers(dist, g, "g")
    lhs = dist.expect(lambda x: f(x) * g(x))
    rhs = dist.expect(f) * dist.expect(g)
    return Check(lhs, rhs, lhs >= rhs)


def _falling_product(e: Fraction, k: int, r: int) -> Fraction:
    out = Fraction(1)
    for i in range(k - r):  # i = 0 .. k-r-1
        out *= e - r - i
    return out


def lemma3_check(dist: IntDistribution, k: int, r: int) -> Check:
    """When ``E(X) > k-1``:
    ``E C(X,k) >= E C(X,r) * r!/k! * prod_{i=0}^{k-r-1} (E(X) - r - i)``.

    The product stops at ``k-r-1``; with that range ``C(x,r) * r!/k! * prod``
    equals ``C(x,k)`` identically, while one more factor would not.
    """
    if not k > r >= 1:
        raise ValueError("need k > r >= 1")
    e = dist.mean
    lhs = dist.expect(lambda x: math.comb(x, k))
    rhs = (dist.expect(lambda x: math.comb(x, r))
           * Fraction(math.factorial(r), math.factorial(k)) * _falling_product(e, k, r))
    if e <= k - 1:
        return Check(lhs, rhs, True, applicable=False)
    return Check(lhs, rhs, lhs >= rhs)


def variance_bound_check(dist: IntDistribution) -> Check:
    """``E C(X,2) >= E(X)(E(X)-1)/2``."""
    e = dist.mean
    lhs = dist.expect(lambda x: math.comb(x, 2))
    rhs = e * (e - 1) / 2
    return Check(lhs, rhs, lhs >= rhs)


# -- seeded random suites ---------------------------------------------------


def random_distribution(rng: random.Random, max_value: int = 12, min_value: int = 0,
                        max_weight: int = 20) -> IntDistribution:
    size = rng.randint(1, max_value - min_value + 1)
    support = rng.sample(range(min_value, max_value + 1), size)
    return IntDistribution.from_weights({x: rng.randint(1, max_weight) for x in support})


def random_monotone(rng: random.Random, length: int, max_step: int = 5) -> MonotoneFn:
    """Prefix sums of nonnegative random rational increments."""
    vals = [Fraction(rng.randint(-max_step, max_step), rng.randint(1, 4))]
    for _ in range(length - 1):
        inc = Fraction(rng.randint(0, max_step), rng.randint(1, 4)) if rng.random() < 0.7 else 0
        vals.append(vals[-1] + inc)
    return MonotoneFn(tuple(vals))


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    applicable: int
    violations: int

    def to_json(self) -> dict:
        return {"suite": self.name, "trials": self.trials,
                "applicable": self.applicable, "violations": self.violations}


def run_fkg_suite(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        dist = random_distribution(rng)
        top = dist.support[-1] + 1
        if not fkg_check(dist, random_monotone(rng, top), random_monotone(rng, top)).holds:
            bad += 1
    return SuiteResult("fkg", trials, trials, bad)


LEMMA3_PAIRS = ((2, 1), (3, 1), (3, 2), (5, 2))


def run_lemma3_suite(seed: int, trials: int, k: int, r: int) -> SuiteResult:
    """``trials`` random distributions with ``E(X) > k-1`` (resampled until so)."""
    rng = random.Random(seed * 1_000_003 + k * 101 + r)
    bad = 0
    for _ in range(trials):
        while True:
            dist = random_distribution(rng, max_value=3 * k + 2)
            if dist.mean > k - 1:
                break
        if not lemma3_check(dist, k, r).holds:
            bad += 1
    return SuiteResult(f"lemma3(k={k},r={r})", trials, trials, bad)


def run_variance_suite(seed: int, trials: int) -> SuiteResult:
    rng = random.Random(seed + 7)
    bad = 0
    for _ in range(trials):
        if not variance_bound_check(random_distribution(rng)).holds:
            bad += 1
    return SuiteResult("variance", trials, trials, bad)
