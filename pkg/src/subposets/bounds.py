"""Closed-form bounds on La(n, H), evaluated with exact integers.

Asymptotic error terms are carried as text in ``dropped_terms``; they are
never given numeric values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .poset import Graph, parse_spec, parse_graph, _tree_from_literal, poset_of_graph
from .turan import chromatic_number


def central_binomial(n: int) -> int:
    return math.comb(n, n // 2)


def middle_sum(n: int, j: int) -> int:
    """Sum of the ``j`` middle binomial coefficients ``C(n, i)`` for
    ``floor((n-j+1)/2) <= i <= floor((n+j-1)/2)``."""
    if not 1 <= j <= n + 1:
        raise ValueError(f"j must be in 1..{n + 1}")
    return sum(math.comb(n, i) for i in range((n - j + 1) // 2, (n + j - 1) // 2 + 1))


@dataclass(frozen=True)
class BoundReport:
    bound: str
    n: int
    params: dict
    main_term: int
    correction_term: Fraction
    dropped_terms: str
    ratio_to_central: float
    relation: str = "<="  # how La(n, H) compares to the displayed quantity
    constant: float | None = None  # leading constant, for o(1)-type bounds
    notes: tuple[str, ...] = field(default=())

    @property
    def total(self) -> Fraction:
        return self.main_term + self.correction_term

    def to_json(self) -> dict:
        out = {
            "bound": self.bound,
            "n": self.n,
            "params": self.params,
            "main_term": str(self.main_term),
            "correction_term": {
                "num": str(self.correction_term.numerator),
                "den": str(self.correction_term.denominator),
            },
            "dropped": self.dropped_terms,
            "ratio": self.ratio_to_central,
            "relation": self.relation,
        }
        if self.constant is not None:
            out["constant"] = self.constant
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _ratio(total: Fraction, n: int) -> float:
    # int/int true division stays exact-then-rounded for huge operands
    t = Fraction(total)
    return t.numerator / (t.denominator * central_binomial(n))


def _report(bound, n, params, main, corr, dropped, relation="<=", **kw) -> BoundReport:
    corr = Fraction(corr)
    return BoundReport(bound, n, params, main, corr, dropped,
                       _ratio(main + corr, n), relation, **kw)


def thm1_upper(n: int, k: int, s: int, t: int) -> BoundReport:
    """Upper bound for batons ``P_k(s,t)``: ``k-1`` middle levels plus
    ``C(n, floor((n+k)/2)) * 2k(s+t-2)/n``."""
    if k < 3 or s < 1 or t < 1:
        raise ValueError("need k >= 3 and s, t >= 1")
    if n < k:
        raise ValueError("need n >= k")
    top = (n + k) // 2
    corr = Fraction(math.comb(n, top) * 2 * k * (s + t - 2), n)
    return _report("thm1", n, {"k": k, "s": s, "t": t}, middle_sum(n, k - 1), corr,
                   f"O(n^(-3/2) sqrt(ln n)) * C(n,{top})")


def z_of(n: int, k: int) -> int:
    return k * k // 2 if (n + k) % 2 == 0 else (k - 1) ** 2 // 2


def dk_bounds(n: int, k: int, r: int) -> tuple[BoundReport, BoundReport]:
    """Known lower and upper bounds for the ``r``-fork with a ``k``-shaft, ``P_k(1,r)``."""
    if k < 3 or r < 1:
        raise ValueError("need k >= 3 and r >= 1")
    if n < 1:
        raise ValueError("need n >= 1")
    top = (n + k + 1) // 2
    b = math.comb(n, top)
    main = middle_sum(n, k - 1)
    params = {"k": k, "r": r}
    dropped = f"Omega(1/n^2) * C(n,{top})"
    lower = _report("dk_lower", n, params, main, Fraction(b * (r - 1), n), dropped, ">=")
    z = z_of(n, k)
    upper = _report("dk_upper", n, dict(params, z=z), main,
                    Fraction(b * (z + 2 * (r - 1)), n), dropped, "<=")
    return lower, upper


def eq4_lower(n: int, k: int, s: int, t: int) -> BoundReport:
    """Lower bound for batons from the fork bound with ``r = max(s, t)``.
    The correction binomial is ``C(n, floor((n+k)/2))`` as printed for this
    inequality (the fork bound itself uses ``floor((n+k+1)/2)``)."""
    if k < 3 or s < 1 or t < 1:
        raise ValueError("need k >= 3 and s, t >= 1")
    top = (n + k) // 2
    corr = Fraction(math.comb(n, top) * (max(s, t) - 1), n)
    return _report("eq4_lower", n, {"k": k, "s": s, "t": t}, middle_sum(n, k - 1), corr,
                   f"Omega(1/n^2) * C(n,{top})", ">=")


def tree_upper(n: int, t: int) -> BoundReport:
    """Up-down tree of order ``t``: ``(1 + 16t/n) C(n, n/2)``."""
    if t < 1 or n < 2:
        raise ValueError("need t >= 1 and n >= 2")
    c = central_binomial(n)
    return _report(
        "tree", n, {"t": t}, c, Fraction(16 * t * c, n),
        "O(1/(n sqrt(n ln n))) * C(n,floor(n/2)); the proof's eps has 2t/n where the "
        "statement has 16t/n",
        notes=("the proof's choice eps = 2t/n + 16t/(n sqrt(n ln n)) differs from "
               "the stated 16t/n; the stated form is evaluated",),
    )


def crown_bounds(n: int, length: int) -> BoundReport:
    """Leading constant for La(n, crown of ``length``).

    ``length % 4 == 0`` (``>= 8``): constant 1, asymptotic equality.
    ``length % 4 == 2`` (``>= 6``): constant ``1 + sqrt(2)/2``, upper bound only.
    ``length == 4`` is the butterfly: constant 2, asymptotic equality.
    """
    if length % 2 or length < 4:
        raise ValueError("crown length must be even and >= 4")
    c = central_binomial(n)
    params = {"length": length}
    dropped = "o_n(1) * C(n,floor(n/2))"
    if length == 4:
        return _report("crown", n, params, 2 * c, 0, dropped, "=", constant=2.0,
                       notes=("crown:4 is the butterfly",))
    if length % 4 == 0:
        return _report("crown", n, params, c, 0, dropped, "=", constant=1.0)
    const = 1 + math.sqrt(2) / 2
    return BoundReport("crown", n, params, c, Fraction(0), dropped, const, "<=",
                       constant=const, notes=("main_term is the central binomial; "
                                              "ratio is the irrational leading constant",))


def pg_constant(chi: int) -> float:
    if chi < 2:
        raise ValueError("a nonempty graph has chromatic number >= 2")
    return 1 + math.sqrt(1 - 1 / (chi - 1))


def pg_upper(n: int, g: Graph) -> BoundReport:
    """``La(n, P(G)) <= (1 + sqrt(1 - 1/(chi(G)-1)) + o(1)) C(n, n/2)``;
    equality with constant 1 when ``G`` is bipartite."""
    if g.m < 1:
        raise ValueError("graph must have at least one edge")
    chi = chromatic_number(g)
    const = pg_constant(chi)
    c = central_binomial(n)
    params = {"graph": g.literal(), "chi": chi}
    dropped = "o_n(1) * C(n,floor(n/2))"
    if chi == 2:
        return _report("pg", n, params, c, 0, dropped, "=", constant=1.0)
    return BoundReport("pg", n, params, c, Fraction(0), dropped, const, "<=", constant=const)


@dataclass(frozen=True)
class TailCheck:
    n: int
    cutoff: int  # smallest i counted in the tail
    tail: int
    threshold: Fraction
    holds: bool


def lemma1_tail(n: int) -> TailCheck:
    """Exact ``sum_{i > n/2 + 2 sqrt(n ln n)} C(n, i)`` against ``2^n / n^2``.
    The lower tail is the same number by ``C(n,i) = C(n,n-i)``."""
    if n < 2:
        raise ValueError("need n >= 2")
    edge = n / 2 + 2 * math.sqrt(n * math.log(n))
    cutoff = math.floor(edge) + 1
    tail = sum(math.comb(n, i) for i in range(cutoff, n + 1))
    threshold = Fraction(2 ** n, n * n)
    return TailCheck(n, cutoff, tail, threshold, tail * n * n < 2 ** n)


def lower_tail(n: int) -> int:
    edge = n / 2 - 2 * math.sqrt(n * math.log(n))
    top = math.ceil(edge) - 1
    return sum(math.comb(n, i) for i in range(0, top + 1)) if top >= 0 else 0


def central_binomial_approx(n: int) -> float:
    """Stirling estimate ``sqrt(2/(pi n)) 2^n`` of ``C(n, floor(n/2))``."""
    if n < 1:
        raise ValueError("need n >= 1")
    return math.ldexp(math.sqrt(2 / (math.pi * n)), n)


def central_binomial_relerr(n: int) -> float:
    """``approx/exact - 1``, computed in log space so it works for any n."""
    log_approx = 0.5 * math.log(2 / (math.pi * n)) + n * math.log(2)
    return math.expm1(log_approx - math.log(central_binomial(n)))


@dataclass(frozen=True)
class PiEntry:
    name: str
    value: Fraction | tuple[float, float] | None  # exact, interval, or unknown
    source: str

    @property
    def kind(self) -> str:
        if self.value is None:
            return "unknown"
        return "interval" if isinstance(self.value, tuple) else "exact"

    def to_json(self) -> dict:
        if self.value is None:
            v = None
        elif isinstance(self.value, tuple):
            v = list(self.value)
        else:
            v = str(self.value)
        return {"name": self.name, "kind": self.kind, "value": v, "source": self.source}


def pi_known(spec: str) -> PiEntry:
    """Known value of ``lim La(n,H)/C(n,n/2)`` for catalogued posets."""
    name, params = parse_spec(spec)
    F = Fraction
    table = "known value"
    if name == "chain":
        return PiEntry(spec, F(params[0] - 1), f"{table}: chain")
    if name == "butterfly" or (name == "crown" and params[0] == 4):
        return PiEntry(spec, F(2), f"{table}: butterfly")
    if name == "krs":
        r, s = params
        if r >= 2 and s >= 2:
            return PiEntry(spec, F(2), f"{table}: K_rs")
        return PiEntry(spec, F(1), f"{table}: V_r (K_1s is an r-fork)")
    if name == "nposet":
        return PiEntry(spec, F(1), f"{table}: N")
    if name == "fork":
        return PiEntry(spec, F(1), f"{table}: V_r")
    if name == "kfork":
        return PiEntry(spec, F(params[0]), f"{table}: kV_r")
    if name == "diamond" or (name == "boolean" and params[0] == 2):
        return PiEntry(spec, (2.0, 3.0), "open problem: diamond in [2,3]")
    if name == "boolean" and params[0] <= 1:
        return PiEntry(spec, F(params[0]), "chain")
    if name == "crown":
        length = params[0]
        if length >= 8 and length % 4 == 0:
            return PiEntry(spec, F(1), "crown theorem: O_4k")
        if length >= 6 and length % 4 == 2:
            return PiEntry(spec, (1.0, 1 + math.sqrt(2) / 2), "crown theorem: O_(4k-2) upper bound")
    if name == "baton":
        return PiEntry(spec, F(params[0] - 1), "baton theorem")
    if name == "tree":
        _tree_from_literal(params)
        return PiEntry(spec, F(1), "up-down tree theorem")
    if name == "pg":
        g = parse_graph(params)
        if g.m >= 1 and chromatic_number(g) == 2:
            return PiEntry(spec, F(1), "graph poset theorem: bipartite G")
        if g.m >= 1:
            return PiEntry(spec, (1.0, pg_constant(chromatic_number(g))),
                           "graph poset theorem: upper bound")
    return PiEntry(spec, None, "unknown")
