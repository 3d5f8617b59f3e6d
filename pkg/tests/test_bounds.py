import math
from fractions import Fraction

import mpmath
import pytest

from subposets import bounds
from subposets.poset import complete_graph, cycle_graph, parse_graph, path_graph


def test_middle_sum_examples():
    assert bounds.middle_sum(4, 2) == math.comb(4, 1) + math.comb(4, 2) == 10
    assert bounds.middle_sum(6, 1) == math.comb(6, 3) == 20
    for n in range(0, 65):
        assert bounds.middle_sum(n, n + 1) == 2 ** n
    with pytest.raises(ValueError):
        bounds.middle_sum(4, 0)
    with pytest.raises(ValueError):
        bounds.middle_sum(4, 6)


def test_thm1_plugin():
    r = bounds.thm1_upper(100, 3, 2, 2)
    assert r.main_term == math.comb(100, 49) + math.comb(100, 50)
    assert r.correction_term == Fraction(12, 100) * math.comb(100, 51)
    assert "O(n^(-3/2) sqrt(ln n))" in r.dropped_terms
    assert r.relation == "<="


@pytest.mark.parametrize("n,k", [(10, 3), (57, 4), (200, 6)])
def test_thm1_chain_batons_have_no_correction(n, k):
    assert bounds.thm1_upper(n, k, 1, 1).correction_term == 0


@pytest.mark.parametrize("k,s,t", [(3, 2, 2), (4, 1, 3), (5, 3, 3)])
def test_thm1_ratio_near_k_minus_1(k, s, t):
    r = bounds.thm1_upper(10_000, k, s, t)
    assert abs(r.ratio_to_central - (k - 1)) <= 0.01


def test_thm1_rejects_bad_params():
    for args in [(10, 2, 1, 1), (10, 3, 0, 1), (2, 3, 1, 1)]:
        with pytest.raises(ValueError):
            bounds.thm1_upper(*args)


def test_z_parity():
    assert bounds.z_of(5, 3) == 4  # n + k even: floor(9/2)
    assert bounds.z_of(4, 3) == 2  # n + k odd: floor(4/2)


def test_dk_bounds():
    lo, hi = bounds.dk_bounds(100, 3, 1)
    assert lo.correction_term == 0
    lo, hi = bounds.dk_bounds(101, 3, 4)
    b = math.comb(101, (101 + 3 + 1) // 2)
    assert lo.correction_term == Fraction(3 * b, 101)
    assert hi.correction_term == Fraction((4 + 6) * b, 101)
    assert lo.relation == ">=" and hi.relation == "<="
    assert "Omega(1/n^2)" in lo.dropped_terms and "Omega(1/n^2)" in hi.dropped_terms


@pytest.mark.parametrize("n", [100, 101, 250])
@pytest.mark.parametrize("k", [3, 4, 5])
def test_eq4_is_fork_lower_with_max(n, k):
    for s, t in [(1, 3), (4, 2), (2, 2)]:
        e4 = bounds.eq4_lower(n, k, s, t)
        lo, _ = bounds.dk_bounds(n, k, max(s, t))
        assert e4.main_term == lo.main_term
        # same coefficient; the printed binomial indices agree when n + k is even
        assert e4.correction_term * n / math.comb(n, (n + k) // 2) == max(s, t) - 1
        if (n + k) % 2 == 0:
            assert e4.correction_term == lo.correction_term


def test_eq4_below_thm1():
    for n in (100, 101, 150, 333):
        for k in range(3, 7):
            for s in range(1, 5):
                for t in range(1, 5):
                    assert bounds.eq4_lower(n, k, s, t).total <= bounds.thm1_upper(n, k, s, t).total


@pytest.mark.parametrize("n,t,factor", [(10_000, 5, Fraction(1008, 1000)), (100, 4, Fraction(164, 100))])
def test_tree_factor(n, t, factor):
    r = bounds.tree_upper(n, t)
    assert Fraction(r.total) / bounds.central_binomial(n) == factor
    assert "16t/n" in r.notes[0] and "16t/n" in r.dropped_terms


def test_tree_factor_tends_to_one():
    vals = [bounds.tree_upper(n, 3).ratio_to_central for n in (10, 100, 1000, 10_000)]
    assert vals == sorted(vals, reverse=True) and vals[-1] - 1 < 0.005


def test_crown_bounds():
    r8 = bounds.crown_bounds(50, 8)
    assert r8.constant == 1 and r8.relation == "="
    r12 = bounds.crown_bounds(50, 12)
    assert r12.constant == 1
    r6 = bounds.crown_bounds(50, 6)
    assert r6.relation == "<=" and abs(r6.constant - 1.7071067811865475) < 1e-12
    assert bounds.crown_bounds(50, 10).constant == r6.constant
    r4 = bounds.crown_bounds(50, 4)
    assert r4.constant == 2
    for bad in (3, 7, 2):
        with pytest.raises(ValueError):
            bounds.crown_bounds(50, bad)


def test_pg_constants():
    assert bounds.pg_upper(100, path_graph(4)).constant == 1
    assert bounds.pg_upper(100, cycle_graph(6)).relation == "="
    c5 = bounds.pg_upper(100, cycle_graph(5))
    assert abs(c5.constant - (1 + math.sqrt(0.5))) <= 1e-12
    assert c5.constant == bounds.crown_bounds(100, 10).constant
    k4 = bounds.pg_upper(100, complete_graph(4))
    assert abs(k4.constant - 1.8164965809277260) <= 1e-12
    with pytest.raises(ValueError):
        bounds.pg_upper(100, parse_graph("v=3;e="))


def test_pg_constant_monotone_and_below_two():
    vals = [bounds.pg_constant(chi) for chi in range(2, 40)]
    assert vals == sorted(vals)
    assert all(1 <= v < 2 for v in vals)


def _tail_oracle(n):
    # cutoff from 50-digit arithmetic, independent of the float path
    with mpmath.workdps(50):
        edge = mpmath.mpf(n) / 2 + 2 * mpmath.sqrt(n * mpmath.log(n))
        lo = int(mpmath.floor(edge)) + 1
    return sum(math.comb(n, i) for i in range(lo, n + 1))


@pytest.mark.parametrize("n", [2, 4, 16, 64, 100, 256, 513, 1024])
def test_lemma1_tail(n):
    c = bounds.lemma1_tail(n)
    assert c.tail == _tail_oracle(n)
    assert c.holds
    assert c.threshold == Fraction(2 ** n, n * n)
    assert bounds.lower_tail(n) == c.tail


def test_lemma1_small_n_tail_empty():
    c = bounds.lemma1_tail(4)
    assert c.tail == 0 and c.threshold == 1 and c.holds


def test_stirling():
    for n, tol in [(100, 0.01), (10, 0.1)]:
        ratio = bounds.central_binomial_approx(n) / bounds.central_binomial(n)
        assert 1 - tol <= ratio <= 1 + tol
    e100 = abs(bounds.central_binomial_relerr(100))
    e200 = abs(bounds.central_binomial_relerr(200))
    assert 1.8 <= e100 / e200 <= 2.2


def test_stirling_rate_constant_stable():
    cs = [n * abs(bounds.central_binomial_relerr(n)) for n in (50, 100, 200, 400)]
    assert max(cs) / min(cs) < 1.05
    assert all(c < 0.3 for c in cs)


def test_stirling_relerr_matches_direct():
    n = 60
    direct = bounds.central_binomial_approx(n) / bounds.central_binomial(n) - 1
    assert abs(direct - bounds.central_binomial_relerr(n)) < 1e-12


@pytest.mark.parametrize("spec,value", [
    ("chain:5", Fraction(4)), ("butterfly", Fraction(2)), ("krs:3,4", Fraction(2)),
    ("nposet", Fraction(1)), ("fork:3", Fraction(1)), ("kfork:3,2", Fraction(3)),
    ("crown:8", Fraction(1)), ("crown:4", Fraction(2)), ("baton:4,2,3", Fraction(3)),
    ("pg:v=4;e=0-1,1-2,2-3", Fraction(1)),
])
def test_pi_exact(spec, value):
    e = bounds.pi_known(spec)
    assert e.kind == "exact" and e.value == value


def test_pi_intervals_and_unknown():
    assert bounds.pi_known("diamond").value == (2.0, 3.0)
    lo, hi = bounds.pi_known("crown:6").value
    assert lo == 1 and abs(hi - (1 + math.sqrt(2) / 2)) < 1e-15
    assert bounds.pi_known("crown:10").kind == "interval"
    assert bounds.pi_known("boolean:3").kind == "unknown"


def test_report_json_shape():
    j = bounds.thm1_upper(1024, 3, 2, 2).to_json()
    assert set(j) >= {"bound", "n", "params", "main_term", "correction_term", "dropped", "ratio"}
    assert isinstance(j["main_term"], str) and int(j["main_term"]) > 2 ** 53
    assert set(j["correction_term"]) == {"num", "den"}
