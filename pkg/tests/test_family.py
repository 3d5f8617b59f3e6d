import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_embedding, family_poset, permutation_average, random_family
from subposets.family import (
    SetFamily,
    chain_moment,
    contains_pattern,
    format_family,
    in_middle_band,
    lubell_mass,
    parse_family,
    sample_chain_stats,
    trim_middle_band,
)
from subposets.poset import build_poset

SMALL = SetFamily.from_sets(2, [[], [1], [1, 2]])


def test_members_are_canonical():
    f = SetFamily(3, (7, 1, 0, 1, 6))
    assert f.members == (0, 1, 6, 7)
    with pytest.raises(ValueError):
        SetFamily(2, (4,))


def test_lubell_full_level_and_two_levels():
    assert lubell_mass(SetFamily.levels(4, [2])) == 1
    assert lubell_mass(SetFamily.levels(4, [1, 2])) == 2
    assert lubell_mass(SetFamily(4, ())) == 0


def test_small_family_values():
    # enumeration of both permutations of [2]: X = 3 and X = 2
    assert permutation_average(SMALL, 1) == Fraction(5, 2)
    assert permutation_average(SMALL, 2) == 2
    assert lubell_mass(SMALL) == Fraction(5, 2)
    assert chain_moment(SMALL, 2) == 2


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_whole_lattice_moment(n, k):
    # every maximal chain meets all of 2^[n] in n+1 sets
    assert chain_moment(SetFamily(n, tuple(range(1 << n))), k) == math.comb(n + 1, k)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fixed_maximal_chain_is_not_constant(n):
    chain = SetFamily(n, tuple((1 << i) - 1 for i in range(n + 1)))
    expected = sum(Fraction(1, math.comb(n, i)) for i in range(n + 1))
    assert lubell_mass(chain) == expected == permutation_average(chain, 1)
    for k in (2, 3):
        assert chain_moment(chain, k) == permutation_average(chain, k)


def test_no_k_chain_gives_zero():
    assert chain_moment(SetFamily.levels(5, [2]), 2) == 0


def test_moments_match_permutation_enumeration():
    rng = random.Random(2024)
    for _ in range(60):
        fam = random_family(rng, rng.randint(1, 5))
        assert lubell_mass(fam) == permutation_average(fam, 1)
        for k in (1, 2, 3):
            assert chain_moment(fam, k) == permutation_average(fam, k)


def test_first_moment_is_lubell_mass():
    rng = random.Random(99)
    for _ in range(100):
        fam = random_family(rng, rng.randint(1, 8), max_size=40)
        assert chain_moment(fam, 1) == lubell_mass(fam)


def test_exact_arithmetic_beyond_64_bits():
    # factorial products overflow machine words around n = 21
    fam = SetFamily(40, ((1 << 5) - 1, (1 << 20) - 1, (1 << 33) - 1))
    expected = Fraction(math.factorial(5) * math.factorial(15) * math.factorial(13)
                        * math.factorial(7), math.factorial(40))
    assert chain_moment(fam, 3) == expected


def test_sampling_constant_x():
    st_ = sample_chain_stats(SetFamily.levels(6, [3]), 1, 5000, seed=1)
    assert st_.estimate == 1.0 and st_.stderr == 0.0


def test_sampling_small_family():
    s = sample_chain_stats(SMALL, 2, 100_000, seed=17)
    assert abs(s.estimate - 2) <= 4 * s.stderr


def test_sampling_two_middle_levels():
    fam = SetFamily.levels(6, [2, 3])
    exact = chain_moment(fam, 2)
    assert exact == permutation_average(fam, 2)
    s = sample_chain_stats(fam, 2, 100_000, seed=5)
    assert s.exact == exact
    assert abs(s.estimate - float(exact)) <= 4 * s.stderr


def test_sampling_independent_of_workers():
    fam = random_family(random.Random(1), 6, max_size=30)
    a = sample_chain_stats(fam, 2, 20_000, seed=42, workers=1)
    b = sample_chain_stats(fam, 2, 20_000, seed=42, workers=4)
    assert a == b
    c = sample_chain_stats(fam, 2, 20_000, seed=43)
    assert c.estimate != a.estimate


def test_sampling_single_sample():
    s = sample_chain_stats(SMALL, 1, 1, seed=0)
    assert s.samples == 1 and s.stderr == 0.0
    with pytest.raises(ValueError):
        sample_chain_stats(SMALL, 1, 0, seed=0)


def test_contains_pattern_examples():
    b2 = SetFamily(2, (0, 1, 2, 3))
    w = contains_pattern(b2, build_poset("diamond"))
    assert w is not None and sorted(w.values()) == [0, 1, 2, 3]
    assert contains_pattern(SetFamily.levels(5, [2]), build_poset("chain:2")) is None
    assert contains_pattern(b2, build_poset("butterfly")) is None
    assert brute_embedding(family_poset(b2.members), build_poset("butterfly")) is None


def test_contains_pattern_witness_respects_subset_order():
    fam = SetFamily.levels(4, [1, 2, 3])
    h = build_poset("butterfly")
    w = contains_pattern(fam, h)
    assert w is not None
    assert len(set(w.values())) == h.size
    for a, b in h.relations():
        assert w[a] != w[b] and w[a] & w[b] == w[a]


def test_contains_pattern_label_invariant():
    rng = random.Random(8)
    pats = [build_poset(s) for s in ("butterfly", "fork:2", "chain:3", "nposet", "diamond")]
    for _ in range(10):
        fam = random_family(rng, 4, max_size=9)
        for h in pats:
            base = contains_pattern(fam, h) is None
            for _ in range(20):
                perm = list(range(4))
                rng.shuffle(perm)
                assert (contains_pattern(fam.relabel(perm), h) is None) == base


def test_trim_band_examples():
    f4 = SetFamily(4, tuple(range(16)))
    assert trim_middle_band(f4) == f4
    assert trim_middle_band(SetFamily(64, (0,))).members == (0,)
    # 2 sqrt(1024 ln 1024) is about 168.5, so the band is about (343.5, 680.5)
    assert in_middle_band(1024, 400)
    assert not in_middle_band(1024, 300)
    assert not in_middle_band(1024, 343) and in_middle_band(1024, 344)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 12).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, (1 << n) - 1), max_size=30))))
def test_trim_idempotent_and_mass_nonincreasing(args):
    n, masks = args
    fam = SetFamily(n, tuple(masks))
    once = trim_middle_band(fam)
    assert trim_middle_band(once) == once
    assert lubell_mass(once) <= lubell_mass(fam)
    assert set(once.members) <= set(fam.members)


def test_family_file_roundtrip(tmp_path):
    text = "# demo\nn=4\nempty\n1,3\n0xf\n\n2\n"
    fam = parse_family(text)
    assert fam.members == (0, 2, 5, 15)
    assert parse_family(format_family(fam)) == fam
    for bad in ["1,2\n", "n=3\n4\n", "n=0\n"]:
        with pytest.raises(ValueError):
            parse_family(bad)
