import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fhplab.setfam import (
    MeasureReport,
    RationalWeights,
    SetFamily,
    check_fhp_instance,
    check_pk_property,
    colorful_check,
    cons_k,
    k_subsets_colex,
    max_intersecting,
    measure_fhp_check,
    min_sequence_ratio,
    sequence_ratio,
    wfhp_counting_bound,
)

from conftest import oracle_cons_count, oracle_pk, random_family


class TestSetFamily:
    def test_basic_shape(self, triangle):
        assert triangle.n == 3
        assert triangle.ground_size == 3
        assert triangle.members[0] == frozenset({0, 1})

    def test_element_out_of_range(self):
        with pytest.raises(ValueError, match=r"set 1: element 5"):
            SetFamily(3, [{0}, {5}])

    def test_negative_ground(self):
        with pytest.raises(ValueError):
            SetFamily(-1, [])

    def test_masks(self, triangle):
        assert triangle.masks == (0b011, 0b110, 0b101)

    def test_empty_members_tracked(self):
        fam = SetFamily(4, [{0}, set(), {1, 2}, set()])
        assert fam.empty_members == (1, 3)

    def test_json_round_trip(self, triangle):
        obj = triangle.to_json_dict()
        back = SetFamily.from_json_dict(obj)
        assert back == triangle

    def test_json_ignores_extra_keys(self, triangle):
        obj = triangle.to_json_dict()
        obj["construction"] = "by-hand"
        assert SetFamily.from_json_dict(obj) == triangle

    def test_labels_length_checked(self):
        with pytest.raises(ValueError):
            SetFamily(2, [{0}], labels=["a", "b"])


class TestWeights:
    def test_must_sum_to_one(self):
        with pytest.raises(ValueError):
            RationalWeights({0: Fraction(1, 2)})

    def test_zero_weights_dropped(self):
        w = RationalWeights({0: Fraction(1), 1: Fraction(0)})
        assert 1 not in w.weights

    def test_uniform(self):
        w = RationalWeights.uniform(4)
        assert all(v == Fraction(1, 4) for v in w.weights.values())


def test_colex_order():
    got = list(k_subsets_colex(4, 2))
    assert got[:3] == [(0, 1), (0, 2), (1, 2)]
    assert got[-1] == (2, 3)
    assert len(got) == 6


def test_cons_triangle(triangle):
    rep = cons_k(triangle, 2)
    assert (rep.cons_count, rep.total) == (3, 3)
    assert cons_k(triangle, 3).cons_count == 0


@pytest.mark.parametrize("seed", range(12))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_cons_matches_oracle(seed, k):
    fam = random_family(random.Random(seed), ground_max=8, n_max=7)
    if k > fam.n:
        return
    assert cons_k(fam, k).cons_count == oracle_cons_count(fam, k)


def test_max_intersecting_tie_smallest_element():
    fam = SetFamily(3, [{1, 2}, {1, 2}, {0}])
    best = max_intersecting(fam)
    assert best.size == 2
    assert best.element == 1
    assert best.indices == frozenset({0, 1})


def test_max_intersecting_all_empty():
    fam = SetFamily(2, [set(), set()])
    assert max_intersecting(fam) == (0, 0, frozenset())


def test_fhp_instance_triangle(triangle):
    rep = check_fhp_instance(triangle, 2, Fraction(2, 3))
    assert rep.cons.fraction == 1
    assert rep.best_beta == Fraction(2, 3)
    assert rep.hypothesis_holds
    assert rep.witness_element == 0


def test_fhp_hypothesis_fails_below_alpha(triangle):
    rep = check_fhp_instance(triangle, 3, Fraction(1, 2))
    assert rep.cons.fraction == 0
    assert not rep.hypothesis_holds


class TestPkProperty:
    def test_triangle_2_2(self, triangle):
        assert check_pk_property(triangle, 2, 2).holds

    def test_disjoint_family_fails(self):
        fam = SetFamily(4, [{0}, {1}, {2}, {3}])
        res = check_pk_property(fam, 4, 2)
        assert not res.holds
        assert res.counterexample == (0, 1, 2, 3)

    def test_p_less_than_k_rejected(self, triangle):
        with pytest.raises(ValueError):
            check_pk_property(triangle, 1, 2)

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_oracle(self, seed):
        rng = random.Random(100 + seed)
        fam = random_family(rng, ground_max=6, n_max=5)
        p = rng.randint(2, 4)
        k = rng.randint(1, p)
        mine = check_pk_property(fam, p, k)
        ref_holds, ref_tuple = oracle_pk(fam, p, k)
        assert mine.holds == ref_holds
        assert mine.counterexample == ref_tuple


def test_sequence_ratio_triangle(triangle):
    assert sequence_ratio(triangle, (0,)) == 1
    assert sequence_ratio(triangle, (0, 1)) == 1
    assert sequence_ratio(triangle, (0, 1, 2)) == Fraction(2, 3)
    # repetition raises the achievable depth
    assert sequence_ratio(triangle, (0, 0, 1)) == 1


def test_sequence_ratio_permutation_invariant(triangle):
    for perm in itertools.permutations((0, 1, 2)):
        assert sequence_ratio(triangle, perm) == Fraction(2, 3)


def test_min_sequence_ratio_triangle(triangle):
    assert min_sequence_ratio(triangle, 5) == Fraction(2, 3)


def test_min_sequence_ratio_disjoint():
    fam = SetFamily(2, [{0}, {1}])
    assert min_sequence_ratio(fam, 4) == Fraction(1, 2)


class TestColorful:
    def test_two_triangles(self, triangle):
        rep = colorful_check([triangle, triangle], Fraction(2, 3))
        assert rep.fraction == 1
        assert rep.best_beta == Fraction(2, 3)
        assert rep.holds

    def test_disjoint_cross_pair(self):
        a = SetFamily(4, [{0}, {1}])
        b = SetFamily(4, [{2}, {3}])
        rep = colorful_check([a, b], Fraction(1, 4))
        assert rep.rainbow_count == 0
        assert not rep.holds

    def test_per_family_beta_reported(self, triangle):
        rep = colorful_check([triangle, triangle], Fraction(1, 2))
        assert rep.per_family_beta == (Fraction(2, 3), Fraction(2, 3))
        # convex-reference constant alpha/(d+1) carried as metadata
        assert rep.beta_reference == Fraction(1, 6)

    def test_ground_mismatch_rejected(self, triangle):
        with pytest.raises(ValueError):
            colorful_check([triangle, SetFamily(4, [{0}])], Fraction(1, 2))


class TestMeasure:
    def test_triangle_uniform(self, triangle):
        rep = measure_fhp_check(
            triangle, RationalWeights.uniform(3), 2, Fraction(2, 3)
        )
        assert rep.tuple_measure == 1
        assert rep.weighted_depth == Fraction(2, 3)
        assert rep.holds

    def test_point_mass(self, triangle):
        w = RationalWeights({1: Fraction(1)})
        rep = measure_fhp_check(triangle, w, 3, Fraction(1, 2))
        assert rep.tuple_measure == 1
        assert rep.weighted_depth == 1

    def test_weight_index_out_of_range(self, triangle):
        w = RationalWeights({7: Fraction(1)})
        with pytest.raises(ValueError):
            measure_fhp_check(triangle, w, 2, Fraction(1, 2))

    @pytest.mark.parametrize("seed", range(8))
    def test_tuple_measure_equals_direct_sum(self, seed):
        # independent oracle: iterate all ordered d-tuples of support
        rng = random.Random(300 + seed)
        fam = random_family(rng, ground_max=6, n_max=5)
        L = rng.randint(1, 4)
        parts = [0] * fam.n
        for _ in range(L):
            parts[rng.randrange(fam.n)] += 1
        w = RationalWeights(
            {i: Fraction(c, L) for i, c in enumerate(parts) if c}
        )
        d = rng.randint(1, 3)
        rep = measure_fhp_check(fam, w, d, Fraction(1, 2))
        total = Fraction(0)
        for tup in itertools.product(sorted(w.weights), repeat=d):
            inter = set(fam.members[tup[0]])
            for i in tup[1:]:
                inter &= fam.members[i]
            if inter:
                total += math.prod(w.weights[i] for i in tup)
        assert rep.tuple_measure == total


def test_wfhp_counting_bound_formula():
    for n, p, k in [(10, 4, 2), (12, 5, 3), (6, 6, 6)]:
        expect = Fraction(math.comb(n, p), math.comb(n - k, p - k))
        assert wfhp_counting_bound(n, p, k) == expect


def test_wfhp_bound_rejects_bad_args():
    with pytest.raises(ValueError):
        wfhp_counting_bound(3, 5, 2)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_cons_count_le_total(data):
    g = data.draw(st.integers(1, 8))
    n = data.draw(st.integers(1, 7))
    members = [
        data.draw(st.sets(st.integers(0, g - 1), max_size=g)) or {0}
        for _ in range(n)
    ]
    fam = SetFamily(g, members)
    k = data.draw(st.integers(1, n))
    rep = cons_k(fam, k)
    assert 0 <= rep.cons_count <= rep.total == math.comb(n, k)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_best_beta_bounds(data):
    g = data.draw(st.integers(1, 9))
    n = data.draw(st.integers(1, 8))
    members = [
        data.draw(st.sets(st.integers(0, g - 1), min_size=1, max_size=g))
        for _ in range(n)
    ]
    fam = SetFamily(g, members)
    best = max_intersecting(fam)
    assert 1 <= best.size <= n
    assert all(best.element in fam.members[i] for i in best.indices)
