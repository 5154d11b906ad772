import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridsat.bounds import chain_construction
from gridsat.errors import DuplicatePoint, NotPFree
from gridsat.family import (
    ABOVE,
    BELOW,
    INCOMPARABLE,
    Family,
    creates_copy_through,
    greedy_saturate,
    is_induced_p_free,
    is_saturated,
    is_separating,
    non_separating_coordinates,
    separating_coordinates,
    verify_embedding,
)
from gridsat.grid import GridShape, drop, leq, leq_restricted
from gridsat.poset import antichain, brute_force_embedding, chain, named_poset
from gridsat.search import enumerate_saturated

SQ = GridShape(2, 2)
SMALL_POSETS = ["C2", "C3", "A2", "A3", "D2", "Lambda", "V"]


def fam(shape, *pts):
    return Family(shape, pts)


@st.composite
def families(draw, shapes=((2, 2), (2, 3), (3, 2))):
    t, n = draw(st.sampled_from(shapes))
    shape = GridShape(t, n)
    pts = list(shape.points())
    chosen = draw(st.lists(st.sampled_from(pts), unique=True, max_size=6))
    return Family(shape, chosen)


class TestFamily:
    def test_sorted_and_unique(self):
        f = fam(SQ, (2, 2), (1, 1))
        assert f.points == ((1, 1), (2, 2))
        with pytest.raises(DuplicatePoint):
            fam(SQ, (1, 1), (1, 1))

    def test_comparability(self):
        f = fam(SQ, (1, 1), (1, 2), (2, 1))
        c = f.comparability
        assert c[0][1] == BELOW and c[1][0] == ABOVE and c[1][2] == INCOMPARABLE

    @settings(max_examples=50, deadline=None)
    @given(families())
    def test_comparability_matches_leq(self, f):
        for a, x in enumerate(f.points):
            for b, y in enumerate(f.points):
                if a == b:
                    continue
                want = BELOW if leq(x, y) else ABOVE if leq(y, x) else INCOMPARABLE
                assert f.comparability[a][b] == want

    @settings(max_examples=30, deadline=None)
    @given(families())
    def test_text_round_trip(self, f):
        assert Family.from_text(f.to_text("rt")) == f


class TestFreeness:
    def test_examples(self):
        assert is_induced_p_free(fam(SQ, (1, 1), (2, 2)), antichain(2)).holds
        v = is_induced_p_free(fam(SQ, (1, 2), (2, 1)), antichain(2))
        assert not v.holds and set(v.certificate.payload) == {(1, 2), (2, 1)}
        assert not is_induced_p_free(fam(SQ, (1, 1), (1, 2), (2, 2)), chain(3)).holds

    @settings(max_examples=80, deadline=None)
    @given(families(), st.sampled_from(SMALL_POSETS))
    def test_matches_brute_force(self, f, name):
        p = named_poset(name)
        pts = f.points
        slow = brute_force_embedding(p, len(pts), lambda a, b: leq(pts[a], pts[b]) and a != b)
        v = is_induced_p_free(f, p)
        assert v.holds == (slow is None)
        if not v.holds:
            assert verify_embedding(p, v.certificate.payload)
            assert v.certificate.payload == tuple(pts[a] for a in slow)


class TestCopyThrough:
    def test_examples(self):
        phi = creates_copy_through(fam(SQ, (1, 1), (2, 2)), (1, 2), chain(3))
        assert phi == ((1, 1), (1, 2), (2, 2))
        assert creates_copy_through(fam(SQ, (1, 1)), (2, 2), chain(3)) is None

    def test_chain_family_plus_middle(self):
        shape = GridShape(3, 3)
        f4 = chain_construction(4, shape)
        phi = creates_copy_through(f4, (2, 2, 2), chain(4))
        assert phi is not None and (2, 2, 2) in phi and verify_embedding(chain(4), phi)
        union = list(f4.points) + [(2, 2, 2)]
        assert brute_force_embedding(chain(4), len(union), lambda a, b: leq(union[a], union[b]) and a != b)

    def test_duplicate(self):
        with pytest.raises(DuplicatePoint):
            creates_copy_through(fam(SQ, (1, 1)), (1, 1), chain(2))


class TestSaturation:
    def test_examples(self):
        assert is_saturated(fam(SQ, (1, 1), (1, 2), (2, 2)), antichain(2)).holds
        assert is_saturated(fam(SQ, (1, 1), (2, 2)), chain(3)).holds
        v = is_saturated(fam(SQ, (1, 1)), chain(3))
        assert not v.holds and v.certificate.payload == (1, 2)

    def test_not_free(self):
        with pytest.raises(NotPFree) as exc:
            is_saturated(fam(SQ, (1, 2), (2, 1)), antichain(2))
        assert exc.value.certificate.kind == "embedding"

    def test_violating_point_is_least(self):
        f = fam(GridShape(3, 2), (1, 1))
        v = is_saturated(f, antichain(2))
        assert v.certificate.payload == (1, 2)

    @pytest.mark.parametrize("t,n", [(2, 2), (2, 3), (3, 2)])
    @pytest.mark.parametrize("name", SMALL_POSETS)
    def test_saturated_iff_maximal(self, t, n, name):
        p = named_poset(name)
        shape = GridShape(t, n)
        for size in range(0, 4):
            for pts in itertools.combinations(shape.points(), size):
                f = Family(shape, pts)
                if not is_induced_p_free(f, p).holds:
                    continue
                assert is_saturated(f, p).holds == (greedy_saturate(f, p) == f)


class TestSeparating:
    def test_examples(self):
        f = fam(SQ, (1, 2), (2, 1))
        seps = separating_coordinates(f)
        assert set(seps) == {1, 2}
        assert seps[1].payload == ((2, 1), (1, 2), 1)
        assert separating_coordinates(fam(SQ, (1, 1), (2, 2))) == {}

    def test_minimum_a2_families_in_cube(self):
        fams = list(enumerate_saturated(antichain(2), GridShape(2, 3), 4))
        assert fams and all(len(f) == 4 for f in fams)
        for f in fams:
            assert set(separating_coordinates(f)) == {1, 2, 3}

    def test_dimension_one_convention(self):
        s = GridShape(3, 1)
        assert is_separating(fam(s, (1,), (3,)), 1)
        assert not is_separating(fam(s, (2,)), 1)

    @settings(max_examples=60, deadline=None)
    @given(families())
    def test_certificates_recheck(self, f):
        n = f.shape.n
        seps = separating_coordinates(f)
        for i in range(1, n + 1):
            others = set(range(1, n + 1)) - {i}
            brute = any(
                leq_restricted(a, b, others) and a[i - 1] > b[i - 1]
                for a in f.points
                for b in f.points
            )
            assert (i in seps) == brute
            if i in seps:
                a, b, c = seps[i].payload
                assert c == i and leq(drop(a, i), drop(b, i)) and a[i - 1] > b[i - 1]
        assert non_separating_coordinates(f) == [i for i in range(1, n + 1) if i not in seps]


class TestGreedy:
    def test_examples(self):
        assert greedy_saturate(Family(SQ), antichain(2)).points == ((1, 1), (1, 2), (2, 2))
        assert greedy_saturate(Family(GridShape(2, 1)), chain(2)).points == ((1,),)

    def test_fixed_point(self):
        f = fam(SQ, (1, 1), (2, 2))
        assert greedy_saturate(f, chain(3)) == f

    def test_not_free_seed(self):
        with pytest.raises(NotPFree):
            greedy_saturate(fam(SQ, (1, 2), (2, 1)), antichain(2))

    @settings(max_examples=40, deadline=None)
    @given(families(), st.sampled_from(SMALL_POSETS), st.randoms(use_true_random=False))
    def test_restart_stability(self, seed, name, rnd):
        p = named_poset(name)
        if not is_induced_p_free(seed, p).holds:
            return
        out = greedy_saturate(seed, p)
        assert is_saturated(out, p).holds and set(seed.points) <= set(out.points)
        extra = [x for x in out.points if x not in seed]
        sub = rnd.sample(extra, rnd.randint(0, len(extra)))
        assert greedy_saturate(Family(seed.shape, list(seed.points) + sub), p) == out
