import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridsat.dichotomy import (
    SepDigraph,
    bounded_witness,
    build_sep_digraph,
    classify_dichotomy,
    constant_core,
    deflate_cascade,
    deflate_family,
    drop_nonseparating,
    edge_bound,
    edge_bound_holds,
    is_tck_free,
    lift_extreme,
    lift_repeated,
)
from gridsat.errors import NotFullySeparating, PreconditionError
from gridsat.family import Family, is_induced_p_free, is_saturated, is_separating
from gridsat.grid import GridShape
from gridsat.poset import antichain, chain, diamond, named_poset
from gridsat.search import enumerate_saturated

SQ = GridShape(2, 2)


def fam(shape, *pts):
    return Family(shape, pts)


def saturated(f, p):
    return is_induced_p_free(f, p).holds and is_saturated(f, p).holds


def brute_tck(vertices, edges):
    """Try every vertex sequence directly."""
    es = {(s, d) for s, d, _ in edges}
    for k in range(3, len(vertices) + 1):
        for seq in itertools.permutations(vertices, k):
            if (seq[0], seq[-1]) in es and all((seq[i], seq[i + 1]) in es for i in range(k - 1)):
                return True
    return False


class TestSepDigraph:
    def test_two_points(self):
        d = build_sep_digraph(fam(SQ, (1, 2), (2, 1)))
        assert len(d.edges) == 2
        assert {frozenset((s, t)) for s, t, _ in d.edges} == {frozenset({(1, 2), (2, 1)})}
        assert sorted(i for _, _, i in d.edges) == [1, 2]

    def test_chain_not_separating(self):
        with pytest.raises(NotFullySeparating) as exc:
            build_sep_digraph(fam(SQ, (1, 1), (2, 2)))
        assert exc.value.coordinate == 1

    def test_minimum_a3_in_3x3(self):
        fams = list(enumerate_saturated(antichain(3), GridShape(3, 2), 8))
        minimum = [f for f in fams if len(f) == len(fams[0])]
        assert minimum
        for f in minimum:
            d = build_sep_digraph(f)
            assert len(d.edges) == 2 and is_tck_free(d)[0] and edge_bound_holds(d)

    def test_edge_invariants(self):
        for f in enumerate_saturated(antichain(2), GridShape(3, 2), 6):
            d = build_sep_digraph(f)
            for src, dst, i in d.edges:
                assert src != dst and dst[i - 1] > src[i - 1]
                assert all(a <= b for c, (a, b) in enumerate(zip(dst, src)) if c != i - 1)

    def test_a2_cube_families(self):
        for f in enumerate_saturated(antichain(2), GridShape(2, 3), 8):
            assert is_tck_free(build_sep_digraph(f))[0]


class TestTck:
    def test_tc3(self):
        a, b, c = (1,), (2,), (3,)
        ok, cert = is_tck_free(SepDigraph((a, b, c), ((a, b, 1), (b, c, 2), (a, c, 3))))
        assert not ok and cert == (a, b, c)

    def test_path(self):
        a, b, c = (1,), (2,), (3,)
        assert is_tck_free(SepDigraph((a, b, c), ((a, b, 1), (b, c, 2))))[0]

    @settings(max_examples=150)
    @given(st.integers(2, 5).flatmap(
        lambda m: st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=7)
        .map(lambda es: (m, es))
    ))
    def test_matches_brute_force(self, data):
        m, raw = data
        vs = tuple((v,) for v in range(m))
        edges = tuple((vs[s], vs[d], i + 1) for i, (s, d) in enumerate(raw) if s != d)
        ok, cert = is_tck_free(SepDigraph(vs, edges))
        assert ok == (not brute_tck(vs, edges))
        if not ok:
            es = {(s, d) for s, d, _ in edges}
            assert len(cert) >= 3 and (cert[0], cert[-1]) in es
            assert all((cert[i], cert[i + 1]) in es for i in range(len(cert) - 1))

    def test_edge_bound(self):
        assert edge_bound(2) == 2
        assert edge_bound(3) == 4 and 5 > edge_bound(3)
        assert edge_bound(10) == 25


class TestConstantCore:
    def test_examples(self):
        c = constant_core(fam(GridShape(2, 3), (1, 1, 2)))
        assert c.classes == [[1, 2], [3]]
        assert c.trace[0] == [1, 2]
        assert constant_core(fam(SQ, (1, 2), (2, 1))).classes == [[1], [2]]

    @settings(max_examples=80)
    @given(st.integers(2, 4), st.integers(1, 8), st.data())
    def test_pigeonhole(self, t, n, data):
        shape = GridShape(t, n)
        pts = data.draw(st.lists(st.tuples(*[st.integers(1, t)] * n), unique=True, min_size=1, max_size=5))
        c = constant_core(Family(shape, pts))
        prev = n
        for m, I in enumerate(c.trace, start=1):
            assert len(I) * t >= prev and len(I) * t**m >= n
            prev = len(I)


class TestLifts:
    def test_lift_repeated(self):
        out = lift_repeated(fam(SQ, (1, 1), (2, 2)), 1, 2, chain(3))
        assert out.points == ((1, 1, 1), (2, 2, 2))
        assert saturated(out, chain(3))

    def test_iterated_lift(self):
        f = fam(SQ, (1, 1), (2, 2))
        for _ in range(3):
            f = lift_repeated(f, 1, 2, chain(3))
            assert len(f) == 2
        assert f.shape.n == 5

    def test_lift_repeated_rejects(self):
        with pytest.raises(PreconditionError):
            lift_repeated(fam(SQ, (1, 2), (2, 1)), 1, 2, antichain(2))
        with pytest.raises(PreconditionError):
            lift_repeated(fam(SQ, (1, 1)), 1, 2, chain(3))  # not saturated

    def test_drop_example(self):
        out = drop_nonseparating(fam(GridShape(2, 3), (1, 1, 1), (2, 2, 2)), 3, chain(3))
        assert out.points == ((1, 1), (2, 2)) and saturated(out, chain(3))

    def test_lift_then_drop_is_identity(self):
        f = fam(SQ, (1, 1), (2, 2))
        up = lift_extreme(f, 1, chain(3))
        assert drop_nonseparating(up, 3, chain(3)) == f

    def test_separating_coordinate_rejected(self):
        f = fam(SQ, (1, 1), (1, 2), (2, 2))
        with pytest.raises(PreconditionError):
            drop_nonseparating(f, 1, antichain(2))
        with pytest.raises(PreconditionError):
            lift_extreme(f, 1, antichain(2))


class TestDeflate:
    def test_extreme_values_unchanged(self):
        f = fam(GridShape(3, 2), (1, 1), (3, 3))
        assert saturated(f, chain(3))
        assert deflate_cascade(f, 1, chain(3)) == []
        assert deflate_family(f, 1, chain(3)) == f

    def test_middle_value_single_point(self):
        # {(2)} is C2-saturated in [3]^1 and its only coordinate is not separating
        f = fam(GridShape(3, 1), (2,))
        steps = deflate_cascade(f, 1, chain(2))
        assert [s.value for s in steps] == [2]
        out = deflate_family(f, 1, chain(2))
        assert out.points == ((1,),) and saturated(out, chain(2))

    def test_cascade_order_in_wider_alphabet(self):
        f = fam(GridShape(5, 1), (3,))
        steps = deflate_cascade(f, 1, chain(2))
        assert [s.value for s in steps] == [3, 2]
        assert [s.family.points for s in steps] == [((2,),), ((1,),)]

    def test_pipeline_on_every_qualifying_instance(self):
        count = 0
        for name in ["C2", "C3", "C4"]:
            p = named_poset(name)
            for t, n in [(3, 1), (3, 2), (4, 1), (2, 3)]:
                for f in enumerate_saturated(p, GridShape(t, n), 5):
                    for i in range(1, n + 1):
                        if is_separating(f, i):
                            continue
                        w = bounded_witness(f, i, p)
                        sizes = {len(f), len(w.extreme), len(w.lifted)}
                        assert sizes == {len(f)}
                        assert all(v in (1, t) for v in (x[i - 1] for x in w.extreme.points))
                        assert not is_separating(w.extreme, i)
                        count += 1
        assert count > 0


class TestClassifier:
    def test_chain_three(self):
        r = classify_dichotomy(chain(3), 2, 3, 6, poset_id="C3")
        assert r.verdict == "bounded-witness-found"
        assert r.witness.family.points == ((1, 1), (2, 2)) and r.witness.coordinate == 1
        assert r.verify(chain(3))

    def test_antichain_two(self):
        r = classify_dichotomy(antichain(2), 2, 3, 6, poset_id="A2")
        assert r.verdict == "all-separating-up-to-range"
        assert r.table == {2: 3, 3: 4}
        assert all(r.table[n] == n + 1 for n in r.table)

    def test_not_embeddable(self):
        r = classify_dichotomy(diamond(), 2, 1, 4)
        assert r.verdict == "not-embeddable" and r.verify(diamond())

    def test_tampered_witness_fails_verification(self):
        r = classify_dichotomy(chain(3), 2, 3, 6)
        r.witness.lifted = fam(GridShape(2, 3), (1, 1, 1))
        assert not r.verify(chain(3))

    def test_json_shape(self):
        doc = classify_dichotomy(chain(3), 2, 2, 4, poset_id="C3").to_json()
        assert doc["kind"] == "classify" and doc["rows"][1]["min_family"] == [[1, 1], [2, 2]]
