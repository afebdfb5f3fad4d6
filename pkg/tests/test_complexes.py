from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persposet.complexes import (
    SimplicialComplex,
    induced_map,
    join,
    join_tower,
    link,
    order_complex,
    order_complex_tower,
    star,
)
from persposet.errors import DuplicateElement, UnknownVertex
from persposet.posets import MonotoneMap, compose, downset, new_poset
from persposet.pposets import PersistencePoset, constant_pposet


def chains_oracle(P):
    """Independent chain enumeration: filter all vertex subsets."""
    out = set()
    for k in range(1, len(P.elements) + 1):
        for sub in combinations(P.elements, k):
            if all(P.comparable(a, b) for a in sub for b in sub):
                out.add(frozenset(sub))
    return out


ids = st.lists(st.sampled_from("abcdef"), min_size=1, max_size=5, unique=True)


@st.composite
def posets(draw):
    elements = draw(ids)
    pairs = []
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if draw(st.booleans()):
                pairs.append((elements[i], elements[j]))
    return new_poset(elements, pairs)


S = new_poset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
FOUR_CYCLE = {
    frozenset("a"), frozenset("b"), frozenset("c"), frozenset("d"),
    frozenset(["a", "c"]), frozenset(["a", "d"]), frozenset(["b", "c"]), frozenset(["b", "d"]),
}


class TestOrderComplex:
    def test_edge(self):
        K = order_complex(new_poset("ab", [("a", "b")]))
        assert K.simplices == {frozenset("a"), frozenset("b"), frozenset(["a", "b"])}

    def test_circle_is_four_cycle(self):
        assert order_complex(S).simplices == FOUR_CYCLE

    def test_antichain_discrete(self):
        K = order_complex(new_poset("abc", []))
        assert K.simplices == {frozenset("a"), frozenset("b"), frozenset("c")}

    @given(posets())
    @settings(max_examples=50, deadline=None)
    def test_simplices_are_chains(self, P):
        assert order_complex(P).simplices == chains_oracle(P)


class TestInducedMap:
    def test_identity(self):
        P = new_poset("ab", [("a", "b")])
        sm = induced_map(MonotoneMap(P, P, {"a": "a", "b": "b"}))
        assert sm.vertex_map == {"a": "a", "b": "b"}

    def test_collapse(self):
        P = new_poset("ab", [("a", "b")])
        Q = new_poset("z", [])
        sm = induced_map(MonotoneMap(P, Q, {"a": "z", "b": "z"}))
        assert sm.apply_simplex(["a", "b"]) == frozenset("z")

    def test_inclusion_into_cone(self):
        St = new_poset("abcdt", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                                 ("c", "t"), ("d", "t"), ("a", "t"), ("b", "t")])
        sm = induced_map(MonotoneMap(S, St, {e: e for e in S.elements}))
        assert all(s in sm.target.simplices for s in sm.source.simplices)

    @given(posets(), st.data())
    @settings(max_examples=30, deadline=None)
    def test_functoriality(self, P, data):
        Q = data.draw(posets(), label="Q")
        f_assign = {x: data.draw(st.sampled_from(Q.elements), label=f"f({x})") for x in P.elements}
        f = MonotoneMap(P, Q, f_assign)
        from persposet.posets import is_monotone

        if not is_monotone(f):
            return
        g = MonotoneMap(Q, Q, {y: y for y in Q.elements})
        left = induced_map(compose(g, f))
        right_f = induced_map(f)
        right_g = induced_map(g)
        assert left.vertex_map == {
            v: right_g.vertex_map[right_f.vertex_map[v]] for v in P.elements
        }


class TestJoinStarLink:
    def test_sphere_join(self):
        K = SimplicialComplex.from_simplices([], vertices=["a", "b"])
        L = SimplicialComplex.from_simplices([], vertices=["c", "d"])
        J = join(K, L)
        assert J.simplices == FOUR_CYCLE

    def test_cone(self):
        K = order_complex(S)
        apex = SimplicialComplex.from_simplices([], vertices=["t"])
        J = join(K, apex)
        assert frozenset(["a", "c", "t"]) in J.simplices

    def test_join_empty(self):
        K = SimplicialComplex.from_simplices([["a", "b"]])
        E = SimplicialComplex(vertices=(), simplices=frozenset())
        assert join(E, K).simplices == K.simplices
        assert join(K, E).simplices == K.simplices

    def test_join_requires_disjoint(self):
        K = SimplicialComplex.from_simplices([["a"]])
        with pytest.raises(DuplicateElement):
            join(K, K)

    def test_link_in_full_simplex(self):
        K = order_complex(new_poset("abc", [("a", "b"), ("b", "c"), ("a", "c")]))
        assert link(K, "b").simplices == {frozenset("a"), frozenset("c"), frozenset(["a", "c"])}

    def test_link_in_discrete(self):
        K = SimplicialComplex.from_simplices([], vertices=["a", "b"])
        assert link(K, "a").simplices == frozenset()

    def test_link_in_four_cycle(self):
        K = order_complex(S)
        assert link(K, "a").simplices == {frozenset("c"), frozenset("d")}

    def test_unknown_vertex(self):
        K = SimplicialComplex.from_simplices([["a"]])
        with pytest.raises(UnknownVertex):
            star(K, "z")

    @given(posets())
    @settings(max_examples=40, deadline=None)
    def test_star_is_cone_over_link(self, P):
        K = order_complex(P)
        for v in K.vertices:
            lk = link(K, v)
            apex = SimplicialComplex.from_simplices([], vertices=[v])
            assert star(K, v).simplices == join(lk, apex).simplices

    @given(posets())
    @settings(max_examples=40, deadline=None)
    def test_link_is_join_of_up_and_down_complexes(self, P):
        K = order_complex(P)
        for v in P.elements:
            below = order_complex(downset(P, v, strict=True, direction="below"))
            above = order_complex(downset(P, v, strict=True, direction="above"))
            assert link(K, v).simplices == join(below, above).simplices

    @given(posets())
    @settings(max_examples=40, deadline=None)
    def test_covering_identity(self, P):
        K = order_complex(P)
        for v in P.elements:
            rest = order_complex(P.restrict([e for e in P.elements if e != v]))
            assert K.simplices == rest.simplices | star(K, v).simplices


class TestTowers:
    def test_constant(self):
        pp = constant_pposet(S, 2)
        tower = order_complex_tower(pp)
        assert all(K.simplices == FOUR_CYCLE for K in tower.complexes)

    def test_growth_to_cone(self):
        St = new_poset("abcdt", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
                                 ("c", "t"), ("d", "t"), ("a", "t"), ("b", "t")])
        pp = PersistencePoset(
            (S, St), (MonotoneMap(S, St, {e: e for e in S.elements}),)
        )
        tower = order_complex_tower(pp)
        assert tower.complexes[0].top_degree() == 1
        assert tower.complexes[1].top_degree() == 2

    def test_empty_prefix(self):
        empty = new_poset([], [])
        pt = new_poset("a", [])
        pp = PersistencePoset((empty, pt), (MonotoneMap(empty, pt, {}),))
        tower = order_complex_tower(pp)
        assert tower.complexes[0].is_empty() and not tower.complexes[1].is_empty()

    def test_join_tower(self):
        A = order_complex_tower(constant_pposet(new_poset(["a1", "a2"], []), 1))
        B = order_complex_tower(constant_pposet(new_poset(["b1", "b2"], []), 1))
        J = join_tower(A, B)
        assert all(K.top_degree() == 1 and len(K.k_simplices(1)) == 4 for K in J.complexes)
