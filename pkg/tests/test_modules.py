import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persposet.errors import ShapeMismatch, TooLarge
from persposet.modules import (
    INF,
    Barcode,
    FieldSpec,
    PersistenceModule,
    ShiftMorphism,
    barcode,
    bottleneck_distance,
    direct_sum,
    eps_trivial,
    interleaving_bruteforce,
    module_from_barcode,
    point_comparison_defect,
    random_module,
    rank_invariant,
    triviality_defect,
    zero_module,
)

F2 = FieldSpec(2)
F3 = FieldSpec(3)


def mod(dims, transitions, field=F2):
    mats = [
        np.array(t, dtype=np.int64).reshape(dims[i + 1], dims[i])
        for i, t in enumerate(transitions)
    ]
    return PersistenceModule(field, tuple(dims), tuple(mats))


@st.composite
def modules(draw, max_dim=3, t_max=4, p=2):
    T = draw(st.integers(0, t_max))
    dims = [draw(st.integers(0, max_dim)) for _ in range(T + 1)]
    transitions = []
    for i in range(T):
        entries = [
            draw(st.integers(0, p - 1)) for _ in range(dims[i] * dims[i + 1])
        ]
        transitions.append(np.array(entries, dtype=np.int64).reshape(dims[i + 1], dims[i]))
    return PersistenceModule(FieldSpec(p), tuple(dims), tuple(transitions))


class TestRankInvariant:
    def test_identity(self):
        r = rank_invariant(mod([1, 1], [[1]]))
        assert r[0, 1] == 1 and r[0, 0] == 1

    def test_death(self):
        r = rank_invariant(mod([1, 1, 1], [[1], [0]]))
        assert r[0, 1] == 1 and r[0, 2] == 0

    def test_zero_module(self):
        r = rank_invariant(zero_module(F2, 2))
        assert not r.any()

    def test_stable_column_duplicates_last(self):
        M = mod([1, 1, 1], [[1], [0]])
        r = rank_invariant(M)
        assert all(r[i, M.T + 1] == r[i, M.T] for i in range(M.T + 1))


class TestBarcode:
    def test_death_and_rebirth(self):
        M = mod([1, 1, 1], [[1], [0]])
        assert barcode(M).bars == ((0, 2), (2, INF))

    def test_constant_identity(self):
        assert barcode(mod([1, 1], [[1]])).bars == ((0, INF),)

    def test_zero(self):
        assert barcode(zero_module(F2, 3)).bars == ()

    @given(modules())
    @settings(max_examples=80, deadline=None)
    def test_rank_reconstruction(self, M):
        code = barcode(M)
        r = rank_invariant(M)
        for i in range(M.T + 1):
            for j in range(i, M.T + 1):
                assert code.count_through(i, j) == r[i, j]

    @given(modules(p=3))
    @settings(max_examples=40, deadline=None)
    def test_rank_reconstruction_p3(self, M):
        code = barcode(M)
        r = rank_invariant(M)
        for i in range(M.T + 1):
            for j in range(i, M.T + 1):
                assert code.count_through(i, j) == r[i, j]

    def test_round_trip_through_interval_modules(self):
        bars = [(0, 2), (1, 3), (1, INF), (2, INF)]
        M = module_from_barcode(F2, 3, bars)
        assert barcode(M) == Barcode.of(bars)


class TestTriviality:
    def test_length_three_bar(self):
        M = module_from_barcode(F2, 3, [(0, 3)])
        assert not eps_trivial(M, 1)
        assert eps_trivial(M, 2)

    def test_zero_module_trivial_at_zero(self):
        assert eps_trivial(zero_module(F2, 2), 0)

    def test_essential_never_trivial(self):
        M = module_from_barcode(F2, 2, [(0, INF)])
        assert not eps_trivial(M, 5)

    def test_defects(self):
        assert triviality_defect(module_from_barcode(F2, 2, [(0, 1)])) == 1
        assert triviality_defect(zero_module(F2, 1)) == 0
        assert triviality_defect(module_from_barcode(F2, 2, [(0, INF)])) == INF

    @given(modules(), st.integers(0, 5))
    @settings(max_examples=60, deadline=None)
    def test_barcode_and_nilpotency_agree(self, M, eps):
        # eps_trivial asserts the two criteria agree internally
        eps_trivial(M, eps)

    @given(modules())
    @settings(max_examples=60, deadline=None)
    def test_defect_is_least(self, M):
        d = triviality_defect(M)
        if d == INF:
            assert not eps_trivial(M, M.T + 1)
        else:
            assert eps_trivial(M, d)
            if d > 0:
                assert not eps_trivial(M, d - 1)


class TestDirectSum:
    def test_identity_with_zero(self):
        M = mod([1, 1], [[1]])
        assert barcode(direct_sum(M, zero_module(F2, 1))) == barcode(M)

    def test_union_of_bars(self):
        M = module_from_barcode(F2, 2, [(0, 1)])
        N = module_from_barcode(F2, 2, [(1, 2)])
        assert barcode(direct_sum(M, N)) == Barcode.of([(0, 1), (1, 2)])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            direct_sum(zero_module(F2, 1), zero_module(F2, 2))

    @given(modules(), modules())
    @settings(max_examples=40, deadline=None)
    def test_defect_of_sum_is_max(self, M, N):
        if M.T != N.T:
            return
        L = direct_sum(M, N)
        assert triviality_defect(L) == max(triviality_defect(M), triviality_defect(N))
        left = sorted(barcode(M).bars + barcode(N).bars)
        assert list(barcode(L).bars) == left


class TestBottleneck:
    def test_essential_shift(self):
        assert bottleneck_distance(Barcode.of([(0, INF)]), Barcode.of([(2, INF)])) == 2

    def test_unmatched_threshold(self):
        assert bottleneck_distance(Barcode.of([(0, 4)]), Barcode.of([])) == 2

    def test_empty(self):
        assert bottleneck_distance(Barcode.of([]), Barcode.of([])) == 0

    def test_infinite_on_essential_mismatch(self):
        assert bottleneck_distance(Barcode.of([(0, INF)]), Barcode.of([])) == INF

    def test_point_comparison(self):
        assert point_comparison_defect(module_from_barcode(F2, 2, [(0, INF)])) == 0
        assert point_comparison_defect(module_from_barcode(F2, 3, [(2, INF)])) == 2
        assert point_comparison_defect(zero_module(F2, 2)) == INF

    @given(modules(max_dim=2, t_max=3), modules(max_dim=2, t_max=3))
    @settings(max_examples=40, deadline=None)
    def test_pseudometric(self, M, N):
        bm, bn = barcode(M), barcode(N)
        assert bottleneck_distance(bm, bm) == 0
        assert bottleneck_distance(bm, bn) == bottleneck_distance(bn, bm)

    @given(modules(max_dim=2, t_max=3), modules(max_dim=2, t_max=3), modules(max_dim=2, t_max=3))
    @settings(max_examples=40, deadline=None)
    def test_triangle_inequality(self, A, B, C):
        ab = bottleneck_distance(barcode(A), barcode(B))
        bc = bottleneck_distance(barcode(B), barcode(C))
        ac = bottleneck_distance(barcode(A), barcode(C))
        assert ac <= ab + bc


class TestBruteforce:
    def test_trivial_module_interleaves_with_zero(self):
        M = module_from_barcode(F2, 2, [(0, 1)])
        assert interleaving_bruteforce(M, zero_module(F2, 2), 1)

    def test_essential_never_interleaves_with_zero(self):
        M = module_from_barcode(F2, 2, [(0, INF)])
        for eps in range(4):
            assert not interleaving_bruteforce(M, zero_module(F2, 2), eps)

    def test_identity_at_zero(self):
        M = module_from_barcode(F2, 2, [(0, 2), (1, INF)])
        assert interleaving_bruteforce(M, M, 0)

    def test_monotone_in_eps(self):
        rng = random.Random(5)
        for _ in range(20):
            T = rng.randint(0, 3)
            M = random_module(rng, F2, max_dim=2, T=T)
            N = random_module(rng, F2, max_dim=2, T=T)
            prev = False
            for eps in range(0, T + 2):
                cur = interleaving_bruteforce(M, N, eps)
                assert cur or not prev
                prev = cur

    def test_guards(self):
        with pytest.raises(TooLarge):
            interleaving_bruteforce(zero_module(F3, 1), zero_module(F3, 1), 0)
        with pytest.raises(TooLarge):
            interleaving_bruteforce(zero_module(F2, 5), zero_module(F2, 5), 0)
        big = module_from_barcode(F2, 1, [(0, 1)] * 3)
        with pytest.raises(TooLarge):
            interleaving_bruteforce(big, big, 0)

    def test_agrees_with_bottleneck(self):
        rng = random.Random(11)
        for _ in range(30):
            T = rng.randint(0, 3)
            M = random_module(rng, F2, max_dim=2, T=T)
            N = random_module(rng, F2, max_dim=2, T=T)
            d = bottleneck_distance(barcode(M), barcode(N))
            least = None
            for eps in range(0, T + 2):
                if interleaving_bruteforce(M, N, eps):
                    least = eps
                    break
            if d == INF:
                assert least is None
            else:
                assert least == d


def test_shift_morphism():
    M = mod([1, 1, 1], [[1], [0]])
    s = ShiftMorphism(2)
    assert s.matrix(M, 0)[0, 0] == 0
    assert ShiftMorphism(0).matrix(M, 1)[0, 0] == 1
