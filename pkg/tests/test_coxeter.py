import pytest
from hypothesis import given, settings, strategies as st

from oppgeom.coxeter import (
    CoxeterError,
    TypePermutation,
    build_coxeter,
    max_double_coset,
)

SMALL_TYPES = [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("F", 4)]


def test_positive_root_counts():
    assert build_coxeter("A", 2).nroots == 3
    assert build_coxeter("F", 4).nroots == 24
    assert build_coxeter("E", 6).nroots == 36
    assert build_coxeter("E", 7).nroots == 63
    assert build_coxeter("E", 8).nroots == 120
    assert build_coxeter("B", 3).nroots == 9
    assert build_coxeter("D", 4).nroots == 12


def test_bad_types_rejected():
    with pytest.raises(CoxeterError):
        build_coxeter("E", 5)
    with pytest.raises(CoxeterError):
        build_coxeter("F", 3)
    with pytest.raises(CoxeterError):
        build_coxeter("X", 4)
    with pytest.raises(CoxeterError):
        build_coxeter("A", 0)


def test_root_order_anchors_e7():
    sys = build_coxeter("E", 7)
    assert sys.roots[43] == (1, 1, 1, 2, 1, 1, 1)
    assert sys.roots[44] == (0, 1, 1, 2, 2, 1, 1)
    assert sys.roots[45] == (1, 1, 2, 2, 2, 1, 0)


def test_highest_roots():
    assert build_coxeter("F", 4).highest_root() == (2, 3, 4, 2)
    assert build_coxeter("E", 6).highest_root() == (1, 2, 2, 3, 2, 1)
    assert build_coxeter("E", 7).highest_root() == (2, 2, 3, 4, 3, 2, 1)
    assert build_coxeter("E", 8).highest_root() == (2, 3, 4, 6, 5, 4, 3, 2)


def test_lengths():
    for label, rank in SMALL_TYPES:
        sys = build_coxeter(label, rank)
        assert sys.identity.length() == 0
        w0 = sys.longest_element()
        assert w0.length() == sys.nroots
        assert w0.inversion_set() == frozenset(range(sys.nroots))
        assert (w0 * w0).is_identity()
    assert build_coxeter("E", 8).longest_element().length() == 120


def test_simple_reflection_inversion():
    sys = build_coxeter("B", 3)
    for i in range(1, 4):
        s = sys.simple_reflection(i)
        assert s.length() == 1
        (idx,) = s.inversion_set()
        assert sys.roots[idx] == sys._simple_root(i)


def test_length_complement_identity():
    sys = build_coxeter("B", 3)
    w0 = sys.longest_element()
    for w in sys.min_coset_transversal([]):  # all of W
        assert (w0 * w).length() == w0.length() - w.length()
        assert w.length() == len(w.inversion_set())


def test_opposition_involution():
    assert build_coxeter("F", 4).opposition_involution().is_identity()
    assert build_coxeter("E", 6).opposition_involution().images == (6, 2, 5, 4, 3, 1)
    assert build_coxeter("A", 3).opposition_involution().images == (3, 2, 1)
    assert build_coxeter("D", 4).opposition_involution().is_identity()
    assert build_coxeter("D", 5).opposition_involution().images == (1, 2, 3, 5, 4)
    assert build_coxeter("E", 7).opposition_involution().is_identity()
    for label, rank in SMALL_TYPES:
        sys = build_coxeter(label, rank)
        op = sys.opposition_involution()
        assert op.compose(op).is_identity()
        assert op.preserves_coxeter_matrix(sys.coxeter_matrix)


def test_parabolic_diameters_e8():
    sys = build_coxeter("E", 8)
    assert sys.parabolic_diameter(range(1, 9)) == 120
    assert sys.parabolic_diameter([1, 2, 3, 4, 5, 6, 7]) == 63  # E7 subdiagram
    assert sys.parabolic_diameter([2, 3, 4, 5, 6, 7]) == 30  # D6 subdiagram
    assert sys.parabolic_diameter([2, 3, 4, 5]) == 12  # D4 subdiagram
    assert sys.parabolic_diameter([]) == 0


def test_displacement_from_diagram():
    e8 = build_coxeter("E", 8)
    assert e8.displacement_from_diagram({1, 6, 7, 8}, capped=False) == 107
    assert e8.displacement_from_diagram({1, 6, 7, 8}, capped=True) == 108
    assert e8.displacement_from_diagram(set(range(1, 9)), capped=True) == 120
    f4 = build_coxeter("F", 4)
    assert f4.displacement_from_diagram({1}, capped=True) == 15
    with pytest.raises(CoxeterError):
        f4.displacement_from_diagram(set(), capped=False)


def test_e8_displacement_menu():
    # the menu of possible nonzero displacements in an E8 building
    e8 = build_coxeter("E", 8)
    menu = {
        e8.displacement_from_diagram({8}, capped=True),
        e8.displacement_from_diagram({1, 8}, capped=True),
        e8.displacement_from_diagram({1, 6, 7, 8}, capped=False),
        e8.displacement_from_diagram({1, 6, 7, 8}, capped=True),
        e8.displacement_from_diagram(set(range(1, 9)), capped=False),
        e8.displacement_from_diagram(set(range(1, 9)), capped=True),
    }
    assert menu == {57, 90, 107, 108, 119, 120}


def test_min_coset_transversal_small():
    sys = build_coxeter("B", 2)
    assert len(sys.min_coset_transversal([1, 2])) == 1
    assert len(sys.min_coset_transversal([])) == 8
    t = sys.min_coset_transversal([1])
    assert len(t) == 4
    for w in t:
        assert all(w.act(sys.root_index[sys._simple_root(1)] + 1) > 0 for _ in [0])


def test_f4_transversal_weight_sum():
    sys = build_coxeter("F", 4)
    # the B2 parabolic quotient; the A2 one has 9398025 cosets weighted by 2^l
    assert sum(2 ** w.length() for w in sys.min_coset_transversal([2, 3])) == 4385745
    assert sum(2 ** w.length() for w in sys.min_coset_transversal([3, 4])) == 9398025
    t1 = sys.min_coset_transversal([2, 3, 4])
    assert sum(2 ** w.length() for w in t1) == 69615
    t4 = sys.min_coset_transversal([1, 2, 3])
    assert sum(2 ** w.length() for w in t4) == 69615


def test_reflection_of_roots():
    f4 = build_coxeter("F", 4)
    s_phi = f4.reflection((2, 3, 4, 2))
    assert s_phi.length() == 15
    assert (s_phi * s_phi).is_identity()
    s_phi2 = f4.reflection((1, 2, 3, 2))
    assert s_phi2.length() == 15
    # s_phi = w0 w_{2,3,4}
    w0 = f4.longest_element()
    assert s_phi == w0 * f4.parabolic_longest([2, 3, 4])
    # s_phi s_(0122) = w0 w_{2,3}
    s2 = f4.reflection((0, 1, 2, 2))
    assert s_phi * s2 == w0 * f4.parabolic_longest([2, 3])
    assert (s_phi * s2).length() == 20


def test_max_double_coset():
    sys = build_coxeter("B", 3)
    w0 = sys.longest_element()
    # brute force comparison on a few double cosets
    all_w = sys.min_coset_transversal([])
    for J, K in [((1,), (2, 3)), ((1, 2), (1, 2)), ((3,), (1,))]:
        wj = [w for w in all_w if w.in_parabolic(J)]
        wk = [w for w in all_w if w.in_parabolic(K)]
        for seed in all_w[:12]:
            coset = {(a * seed * b).perm: a * seed * b for a in wj for b in wk}
            best = max(coset.values(), key=lambda w: w.length())
            got = max_double_coset(sys, J, seed, K)
            assert got == best
    assert max_double_coset(sys, range(1, 4), w0, range(1, 4)) == w0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=3), min_size=0, max_size=12))
def test_word_length_subadditive_and_inverse(word):
    sys = build_coxeter("B", 3)
    w = sys.identity
    for i in word:
        w = w * sys.simple_reflection(i)
    assert w.length() <= len(word)
    assert (w * w.inverse()).is_identity()
    assert w.inverse().length() == w.length()
    rw = w.reduced_word()
    assert len(rw) == w.length()
    v = sys.identity
    for i in rw:
        v = v * sys.simple_reflection(i)
    assert v == w
