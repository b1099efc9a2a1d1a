import itertools

import pytest

from oppgeom.coxeter import build_coxeter
from oppgeom.gf2 import BitMat, Subspace
from oppgeom.geometry import (
    ModelError,
    ScaleError,
    Vertex,
    make_model,
    make_simplex,
    simplex_types,
)


def test_chamber_counts():
    assert make_model("A", 2).chamber_count() == 21
    assert make_model("C", 2).chamber_count() == 45
    assert make_model("C", 3).chamber_count() == 2835
    assert make_model("A", 3).chamber_count() == 315
    assert make_model("D", 4).chamber_count() == 42525
    assert make_model("B24", 2).chamber_count() == 135


def test_enumerated_counts_match_poincare():
    for kind, n in [("A", 2), ("A", 3), ("C", 2), ("C", 3), ("B24", 2), ("D", 4)]:
        model = make_model(kind, n)
        assert len(list(model.enumerate_chambers())) == model.chamber_count()
        for t in model.vertex_types():
            count = sum(1 for _ in model.enumerate_vertices(t))
            assert count == model.flag_count([t]), (kind, n, t)


def test_flag_counts_match_poincare_on_pairs():
    model = make_model("C", 3)
    for J in [(1, 2), (1, 3), (2, 3), (1, 2, 3)]:
        assert sum(1 for _ in model.enumerate_flags(J)) == model.flag_count(J)
    d4 = make_model("D", 4)
    for J in [(3, 4), (1, 3), (2,), (1, 3, 4)]:
        assert sum(1 for _ in d4.enumerate_flags(J)) == d4.flag_count(J)


def test_enumeration_cap():
    model = make_model("C", 3, enumeration_cap=10)
    with pytest.raises(ScaleError):
        list(model.enumerate_chambers())


def test_panel_thickness():
    for kind, n, expected in [
        ("A", 2, {1: {3}, 2: {3}}),
        ("C", 2, {1: {3}, 2: {3}}),
        ("B24", 2, {1: {3}, 2: {5}}),
    ]:
        assert make_model(kind, n).panel_sizes() == expected
    d4 = make_model("D", 4)
    assert d4.panel_sizes() == {1: {3}, 2: {3}, 3: {3}, 4: {3}}


def test_incidence_examples():
    d4 = make_model("D", 4)
    # two maximal singulars of different classes meeting in a plane are incident
    chamber = d4.standard_chamber()
    by_type = {v.type: v for v in chamber}
    assert d4.incident(by_type[3], by_type[4])
    assert d4.incident(by_type[1], by_type[4])
    # distinct max singulars of the same class are never incident
    m3s = list(d4.enumerate_vertices(3))[:5]
    for a, b in itertools.combinations(m3s, 2):
        assert not d4.incident(a, b)


def test_weyl_distance_basics():
    model = make_model("A", 2)
    chams = model.chambers()
    c0 = model.standard_chamber()
    i0 = model.chamber_index(c0)
    row = model.bfs_row(i0)
    assert row[i0].is_identity()
    w0 = model.cox.longest_element()
    lengths = sorted(w.length() for w in row)
    assert lengths[-1] == w0.length() == 3
    # delta(C,D) = delta(D,C)^-1
    for j in range(len(chams)):
        back = model.bfs_row(j)[i0]
        assert back == row[j].inverse()
    # number of opposite chambers is 2^{l(w0)}
    assert sum(1 for w in row if w == w0) == 8


def test_opposite_fast_vs_oracle_a2():
    model = make_model("A", 2)
    chams = model.chambers()
    w0 = model.cox.longest_element()
    opp_pairs = set()
    for i, c in enumerate(chams):
        row = model.bfs_row(i)
        for j, d in enumerate(chams):
            if row[j] == w0:
                for su in _subsimplices(c):
                    for sv in _subsimplices(d):
                        opp_pairs.add((su, sv))
    subs = {}
    for c in chams:
        subs[c] = _subsimplices(c)
    for c in chams:
        for d in chams:
            for su in subs[c]:
                for sv in subs[d]:
                    fast = model.opposite(su, sv)
                    oracle = (su, sv) in opp_pairs and simplex_types(sv) == {
                        model.dual_type(t) for t in simplex_types(su)
                    }
                    assert fast == oracle, (su, sv)


def _subsimplices(c):
    out = []
    for r in range(1, len(c) + 1):
        for combo in itertools.combinations(c, r):
            out.append(make_simplex(combo))
    return out


def test_opposite_examples():
    # C2: <e1> and <e2> are collinear, not opposite
    c2 = make_model("C", 2)
    p1 = Vertex(1, (1,))
    p2 = Vertex(1, (2,))
    assert not c2.vertices_opposite(p1, p2)
    assert not c2.opposite(make_simplex([p1]), make_simplex([p1]))
    p4 = Vertex(1, (8,))
    assert c2.opposite(make_simplex([p1]), make_simplex([p4]))
    # A3: point versus non-incident hyperplane
    a3 = make_model("A", 3)
    pt = Vertex(1, (1,))
    hyp = Vertex(3, tuple(1 << i for i in range(1, 4)))
    assert a3.opposite(make_simplex([pt]), make_simplex([hyp]))
    hyp2 = Vertex(3, tuple(1 << i for i in range(3)))
    assert not a3.opposite(make_simplex([pt]), make_simplex([hyp2]))


def test_completion_reduces_every_chamber():
    for kind, n, step in [("A", 2, 1), ("A", 3, 1), ("C", 2, 1), ("C", 3, 7), ("B24", 2, 1)]:
        model = make_model(kind, n)
        std = model.standard_chamber()
        for c in model.chambers()[::step]:
            g = model.completion(c)
            if model.space is not None:
                assert model.space.preserves_form(g)
            assert model.apply_matrix(g, std) == c
            r = g.inverse()
            assert model.apply_matrix(r, c) == std


def test_completion_d4_sampled():
    model = make_model("D", 4)
    std = model.standard_chamber()
    chams = model.chambers()
    for c in chams[:500] + chams[-500:] + chams[10000:10100]:
        g = model.completion(c)
        assert model.space.preserves_form(g)
        assert model.apply_matrix(g.inverse(), c) == std
        # the reduction is class-preserving by construction
        assert model.space.dickson_invariant(g) == 0


def test_projection_of_containing_chamber_is_itself():
    model = make_model("C", 2)
    c = model.standard_chamber()
    sigma = make_simplex([c[0]])
    idx = model.chamber_index(c)
    assert model.project_chamber(sigma, idx) == idx
    assert model.project_simplex(sigma, c) == c


def test_type_duality_uses_opposition_involution():
    d4 = make_model("D", 4)
    assert d4.dual_type(3) == 3 and d4.dual_type(4) == 4  # n even: fixed
    d5 = make_model("D", 5, enumeration_cap=10 ** 9)
    assert d5.dual_type(4) == 5 and d5.dual_type(5) == 4  # n odd: swapped
    a3 = make_model("A", 3)
    assert a3.dual_type(1) == 3
