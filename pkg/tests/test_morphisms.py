import itertools

import pytest

from oppgeom.gf2 import BitMat, Subspace, rank
from oppgeom.geometry import make_model, make_simplex, simplex_types
from oppgeom.morphisms import (
    Automorphism,
    MorphismError,
    c3_remark_element,
    family_an_duality,
    family_by_name,
    family_ominus,
    family_oplus,
    family_sp,
    identity_automorphism,
)

A2 = make_model("A", 2)
A3 = make_model("A", 3)
C2 = make_model("C", 2)
C3 = make_model("C", 3)


def test_identity():
    th = identity_automorphism(C2)
    assert th.order() == 1
    assert th.type_permutation.is_identity()
    assert len(th.absolute_points()) == 15
    assert th.fixed_space().dim == 4


def test_family_orders():
    assert family_an_duality(2).order() == 8
    assert family_an_duality(3).order() == 4
    assert family_an_duality(4).order() == 8
    assert family_an_duality(5).order() == 4
    assert c3_remark_element().order() == 6


def test_family_validation():
    with pytest.raises(MorphismError):
        family_sp(2, 1)
    with pytest.raises(MorphismError):
        family_oplus(3, 0)
    with pytest.raises(MorphismError):
        family_by_name("nope:3")


def test_an_duality_absolute_points_two_hyperplanes():
    # absolute iff X_0 X_1 = 0 (bits 0 and 1 of the vector)
    for n in (2, 3, 4):
        th = family_an_duality(n)
        absolutes = th.absolute_points()
        expected = {
            x for x in range(1, 1 << (n + 1)) if not ((x & 1) and (x >> 1) & 1)
        }
        # points are canonical spanning vectors: every projective point once
        assert absolutes == expected


def test_sp_absolute_points():
    # for even subscripts the absolute points are {X : X_{m-1} X_m = 0}
    for m in (2, 4):
        th = family_sp(m)
        d = 2 * m
        expected = {
            x
            for x in range(1, 1 << d)
            if not (((x >> (m - 2)) & 1) and ((x >> (m - 1)) & 1))
        }
        assert th.absolute_points() == expected
    # odd subscripts: exactly a union of two distinct hyperplanes
    th = family_sp(3)
    expected = {
        x for x in range(1, 1 << 6) if not (((x >> 1) & 1) and (((x >> 0) ^ (x >> 2)) & 1))
    }
    assert th.absolute_points() == expected


def test_fixed_space_dimensions():
    for n in (2, 3, 4, 5):
        assert family_sp(n).fixed_space().projective_dim == n - 2
    for n, j in [(3, 1), (4, 1), (4, 2)]:
        assert family_sp(n, j).fixed_space().projective_dim == n - 2 + j
    for n in (2, 3):
        assert family_ominus(n).fixed_space().projective_dim == n
    assert family_oplus(4).fixed_space().projective_dim == 3
    assert family_oplus(5, 1).fixed_space().projective_dim == 5


def test_dickson_and_type_permutation():
    assert family_oplus(4).dickson == 0
    assert family_oplus(4).type_permutation.is_identity()
    h5 = family_oplus(5)
    assert h5.dickson == 1
    assert h5.type_permutation.images == (1, 2, 3, 5, 4)
    h51 = family_oplus(5, 1)
    assert h51.dickson == 0 and h51.type_permutation.is_identity()
    d3 = family_an_duality(3)
    assert d3.type_permutation.images == (3, 2, 1)


def test_apply_preserves_incidence_and_types():
    cases = [
        (C2, family_sp(2)),
        (C3, family_sp(3)),
        (A3, family_an_duality(3)),
    ]
    for model, th in cases:
        pi = th.type_permutation
        chams = model.chambers()[:: max(1, len(model.chambers()) // 40)]
        for c in chams:
            img = th.apply(c)
            assert simplex_types(img) == {pi.image(t) for t in simplex_types(c)}
            for u, v in itertools.combinations(img, 2):
                assert model.incident(u, v)


def test_compose_matches_pointwise_composition():
    th = family_an_duality(3)
    col = Automorphism(A3, th.matrix, dual=False)
    samples = A3.chambers()[::37]
    for a, b in [(th, th), (th, col), (col, th), (col, col)]:
        ab = a.compose(b)
        for c in samples:
            assert ab.apply(c) == a.apply(b.apply(c))
    assert th.compose(th.inverse()).is_identity()
    assert th.inverse().compose(th).is_identity()


def test_order_matches_iterated_apply():
    th = family_an_duality(2)
    c = A2.chambers()[5]
    k = th.order()
    img = c
    for _ in range(k):
        img = th.apply(img)
    assert img == c


def test_dimension_parity_of_absolute_subspaces():
    # every m-space of absolute points meets its image in codim m-k even
    for n, step in [(2, 1), (3, 11)]:
        model = make_model("A", n)
        mats = _all_invertible(n + 1)
        for mat in mats[::step]:
            th = Automorphism(model, mat, dual=True)
            absolutes = th.absolute_points()
            for t in model.vertex_types():
                for v in model.enumerate_vertices(t):
                    space = Subspace(v.rows, model.dim, canonical=True)
                    if not all(x in absolutes for x in space.nonzero_vectors()):
                        continue
                    img = th.apply_vertex(v)
                    ispace = Subspace(img.rows, model.dim, canonical=True)
                    m = space.projective_dim
                    k = space.intersect(ispace).projective_dim
                    assert (m - k) % 2 == 0, (mat, v)


def _all_invertible(d):
    out = []
    for rows in itertools.product(range(1, 1 << d), repeat=d):
        if len(rows) == d and rank(rows) == d:
            out.append(BitMat(rows, d))
        if len(out) >= 400:
            break
    return out


def test_c3_remark_fixed_structure():
    # three points, one line, three planes through it
    th = c3_remark_element()
    fixed = {t: [v for v in C3.enumerate_vertices(t) if th.apply_vertex(v) == v] for t in (1, 2, 3)}
    assert len(fixed[1]) == 3 and len(fixed[2]) == 1 and len(fixed[3]) == 3
    line = Subspace(fixed[2][0].rows, 6, canonical=True)
    for p in fixed[1]:
        assert not line.contains(p.rows[0])
    for pl in fixed[3]:
        assert Subspace(pl.rows, 6, canonical=True).contains_subspace(line)


def test_json_roundtrip():
    th = family_sp(3)
    blob = th.to_json()
    mat = BitMat.from_hex_rows(blob["matrix_rows_hex"], 6)
    again = Automorphism(C3, mat, dual=blob["duality"])
    assert again == Automorphism(C3, th.matrix)
