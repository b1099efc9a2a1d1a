"""Automorphism representations and the explicit element families.

An automorphism is a structure-preserving matrix, optionally composed with
the perp-duality U -> (gU)^perp (projective models only).  Oriflamme
dualities need no flag: a matrix with Dickson invariant 1 swaps the two
fork types by itself.
"""

from __future__ import annotations

from functools import cached_property

from .coxeter import TypePermutation
from .gf2 import BitMat, GF2Error, Subspace, echelon, nullspace
from .geometry import (
    BuildingModel,
    MinusQuadricModel,
    OriflammeModel,
    ProjectiveModel,
    Simplex,
    SymplecticModel,
    Vertex,
    make_model,
    make_simplex,
)


class MorphismError(ValueError):
    pass


J1 = BitMat.from_dense([[0, 1], [1, 0]])
J2 = BitMat.from_dense([[0, 0, 1], [1, 0, 1], [1, 1, 0]])
J3 = BitMat.from_dense([[0, 0, 1, 1], [1, 0, 0, 1], [1, 0, 0, 0], [1, 1, 0, 0]])


def block_diag(*blocks: BitMat) -> BitMat:
    dim = sum(b.ncols for b in blocks)
    rows = []
    off = 0
    for b in blocks:
        for r in b.rows:
            rows.append(r << off)
        off += b.ncols
    return BitMat(rows, dim)


class Automorphism:
    """A building automorphism given by a matrix and an optional perp twist."""

    def __init__(self, model: BuildingModel, matrix: BitMat, dual: bool = False,
                 name: str | None = None):
        self.model = model
        self.matrix = matrix
        self.dual = dual
        self.name = name
        self._validate()

    def _validate(self):
        m = self.model
        g = self.matrix
        if g.nrows != m.dim or g.ncols != m.dim:
            raise MorphismError("matrix size does not match the model")
        if isinstance(m, ProjectiveModel):
            try:
                g.inverse()
            except GF2Error:
                raise MorphismError("projective automorphisms must be invertible")
        else:
            if self.dual:
                raise MorphismError("perp dualities exist only on projective models")
            if not m.space.preserves_form(g):
                raise MorphismError("matrix does not preserve the model's form")

    # -- basic structure ---------------------------------------------------

    @cached_property
    def dickson(self) -> int:
        if isinstance(self.model, OriflammeModel):
            return self.model.space.dickson_invariant(self.matrix)
        return 0

    @cached_property
    def type_permutation(self) -> TypePermutation:
        n = self.model.n
        if isinstance(self.model, ProjectiveModel) and self.dual:
            return TypePermutation(tuple(n + 1 - t for t in range(1, n + 1)))
        if isinstance(self.model, OriflammeModel) and self.dickson == 1:
            images = list(range(1, n + 1))
            images[n - 2], images[n - 1] = n, n - 1
            return TypePermutation(tuple(images))
        return TypePermutation.identity(n)

    def is_identity(self) -> bool:
        return not self.dual and self.matrix.is_identity()

    @cached_property
    def vector_table(self) -> list:
        """Image of every ambient vector under the matrix."""
        g = self.matrix
        d = self.model.dim
        tbl = [0] * (1 << d)
        basis = [g.apply(1 << i) for i in range(d)]
        for x in range(1, 1 << d):
            low = x & -x
            tbl[x] = tbl[x ^ low] ^ basis[low.bit_length() - 1]
        return tbl

    # -- action ----------------------------------------------------------------

    def vertex_image_rows(self, rows) -> tuple:
        tbl = self.vector_table
        img = [tbl[r] for r in rows]
        if self.dual:
            return nullspace(img, self.model.dim)
        return echelon(img)

    def apply_vertex(self, v: Vertex) -> Vertex:
        rows = self.vertex_image_rows(v.rows)
        if self.dual:
            return Vertex(self.model.n + 1 - v.type, rows)
        if isinstance(self.model, OriflammeModel) and v.type > self.model.n - 2:
            return Vertex(self.model.max_singular_class(rows), rows)
        return Vertex(v.type, rows)

    def apply(self, sigma: Simplex) -> Simplex:
        return make_simplex(self.apply_vertex(v) for v in sigma)

    # -- group structure ----------------------------------------------------------

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        if self.model is not other.model:
            raise MorphismError("automorphisms live on different models")
        g2, g1 = self.matrix, other.matrix
        if other.dual:
            mat = g2.inverse().transpose() * g1
            return Automorphism(self.model, mat, dual=not self.dual)
        return Automorphism(self.model, g2 * g1, dual=self.dual)

    def inverse(self) -> "Automorphism":
        if not self.dual:
            return Automorphism(self.model, self.matrix.inverse())
        # (g,1)^-1 = (g^T, 1) since (g,1)(g^T,1) = (g^-T g^T, 0) = 1
        return Automorphism(self.model, self.matrix.transpose(), dual=True)

    def conjugate(self, h: "Automorphism") -> "Automorphism":
        """h^-1 . self . h"""
        return h.inverse().compose(self).compose(h)

    def order(self, cap: int = 1 << 16) -> int:
        p = self
        for k in range(1, cap + 1):
            if p.is_identity():
                return k
            p = p.compose(self)
        raise MorphismError(f"order exceeds cap {cap}")

    def __eq__(self, other):
        return (
            isinstance(other, Automorphism)
            and self.model is other.model
            and self.matrix == other.matrix
            and self.dual == other.dual
        )

    def __hash__(self):
        return hash((id(self.model), self.matrix, self.dual))

    def __repr__(self):
        return self.name or f"Automorphism({self.model.kind}{self.model.n}, dual={self.dual})"

    # -- point-level data ------------------------------------------------------------

    def points(self):
        """All polar/projective points (as vectors spanning them)."""
        m = self.model
        for v in m.enumerate_vertices(1):
            yield v.rows[0]

    def is_absolute_point(self, x: int) -> bool:
        tbl = self.vector_table
        m = self.model
        if isinstance(m, ProjectiveModel):
            if not self.dual:
                raise MorphismError("absolute points of A_n need a duality")
            # x lies in its image hyperplane (gx)^perp
            return (x & tbl[x]).bit_count() % 2 == 0
        return m.space.form(x, tbl[x]) == 0

    def absolute_points(self) -> set:
        return {x for x in self.points() if self.is_absolute_point(x)}

    def fixed_space(self) -> Subspace:
        d = self.model.dim
        gi = self.matrix + BitMat.identity(d)
        return Subspace(nullspace([gi.col(j) for j in range(d)], d), d, canonical=True)

    def fixed_vertices(self, t: int) -> int:
        return sum(1 for v in self.model.enumerate_vertices(t) if self.apply_vertex(v) == v)

    def to_json(self) -> dict:
        return {
            "model": self.model.describe(),
            "matrix_rows_hex": self.matrix.to_hex_rows(),
            "duality": self.dual,
        }


def identity_automorphism(model: BuildingModel) -> Automorphism:
    return Automorphism(model, BitMat.identity(model.dim), name="identity")


# -- the explicit families ---------------------------------------------------------


def family_an_duality(n: int, model: ProjectiveModel | None = None) -> Automorphism:
    """The duality of A_n(2) whose absolute points are two hyperplanes."""
    if n < 2:
        raise MorphismError("the duality family needs n >= 2")
    head = J2 if n % 2 == 0 else J3
    blocks = [head] + [J1] * ((n + 1 - head.ncols) // 2)
    mat = block_diag(*blocks)
    model = model or make_model("A", n)
    return Automorphism(model, mat, dual=True, name=f"an-duality:{n}")


def _sp_base(n: int) -> BitMat:
    g2 = BitMat.from_dense([
        [0, 1, 0, 0],
        [1, 0, 0, 0],
        [1, 0, 0, 1],
        [0, 0, 1, 0],
    ])
    g3 = BitMat.from_dense([
        [0, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 1],
        [1, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0],
    ])
    if n == 2:
        return g2
    if n == 3:
        return g3
    inner = _sp_base(n - 2)
    d = 2 * n
    rows = [1 << 0, (1 << 0) | (1 << 1)]
    rows += [r << 2 for r in inner.rows]
    rows += [1 << (d - 2), (1 << (d - 2)) | (1 << (d - 1))]
    return BitMat(rows, d)


def _padded(base: BitMat, j: int) -> BitMat:
    if j == 0:
        return base
    return block_diag(BitMat.identity(j), base, BitMat.identity(j))


def family_sp(n: int, j: int = 0, model: SymplecticModel | None = None) -> Automorphism:
    """g_n (j=0) or g_n^{(j)} in Sp_{2n}(2), acting on C_n(2)."""
    if n < 2 or j < 0 or n - j < 2:
        raise MorphismError(f"no symplectic family element for n={n}, j={j}")
    mat = _padded(_sp_base(n - j), j)
    model = model or make_model("C", n)
    return Automorphism(model, mat, name=f"sp:{n}:{j}")


def _ominus_base(n: int) -> BitMat:
    g2 = BitMat.from_dense([
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
    ])
    g3 = BitMat.from_dense([
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 1, 0],
    ])
    if n == 2:
        return g2
    if n == 3:
        return g3
    inner = _ominus_base(n - 2)
    d = 2 * n + 2
    rows = [1 << 0, (1 << 0) | (1 << 1)]
    rows += [r << 2 for r in inner.rows]
    rows += [1 << (d - 2), (1 << (d - 2)) | (1 << (d - 1))]
    return BitMat(rows, d)


def family_ominus(n: int, j: int = 0, model: MinusQuadricModel | None = None) -> Automorphism:
    """g_n (j=0) or g_n^{(j)} in GO^-_{2n+2}(2), acting on B_n(2,4)."""
    if n < 2 or j < 0 or n - j < 2:
        raise MorphismError(f"no minus-quadric family element for n={n}, j={j}")
    mat = _padded(_ominus_base(n - j), j)
    model = model or make_model("B24", n)
    return Automorphism(model, mat, name=f"ominus:{n}:{j}")


def family_oplus(n: int, j: int = 0, model: OriflammeModel | None = None) -> Automorphism:
    """h_n = g_{n-1} (of the minus list) reused in GO^+_{2n}(2), on D_n(2)."""
    if n < 4 or j < 0 or n - j < 4:
        raise MorphismError(f"no plus-quadric family element for n={n}, j={j}")
    mat = _padded(_ominus_base(n - 1 - j), j)
    model = model or make_model("D", n)
    return Automorphism(model, mat, name=f"oplus:{n}:{j}")


def c3_remark_element(model: SymplecticModel | None = None) -> Automorphism:
    """The chamber-free strongly exceptional domestic element of C_3(2)."""
    entries = [(1, 1), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 5), (5, 4), (5, 5), (6, 6)]
    rows = [0] * 6
    for i, j in entries:
        rows[i - 1] |= 1 << (j - 1)
    model = model or make_model("C", 3)
    return Automorphism(model, BitMat(rows, 6), name="c3-remark")


FAMILY_BUILDERS = {
    "an-duality": lambda n, j=0: family_an_duality(n),
    "sp": family_sp,
    "ominus": family_ominus,
    "oplus": family_oplus,
}


def family_by_name(spec: str) -> Automorphism:
    """Parse 'sp:3:1', 'an-duality:4', 'oplus:4:0', or 'c3-remark'."""
    if spec == "c3-remark":
        return c3_remark_element()
    parts = spec.split(":")
    name = parts[0]
    if name not in FAMILY_BUILDERS:
        raise MorphismError(f"unknown family {name!r}")
    args = [int(p) for p in parts[1:]]
    return FAMILY_BUILDERS[name](*args)
