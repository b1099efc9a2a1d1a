"""The four classical building models over GF(2).

Kinds: projective space A_n(2), symplectic polar space C_n(2), the minus
quadric B_n(2,4) on GF(2)^{2n+2}, and the oriflamme complex D_n(2).
Vertices are canonical subspaces (plus a class tag baked into the type for
the two oriflamme fork types).  Chambers are maximal typed flags.

The chamber-graph Weyl distance is the oracle used to validate the fast
opposition predicates; at desk scale the graph is materialized and BFS rows
are cached per source chamber.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, NamedTuple, Sequence

from .coxeter import CoxeterSystem, TypePermutation, WeylElement, build_coxeter
from .gf2 import (
    DOT,
    QMINUS,
    QPLUS,
    SYMPLECTIC,
    BitMat,
    FormedSpace,
    GF2Error,
    Subspace,
    echelon,
    parity,
    rank,
)


class ScaleError(RuntimeError):
    """The model is too large for the requested exhaustive operation."""


class ModelError(ValueError):
    pass


class Vertex(NamedTuple):
    type: int
    rows: tuple  # echelon basis rows

    def subspace(self, ambient: int) -> Subspace:
        return Subspace(self.rows, ambient, canonical=True)


Simplex = tuple  # of Vertex, sorted by type


def make_simplex(vertices: Iterable[Vertex]) -> Simplex:
    vs = sorted(vertices, key=lambda v: v.type)
    types = [v.type for v in vs]
    if len(set(types)) != len(types):
        raise ModelError("type map must be injective on a simplex")
    return tuple(vs)


def simplex_types(sigma: Simplex) -> frozenset:
    return frozenset(v.type for v in sigma)


class BuildingModel:
    """Base: common flag/chamber machinery over a fixed ambient GF(2)-space."""

    kind: str
    MATERIALIZE_CAP = 200_000

    def __init__(self, n: int, cox_label: str, dim: int, space: FormedSpace | None,
                 enumeration_cap: int = 10 ** 8):
        self.n = n
        self.dim = dim
        self.space = space
        self.cox = build_coxeter(cox_label, n)
        self.opposition = self.cox.opposition_involution()
        self.enumeration_cap = enumeration_cap
        self._chambers = None
        self._chamber_index = None
        self._panels = None
        self._bfs_cache: dict[int, list] = {}
        self._count_cache: dict[frozenset, int] = {}

    # -- counting -------------------------------------------------------

    def chamber_count(self) -> int:
        """Weighted Poincare count over the Weyl group."""
        return self.flag_count(range(1, self.n + 1))

    def panel_q(self, t: int) -> int:
        """Thickness parameter of cotype-t panels (panel size = q+1)."""
        return 2

    def _weight(self, w) -> int:
        out = 1
        for i in w.reduced_word():
            out *= self.panel_q(i)
        return out

    def flag_count(self, J: Iterable[int]) -> int:
        """Number of type-J flags, via the weighted parabolic coset sum."""
        J = frozenset(J)
        if J not in self._count_cache:
            K = [t for t in range(1, self.n + 1) if t not in J]
            self._count_cache[J] = sum(
                self._weight(w) for w in self.cox.min_coset_transversal(K)
            )
        return self._count_cache[J]

    # -- vertices and incidence ------------------------------------------

    def vertex_types(self) -> range:
        return range(1, self.n + 1)

    def vertex_dim(self, t: int) -> int:
        """Vector-space dimension of a type-t vertex."""
        raise NotImplementedError

    def vertex_from_rows(self, rows: Iterable[int]) -> Vertex:
        raise NotImplementedError

    def incident(self, u: Vertex, v: Vertex) -> bool:
        if u.type == v.type:
            return False
        a, b = (u, v) if self.vertex_dim(u.type) <= self.vertex_dim(v.type) else (v, u)
        return Subspace(b.rows, self.dim, canonical=True).contains_subspace(
            Subspace(a.rows, self.dim, canonical=True)
        )

    def is_valid_vertex(self, v: Vertex) -> bool:
        raise NotImplementedError

    # -- flag enumeration --------------------------------------------------

    def _admissible_vector(self, x: int, current_rows: Sequence[int]) -> bool:
        """May x be added to the (isotropic/singular) partial flag?"""
        raise NotImplementedError

    def _tower_extensions(self, rows: tuple, target_dim: int, min_vector: int = 1) -> Iterator[tuple]:
        """All dim-target extensions of span(rows): the canonical ascending
        tower (each new vector minimal in its coset and larger than the
        previous one) visits every extension exactly once."""
        cur = Subspace(rows, self.dim, canonical=False)
        if cur.dim == target_dim:
            yield cur.rows
            return
        members = set(cur.vectors())
        for x in range(min_vector, 1 << self.dim):
            if x in members or not self._admissible_vector(x, cur.rows):
                continue
            # x must be minimal in its coset x + span(rows)
            if any((x ^ u) < x for u in members):
                continue
            yield from self._tower_extensions(echelon(cur.rows + (x,)), target_dim, x + 1)

    def enumerate_vertices(self, t: int) -> Iterator[Vertex]:
        for sigma in self.enumerate_flags([t]):
            yield sigma[0]

    def enumerate_flags(self, J: Iterable[int]) -> Iterator[Simplex]:
        """All type-J flags, deterministic order, each exactly once."""
        J = sorted(set(J))
        if not J:
            yield ()
            return
        if self.flag_count(J) > self.enumeration_cap:
            raise ScaleError(
                f"type {set(J)} flag count {self.flag_count(J)} exceeds cap; "
                "use a search strategy instead"
            )
        for raw in self.fast_flags_raw(J):
            yield make_simplex(Vertex(t, echelon(rows)) for t, rows in raw)

    # -- fast raw flag scanner ------------------------------------------------

    def _scan_tables(self):
        """(ok_mask, perp) bit tables over the 2^dim vector universe."""
        if getattr(self, "_scan_cache", None) is None:
            d = self.dim
            V = 1 << d
            sp = self.space
            if sp is None:
                ok = (1 << V) - 2  # every nonzero vector
                perp = None
            else:
                if sp._quad_table is not None:
                    ok = 0
                    qt = sp._quad_table
                    for x in range(1, V):
                        if not qt[x]:
                            ok |= 1 << x
                else:
                    ok = (1 << V) - 2
                # f[r] bitmask: bit x set iff (x, r) = 1; linear in r
                fbit = []
                for i in range(d):
                    rev = sp.reverse(1 << i)
                    m = 0
                    for x in range(V):
                        if (x & rev).bit_count() & 1:
                            m |= 1 << x
                    fbit.append(m)
                perp = [0] * V
                full = (1 << V) - 1
                f = [0] * V
                for r in range(1, V):
                    low = r & -r
                    f[r] = f[r ^ low] ^ fbit[low.bit_length() - 1]
                    perp[r] = full ^ f[r]
                perp[0] = full
            self._scan_cache = (ok, perp)
        return self._scan_cache

    def fast_flags_raw(self, J: Sequence[int], first: int | None = None) -> Iterator[tuple]:
        """Yield flags as tuples of (type, adapted-basis-rows); each flag once.

        `first` restricts the scan to flags whose first tower vector equals it
        (the unit of parallel decomposition).
        """
        J = sorted(set(J))
        ok_mask, perp = self._scan_tables()
        levels = [(t, self.vertex_dim(t)) for t in J]
        yield from self._raw_scan(levels, ok_mask, perp, first)

    def _raw_scan(self, levels, ok_mask, perp, first):
        # chain models (A, C, B24); the oriflamme model overrides this
        basis: list[int] = []
        members: list[int] = []
        member_set: set[int] = set()

        def add_vector(x):
            added = [x] + [x ^ u for u in members]
            members.extend(added)
            member_set.update(added)
            basis.append(x)
            return len(added)

        def pop_vector(k):
            for _ in range(k):
                member_set.discard(members.pop())
            basis.pop()

        def rec(li, need, cand, prev, acc):
            if need == 0:
                acc2 = acc + ((levels[li][0], tuple(basis)),)
                if li + 1 == len(levels):
                    yield acc2
                    return
                yield from rec(li + 1, levels[li + 1][1] - len(basis), cand, 0, acc2)
                return
            m = cand
            if prev:
                m &= -1 << (prev + 1)
            if first is not None and not basis:
                m &= 1 << first
            while m:
                b = m & -m
                m ^= b
                x = b.bit_length() - 1
                if x in member_set:
                    continue
                if any((x ^ u) < x for u in members):
                    continue
                k = add_vector(x)
                yield from rec(li, need - 1, cand & perp[x] if perp else cand, x, acc)
                pop_vector(k)

        yield from rec(0, levels[0][1], ok_mask, 0, ())

    def _flags_rec(self, prefix: Simplex, J: list) -> Iterator[Simplex]:
        raise NotImplementedError

    def enumerate_chambers(self) -> Iterator[Simplex]:
        return self.enumerate_flags(range(1, self.n + 1))

    # -- chamber graph oracle ----------------------------------------------

    def chambers(self) -> list:
        if self._chambers is None:
            if self.chamber_count() > self.MATERIALIZE_CAP:
                raise ScaleError(
                    f"{self.chamber_count()} chambers exceed the materialization cap"
                )
            self._chambers = list(self.enumerate_chambers())
            self._chamber_index = {c: i for i, c in enumerate(self._chambers)}
        return self._chambers

    def chamber_index(self, c: Simplex) -> int:
        self.chambers()
        return self._chamber_index[c]

    def panels(self) -> dict:
        """cotype -> {panel key -> list of chamber indices}."""
        if self._panels is None:
            chams = self.chambers()
            self._panels = {}
            for t in range(1, self.n + 1):
                buckets: dict = {}
                for i, c in enumerate(chams):
                    key = tuple(v for v in c if v.type != t)
                    buckets.setdefault(key, []).append(i)
                self._panels[t] = buckets
        return self._panels

    def panel_sizes(self) -> dict:
        """cotype -> set of panel thicknesses."""
        return {t: {len(v) for v in buckets.values()} for t, buckets in self.panels().items()}

    def bfs_row(self, source: int) -> list:
        """Weyl distances delta(source, .) for every chamber index."""
        if source in self._bfs_cache:
            return self._bfs_cache[source]
        chams = self.chambers()
        panels = self.panels()
        neighbours: dict[int, list] = {}
        row: list = [None] * len(chams)
        row[source] = self.cox.identity
        queue = [source]
        simple = {t: self.cox.simple_reflection(t) for t in range(1, self.n + 1)}
        qpos = 0
        while qpos < len(queue):
            i = queue[qpos]
            qpos += 1
            w = row[i]
            c = chams[i]
            for t in range(1, self.n + 1):
                key = tuple(v for v in c if v.type != t)
                ws = None
                for j in panels[t][key]:
                    if j == i or row[j] is not None:
                        continue
                    if ws is None:
                        ws = w * simple[t]
                        if ws.length() < w.length():  # pragma: no cover
                            raise ModelError("BFS reached a chamber out of order")
                    row[j] = ws
                    queue.append(j)
        if len(self._bfs_cache) > 8:
            self._bfs_cache.clear()
        self._bfs_cache[source] = row
        return row

    def weyl_distance(self, c: Simplex, d: Simplex) -> WeylElement:
        return self.bfs_row(self.chamber_index(c))[self.chamber_index(d)]

    # -- opposition ----------------------------------------------------------

    def dual_type(self, t: int) -> int:
        return self.opposition.image(t)

    def vertices_opposite(self, u: Vertex, v: Vertex) -> bool:
        raise NotImplementedError

    def opposite(self, sigma: Simplex, tau: Simplex) -> bool:
        """Fast model-specific opposition predicate."""
        need = {self.dual_type(v.type) for v in sigma}
        if need != simplex_types(tau):
            return False
        by_type = {v.type: v for v in tau}
        return all(self.vertices_opposite(u, by_type[self.dual_type(u.type)]) for u in sigma)

    # -- matrix action ----------------------------------------------------------

    def image_rows(self, g: BitMat, rows: Sequence[int]) -> tuple:
        return echelon(g.apply(r) for r in rows)

    def vertex_image(self, g: BitMat, v: Vertex) -> Vertex:
        return Vertex(self.image_type(g, v), self.image_rows(g, v.rows))

    def image_type(self, g: BitMat, v: Vertex) -> int:
        return v.type

    def apply_matrix(self, g: BitMat, sigma: Simplex) -> Simplex:
        return make_simplex(self.vertex_image(g, v) for v in sigma)

    # -- base chamber and reduction ------------------------------------------------

    def standard_chamber(self) -> Simplex:
        raise NotImplementedError

    def completion(self, chamber: Simplex) -> BitMat:
        """A structure-preserving g with g(standard chamber) = chamber."""
        raise NotImplementedError

    def reduction(self, chamber: Simplex) -> BitMat:
        """Inverse completion: maps `chamber` onto the standard chamber."""
        return self.completion(chamber).inverse()

    # -- residues ------------------------------------------------------------------

    def residue_chambers(self, sigma: Simplex) -> list:
        sv = set(sigma)
        return [i for i, c in enumerate(self.chambers()) if sv <= set(c)]

    def project_chamber(self, sigma: Simplex, b_idx: int) -> int:
        """proj_sigma of a chamber (by index): the gate of Res(sigma)."""
        row = self.bfs_row(b_idx)
        res = self.residue_chambers(sigma)
        best = min(res, key=lambda j: row[j].length())
        ties = [j for j in res if row[j].length() == row[best].length()]
        if len(ties) != 1:  # pragma: no cover - building axiom
            raise ModelError("projection gate is not unique")
        return best

    def project_simplex(self, sigma: Simplex, beta: Simplex) -> Simplex:
        """proj_sigma(beta): intersection of the projected chambers."""
        res_beta = self.residue_chambers(beta)
        common = None
        for b in res_beta:
            pc = set(self.chambers()[self.project_chamber(sigma, b)])
            common = pc if common is None else (common & pc)
        return make_simplex(common)

    # -- serialization -----------------------------------------------------------

    def describe(self) -> dict:
        return {"kind": self.kind, "rank": self.n, "dim": self.dim}

    def simplex_json(self, sigma: Simplex) -> dict:
        out = []
        for v in sigma:
            entry = {"type": v.type, "basis_rows_hex": [format(r, "x") for r in v.rows]}
            if self.kind == "D" and v.type >= self.n - 1:
                entry["class"] = v.type
            out.append(entry)
        return {"model": self.describe(), "vertices": out}


class ProjectiveModel(BuildingModel):
    """A_n(2): type-i vertices are the i-dimensional subspaces of GF(2)^{n+1}."""

    kind = "A"

    def __init__(self, n: int, **kw):
        if n < 1:
            raise ModelError("A_n needs n >= 1")
        super().__init__(n, "A", n + 1, None, **kw)
        self.dot_space = FormedSpace(n + 1, DOT)

    def vertex_dim(self, t: int) -> int:
        return t

    def is_valid_vertex(self, v: Vertex) -> bool:
        return len(v.rows) == v.type

    def vertex_from_rows(self, rows: Iterable[int]) -> Vertex:
        e = echelon(rows)
        return Vertex(len(e), e)

    def _admissible_vector(self, x: int, current_rows) -> bool:
        return x < (1 << self.dim)

    def _flags_rec(self, prefix, J):
        if not J:
            yield prefix
            return
        t, rest = J[0], J[1:]
        base = prefix[-1].rows if prefix else ()
        for rows in self._tower_extensions(base, t):
            yield from self._flags_rec(prefix + (Vertex(t, rows),), rest)

    def vertices_opposite(self, u: Vertex, v: Vertex) -> bool:
        return rank(u.rows + v.rows) == len(u.rows) + len(v.rows)

    def standard_chamber(self) -> Simplex:
        return make_simplex(
            Vertex(t, tuple(1 << i for i in range(t))) for t in range(1, self.n + 1)
        )

    def completion(self, chamber: Simplex) -> BitMat:
        basis = _adapted_basis_chain([v.rows for v in sorted(chamber, key=lambda v: v.type)])
        # extend to a basis of the ambient space
        full = list(basis)
        e = list(echelon(full))
        for i in range(self.dim):
            if not Subspace(tuple(e), self.dim, canonical=False).contains(1 << i):
                full.append(1 << i)
                e = list(echelon(full))
        return _matrix_with_columns(full, self.dim)


def _adapted_basis_chain(level_rows: list) -> list:
    """Vectors b1..bk with span(b1..b_dim(level)) = level, for a nested chain."""
    out: list[int] = []
    for rows in level_rows:
        for r in rows:
            ech = echelon(tuple(out))
            v = r
            for b in ech:
                if v & (b & -b):
                    v ^= b
            if v:
                out.append(r)
    return out


def _matrix_with_columns(cols: Sequence[int], dim: int) -> BitMat:
    rows = [0] * dim
    for j, c in enumerate(cols):
        for i in range(dim):
            if (c >> i) & 1:
                rows[i] |= 1 << j
    return BitMat(rows, dim)


class PolarModel(BuildingModel):
    """Common machinery for C_n(2) and B_n(2,4): isotropic/singular flags."""

    def __init__(self, n: int, cox_label: str, dim: int, space: FormedSpace, **kw):
        super().__init__(n, cox_label, dim, space, **kw)

    def vertex_dim(self, t: int) -> int:
        return t

    def is_valid_vertex(self, v: Vertex) -> bool:
        return len(v.rows) == v.type

    def vertex_from_rows(self, rows: Iterable[int]) -> Vertex:
        e = echelon(rows)
        return Vertex(len(e), e)

    def _admissible_vector(self, x: int, current_rows) -> bool:
        sp = self.space
        if sp._quad_table is not None and sp.quad(x):
            return False
        return all(sp.form(x, r) == 0 for r in current_rows)

    def _flags_rec(self, prefix, J):
        if not J:
            yield prefix
            return
        t, rest = J[0], J[1:]
        base = prefix[-1].rows if prefix else ()
        for rows in self._tower_extensions(base, t):
            yield from self._flags_rec(prefix + (Vertex(t, rows),), rest)

    def pairing_nondegenerate(self, urows, vrows) -> bool:
        sp = self.space
        vrev = [sp.reverse(v) for v in vrows]
        mats = []
        for u in urows:
            m = 0
            for j, vr in enumerate(vrev):
                if parity(u & vr):
                    m |= 1 << j
            mats.append(m)
        return rank(mats) == len(urows)

    def vertices_opposite(self, u: Vertex, v: Vertex) -> bool:
        return self.pairing_nondegenerate(u.rows, v.rows)

    def standard_chamber(self) -> Simplex:
        return make_simplex(
            Vertex(t, tuple(1 << i for i in range(t))) for t in range(1, self.n + 1)
        )

    def _complete_hyperbolic(self, basis: list) -> list:
        """Extend singular base vectors u_1..u_m with duals v_m..v_1."""
        sp = self.space
        d = self.dim
        m = len(basis)
        pairs = []
        vs = [0] * m
        for i in range(m):
            rows = []
            rhs = []
            for j in range(m):
                rows.append(sp.reverse(basis[j]))
                rhs.append(1 if i == j else 0)
            for k in range(i):
                rows.append(sp.reverse(vs[k]))
                rhs.append(0)
            from .gf2 import solve_affine

            sol = solve_affine(rows, rhs, d)
            if sol is None:  # pragma: no cover
                raise ModelError("hyperbolic completion failed")
            v, _ = sol
            if sp._quad_table is not None and sp.quad(v):
                v ^= basis[i]  # Q(v + u_i) = Q(v) + (u_i, v) = Q(v) + 1
            vs[i] = v
        cols = [0] * d
        for i in range(m):
            cols[i] = basis[i]
            cols[d - 1 - i] = vs[i]
        if 2 * m < d:  # anisotropic residual 2-space (minus type)
            from .gf2 import nullspace

            constraints = [sp.reverse(b) for b in basis] + [sp.reverse(v) for v in vs]
            res = nullspace(constraints, d)
            if len(res) != 2:  # pragma: no cover
                raise ModelError("residual space has wrong dimension")
            r1, r2 = res
            if sp.form(r1, r2) != 1:  # pragma: no cover
                raise ModelError("degenerate residual")
            cols[m] = r1
            cols[m + 1] = r2
        return cols

    def completion(self, chamber: Simplex) -> BitMat:
        basis = _adapted_basis_chain([v.rows for v in sorted(chamber, key=lambda v: v.type)])
        g = _matrix_with_columns(self._complete_hyperbolic(basis), self.dim)
        return g


class SymplecticModel(PolarModel):
    """C_n(2): totally isotropic subspaces of the symplectic GF(2)^{2n}."""

    kind = "C"

    def __init__(self, n: int, **kw):
        if n < 2:
            raise ModelError("C_n needs n >= 2")
        super().__init__(n, "C", 2 * n, FormedSpace(2 * n, SYMPLECTIC), **kw)


class MinusQuadricModel(PolarModel):
    """B_n(2,4): singular subspaces of the minus quadric on GF(2)^{2n+2}."""

    kind = "B24"

    def __init__(self, n: int, **kw):
        if n < 2:
            raise ModelError("B_n(2,4) needs n >= 2")
        super().__init__(n, "C", 2 * n + 2, FormedSpace(2 * n + 2, QMINUS), **kw)

    def panel_q(self, t: int) -> int:
        return 4 if t == self.n else 2


class OriflammeModel(BuildingModel):
    """D_n(2): the oriflamme complex of the plus quadric on GF(2)^{2n}."""

    kind = "D"

    def __init__(self, n: int, **kw):
        if n < 4:
            raise ModelError("the oriflamme model needs n >= 4")
        super().__init__(n, "D", 2 * n, FormedSpace(2 * n, QPLUS), **kw)
        self._m0 = tuple(1 << i for i in range(n))  # reference maximal singular

    def vertex_dim(self, t: int) -> int:
        return t if t <= self.n - 2 else self.n

    def max_singular_class(self, rows: Sequence[int]) -> int:
        """Type n for even codimension of the meet with <e1..en>, else n-1."""
        inter = Subspace(rows, self.dim, canonical=True).intersect(
            Subspace(self._m0, self.dim, canonical=True)
        )
        return self.n if (self.n - inter.dim) % 2 == 0 else self.n - 1

    def is_valid_vertex(self, v: Vertex) -> bool:
        if v.type <= self.n - 2:
            return len(v.rows) == v.type
        return len(v.rows) == self.n and self.max_singular_class(v.rows) == v.type

    def vertex_from_rows(self, rows: Iterable[int]) -> Vertex:
        e = echelon(rows)
        if len(e) == self.n:
            return Vertex(self.max_singular_class(e), e)
        if len(e) > self.n - 2:
            raise ModelError("not an oriflamme vertex dimension")
        return Vertex(len(e), e)

    def _admissible_vector(self, x: int, current_rows) -> bool:
        sp = self.space
        return sp.quad(x) == 0 and all(sp.form(x, r) == 0 for r in current_rows)

    def incident(self, u: Vertex, v: Vertex) -> bool:
        if u.type == v.type:
            return False
        if {u.type, v.type} == {self.n - 1, self.n}:
            a = Subspace(u.rows, self.dim, canonical=True)
            b = Subspace(v.rows, self.dim, canonical=True)
            return a.intersect(b).dim == self.n - 1
        return super().incident(u, v)

    def _max_singulars_through(self, rows: tuple) -> list:
        """The maximal singular subspaces containing span(rows)."""
        return [Vertex(self.max_singular_class(e), e) for e in self._tower_extensions(rows, self.n)]

    def _flags_rec(self, prefix, J):
        if not J:
            yield prefix
            return
        t, rest = J[0], J[1:]
        base = prefix[-1].rows if prefix else ()
        if t <= self.n - 2:
            for rows in self._tower_extensions(base, t):
                yield from self._flags_rec(prefix + (Vertex(t, rows),), rest)
            return
        if t == self.n - 1 and rest and rest[0] == self.n:
            # both fork types: enumerate the common (n-1)-dim hinge
            for hinge in self._tower_extensions(base, self.n - 1):
                maxes = self._max_singulars_through(hinge)
                if len(maxes) != 2:  # pragma: no cover - plus-quadric property
                    raise ModelError("a next-to-maximal singular must lie on 2 maximals")
                a, b = maxes
                if {a.type, b.type} != {self.n - 1, self.n}:  # pragma: no cover
                    raise ModelError("fork pair classes coincide")
                pair = (a, b) if a.type < b.type else (b, a)
                yield from self._flags_rec(prefix + pair, rest[1:])
            return
        for m in self._max_singulars_through(base):
            if m.type == t:
                yield from self._flags_rec(prefix + (m,), rest)

    def vertices_opposite(self, u: Vertex, v: Vertex) -> bool:
        sp = self.space
        vrev = [sp.reverse(r) for r in v.rows]
        mats = []
        for ur in u.rows:
            m = 0
            for j, vr in enumerate(vrev):
                if parity(ur & vr):
                    m |= 1 << j
            mats.append(m)
        return rank(mats) == len(u.rows)

    def _raw_scan(self, levels, ok_mask, perp, first):
        n = self.n
        fork = [t for t, _ in levels if t > n - 2]
        chain = [(t, d) for t, d in levels if t <= n - 2]
        m0 = tuple(1 << i for i in range(n))

        def max_class(rows):
            return n if (2 * n - rank(rows + m0)) % 2 == 0 else n - 1

        basis: list[int] = []
        members: list[int] = []
        member_set: set[int] = set()

        def add_vector(x):
            added = [x] + [x ^ u for u in members]
            members.extend(added)
            member_set.update(added)
            basis.append(x)
            return len(added)

        def pop_vector(k):
            for _ in range(k):
                member_set.discard(members.pop())
            basis.pop()

        def candidates(m, prev):
            if prev:
                m &= -1 << (prev + 1)
            if first is not None and not basis:
                m &= 1 << first
            while m:
                b = m & -m
                m ^= b
                x = b.bit_length() - 1
                if x in member_set:
                    continue
                if any((x ^ u) < x for u in members):
                    continue
                yield x

        def emit_fork(cand, acc):
            if not fork:
                yield acc
                return
            if len(fork) == 2:
                # grow the hinge to dimension n-1, then take both maximals
                def hinge_rec(need, cand, prev, acc):
                    if need == 0:
                        hinge = tuple(basis)
                        picks = []
                        spans = []
                        for x in candidates(cand, 0):
                            if any(x in s for s in spans):
                                continue
                            rows = hinge + (x,)
                            picks.append((max_class(rows), rows))
                            spans.append({x} | {x ^ u for u in members})
                            if len(picks) == 2:
                                break
                        if len(picks) != 2 or picks[0][0] == picks[1][0]:  # pragma: no cover
                            raise ModelError("fork pair construction failed")
                        picks.sort()
                        yield acc + (picks[0], picks[1])
                        return
                    for x in candidates(cand, prev):
                        k = add_vector(x)
                        yield from hinge_rec(need - 1, cand & perp[x], x, acc)
                        pop_vector(k)

                yield from hinge_rec(n - 1 - len(basis), cand, 0, acc)
                return
            # a single fork type: enumerate maximal singulars, filter by class
            t = fork[0]

            def max_rec(need, cand, prev, acc):
                if need == 0:
                    rows = tuple(basis)
                    if max_class(rows) == t:
                        yield acc + ((t, rows),)
                    return
                for x in candidates(cand, prev):
                    k = add_vector(x)
                    yield from max_rec(need - 1, cand & perp[x], x, acc)
                    pop_vector(k)

            yield from max_rec(n - len(basis), cand, 0, acc)

        def rec(li, need, cand, prev, acc):
            if li == len(chain):
                yield from emit_fork(cand, acc)
                return
            if need == 0:
                acc2 = acc + ((chain[li][0], tuple(basis)),)
                if li + 1 == len(chain):
                    yield from emit_fork(cand, acc2)
                    return
                yield from rec(li + 1, chain[li + 1][1] - len(basis), cand, 0, acc2)
                return
            for x in candidates(cand, prev):
                k = add_vector(x)
                yield from rec(li, need - 1, cand & perp[x], x, acc)
                pop_vector(k)

        if chain:
            yield from rec(0, chain[0][1], ok_mask, 0, ())
        else:
            yield from emit_fork(ok_mask, ())

    def image_type(self, g: BitMat, v: Vertex) -> int:
        if v.type <= self.n - 2:
            return v.type
        return self.max_singular_class(self.image_rows(g, v.rows))

    def standard_chamber(self) -> Simplex:
        n = self.n
        verts = [Vertex(t, tuple(1 << i for i in range(t))) for t in range(1, n - 1)]
        m_n = tuple(1 << i for i in range(n))
        m_alt = tuple(1 << i for i in range(n - 1)) + (1 << n,)
        verts.append(Vertex(self.max_singular_class(m_n), echelon(m_n)))
        verts.append(Vertex(self.max_singular_class(m_alt), echelon(m_alt)))
        return make_simplex(verts)

    def completion(self, chamber: Simplex) -> BitMat:
        by_type = {v.type: v for v in chamber}
        m_n = by_type[self.n]
        chain = [by_type[t].rows for t in range(1, self.n - 1)]
        basis = _adapted_basis_chain(chain)
        # extend through the hinge and the class-n maximal
        hinge = Subspace(m_n.rows, self.dim, canonical=True).intersect(
            Subspace(by_type[self.n - 1].rows, self.dim, canonical=True)
        )
        cur = Subspace(tuple(basis), self.dim, canonical=False)
        for r in hinge.rows:
            if not cur.contains(r):
                basis.append(r)
                cur = Subspace(tuple(basis), self.dim, canonical=False)
        for r in m_n.rows:
            if not cur.contains(r):
                basis.append(r)
                cur = Subspace(tuple(basis), self.dim, canonical=False)
        sp = self.space
        d = self.dim
        m = len(basis)
        vs = [0] * m
        from .gf2 import solve_affine

        for i in range(m):
            rows = [sp.reverse(basis[j]) for j in range(m)]
            rhs = [1 if i == j else 0 for j in range(m)]
            for k in range(i):
                rows.append(sp.reverse(vs[k]))
                rhs.append(0)
            sol = solve_affine(rows, rhs, d)
            if sol is None:  # pragma: no cover
                raise ModelError("hyperbolic completion failed")
            v, _ = sol
            if sp.quad(v):
                v ^= basis[i]
            vs[i] = v
        cols = [0] * d
        for i in range(m):
            cols[i] = basis[i]
            cols[d - 1 - i] = vs[i]
        return _matrix_with_columns(cols, d)


_MODEL_CLASSES = {
    "A": ProjectiveModel,
    "C": SymplecticModel,
    "B": SymplecticModel,  # B_n(2) and C_n(2) share the symplectic model
    "B24": MinusQuadricModel,
    "D": OriflammeModel,
}

_MODEL_CACHE: dict = {}


def make_model(kind: str, n: int, **kw) -> BuildingModel:
    """Construct a model; default-parameter instances are shared."""
    if kind not in _MODEL_CLASSES:
        raise ModelError(f"unknown model kind {kind!r}")
    if kind == "B":
        kind = "C"
    if not kw:
        key = (kind, n)
        if key not in _MODEL_CACHE:
            _MODEL_CACHE[key] = _MODEL_CLASSES[kind](n)
        return _MODEL_CACHE[key]
    return _MODEL_CLASSES[kind](n, **kw)
