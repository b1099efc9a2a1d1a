"""Bit-packed linear algebra over GF(2) with symplectic and quadratic forms.

Vectors are ints; bit i is coordinate i+1 of the paper's 1-indexed column
vectors.  Matrices are tuples of row ints.  All values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class GF2Error(ValueError):
    pass


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def vec_hex(v: int) -> str:
    return format(v, "x")


def vec_from_hex(s: str) -> int:
    return int(s, 16)


# -- matrices ---------------------------------------------------------------


class BitMat:
    """Dense GF(2) matrix as a tuple of row bitmasks."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = tuple(rows)
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @staticmethod
    def identity(n: int) -> "BitMat":
        return BitMat(tuple(1 << i for i in range(n)), n)

    @staticmethod
    def zero(n: int, m: int | None = None) -> "BitMat":
        return BitMat((0,) * n, m if m is not None else n)

    @staticmethod
    def from_dense(rows: Sequence[Sequence[int]]) -> "BitMat":
        ncols = len(rows[0])
        packed = []
        for r in rows:
            v = 0
            for j, b in enumerate(r):
                if b & 1:
                    v |= 1 << j
            packed.append(v)
        return BitMat(packed, ncols)

    def to_dense(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def row(self, i: int) -> int:
        return self.rows[i]

    def col(self, j: int) -> int:
        v = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                v |= 1 << i
        return v

    def transpose(self) -> "BitMat":
        return BitMat(tuple(self.col(j) for j in range(self.ncols)), self.nrows)

    def __add__(self, other: "BitMat") -> "BitMat":
        return BitMat(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def __mul__(self, other: "BitMat") -> "BitMat":
        if self.ncols != other.nrows:
            raise GF2Error("shape mismatch")
        out = []
        for r in self.rows:
            acc = 0
            rr = r
            while rr:
                k = (rr & -rr).bit_length() - 1
                acc ^= other.rows[k]
                rr &= rr - 1
            out.append(acc)
        return BitMat(tuple(out), other.ncols)

    def apply(self, v: int) -> int:
        """Matrix times column vector: bit i of result = row_i . v."""
        out = 0
        for i, r in enumerate(self.rows):
            if parity(r & v):
                out |= 1 << i
        return out

    def rank(self) -> int:
        return rank(self.rows)

    def inverse(self) -> "BitMat":
        n = self.nrows
        if n != self.ncols:
            raise GF2Error("not square")
        work = list(self.rows)
        inv = [1 << i for i in range(n)]
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, n) if (work[i] >> c) & 1), None)
            if piv is None:
                raise GF2Error("singular matrix")
            work[r], work[piv] = work[piv], work[r]
            inv[r], inv[piv] = inv[piv], inv[r]
            for i in range(n):
                if i != r and ((work[i] >> c) & 1):
                    work[i] ^= work[r]
                    inv[i] ^= inv[r]
            r += 1
        return BitMat(inv, n)

    def is_identity(self) -> bool:
        return all(r == (1 << i) for i, r in enumerate(self.rows))

    def multiplicative_order(self, cap: int = 1 << 16) -> int:
        p = self
        for k in range(1, cap + 1):
            if p.is_identity():
                return k
            p = p * self
        raise GF2Error(f"order exceeds cap {cap}")

    def to_hex_rows(self) -> list[str]:
        return [vec_hex(r) for r in self.rows]

    @staticmethod
    def from_hex_rows(rows: Sequence[str], ncols: int) -> "BitMat":
        return BitMat(tuple(vec_from_hex(r) for r in rows), ncols)

    def __eq__(self, other):
        return isinstance(other, BitMat) and self.rows == other.rows and self.ncols == other.ncols

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return "BitMat[" + "; ".join(format(r, f"0{self.ncols}b")[::-1] for r in self.rows) + "]"


def rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def echelon(rows: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis, rows sorted by pivot (ascending bit index)."""
    basis: list[int] = []  # kept with distinct leading (lowest set) bits
    for v in rows:
        while v:
            low = v & -v
            hit = next((b for b in basis if (b & -b) == low), None)
            if hit is None:
                basis.append(v)
                break
            v ^= hit
    # back-substitute so each pivot appears in exactly one row
    basis.sort(key=lambda b: b & -b)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if basis[i] & (basis[j] & -basis[j]):
                basis[i] ^= basis[j]
    return tuple(basis)


def nullspace(rows: Sequence[int], ncols: int) -> tuple[int, ...]:
    """Basis of {v : row . v = 0 for all rows} in echelon form."""
    ech = list(echelon(rows))
    pivots = [(r & -r).bit_length() - 1 for r in ech]
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for j in free:
        v = 1 << j
        for r, p in zip(ech, pivots):
            if (r >> j) & 1:
                v |= 1 << p
        out.append(v)
    return echelon(out)


def solve_affine(rows: Sequence[int], rhs: Sequence[int], ncols: int) -> tuple[int, tuple[int, ...]] | None:
    """One solution x of row.x = b plus a nullspace basis, or None."""
    aug = []
    for r, b in zip(rows, rhs):
        aug.append(r | ((b & 1) << ncols))
    ech = echelon(aug)
    x = 0
    for r in ech:
        piv = (r & -r).bit_length() - 1
        if piv == ncols:
            return None  # inconsistent: 0 = 1
        if (r >> ncols) & 1:
            x |= 1 << piv
    return x, nullspace(rows, ncols)


SYMPLECTIC = "symplectic"
QPLUS = "quadratic-plus"
QMINUS = "quadratic-minus"
DOT = "dot"


class FormedSpace:
    """GF(2)^d with the reversal bilinear form and optionally a quadratic form.

    The bilinear form is (X,Y) = X_1 Y_d + X_2 Y_{d-1} + ... + X_d Y_1; the
    quadratic kinds refine it by F(X) = X_1 X_d + ... + X_m X_{m+1} for d=2m
    (plus type) or that sum plus X_m^2 + X_{m+1}^2 (minus type).  Kind "dot"
    uses the standard dot product instead (used for projective dualities).
    """

    def __init__(self, dim: int, kind: str):
        if kind not in (SYMPLECTIC, QPLUS, QMINUS, DOT):
            raise GF2Error(f"unknown form kind {kind!r}")
        if kind != DOT and dim % 2:
            raise GF2Error("formed spaces have even dimension")
        self.dim = dim
        self.kind = kind
        if kind == DOT:
            self.gram = BitMat.identity(dim)
        else:
            self.gram = BitMat(tuple(1 << (dim - 1 - i) for i in range(dim)), dim)
        self._quad_table = self._build_quad_table() if kind in (QPLUS, QMINUS) else None

    def _build_quad_table(self):
        d = self.dim
        m = d // 2
        tbl = bytearray(1 << d)
        for x in range(1 << d):
            q = 0
            for i in range(m):
                q ^= ((x >> i) & 1) & ((x >> (d - 1 - i)) & 1)
            if self.kind == QMINUS:
                q ^= ((x >> (m - 1)) & 1) ^ ((x >> m) & 1)
            tbl[x] = q
        return bytes(tbl)

    def form(self, x: int, y: int) -> int:
        return parity(x & self.gram.apply(y))

    def quad(self, x: int) -> int:
        if self._quad_table is None:
            raise GF2Error(f"no quadratic form on a {self.kind} space")
        return self._quad_table[x]

    def reverse(self, x: int) -> int:
        """The vector J x (coordinates reversed for the reversal form)."""
        return self.gram.apply(x)

    def is_isotropic_pair(self, x: int, y: int) -> bool:
        return self.form(x, y) == 0

    def perp_rows(self, rows: Sequence[int]) -> tuple[int, ...]:
        constraints = [self.gram.apply(r) for r in rows]
        return nullspace(constraints, self.dim)

    def preserves_form(self, g: BitMat) -> bool:
        if g.nrows != self.dim or g.ncols != self.dim:
            return False
        d = self.dim
        imgs = [g.apply(1 << i) for i in range(d)]
        for i in range(d):
            for j in range(i, d):
                if self.form(imgs[i], imgs[j]) != self.form(1 << i, 1 << j):
                    return False
        if self._quad_table is not None:
            for i in range(d):
                if self.quad(imgs[i]) != self.quad(1 << i):
                    return False
        return True

    def dickson_invariant(self, g: BitMat) -> int:
        return (g + BitMat.identity(self.dim)).rank() & 1


class Subspace:
    """Canonically-based subspace of GF(2)^d; equality is bit equality."""

    __slots__ = ("rows", "ambient_dim")

    def __init__(self, rows: Iterable[int], ambient_dim: int, *, canonical: bool = False):
        self.rows = tuple(rows) if canonical else echelon(rows)
        self.ambient_dim = ambient_dim

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def projective_dim(self) -> int:
        return self.dim - 1

    def contains(self, v: int) -> bool:
        for b in self.rows:
            low = b & -b
            if v & low:
                v ^= b
        return v == 0

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def vectors(self) -> Iterator[int]:
        """All 2^dim vectors, the zero vector first."""
        k = self.dim
        for mask in range(1 << k):
            v = 0
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                v ^= self.rows[i]
                m &= m - 1
            yield v

    def nonzero_vectors(self) -> Iterator[int]:
        it = self.vectors()
        next(it)
        return it

    def span_with(self, *vs: int) -> "Subspace":
        return Subspace(self.rows + tuple(vs), self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise GF2Error("ambient mismatch")
        if self.dim > other.dim:
            self, other = other, self
        kept = [v for v in self.nonzero_vectors() if other.contains(v)]
        return Subspace(kept, self.ambient_dim)

    def span(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise GF2Error("ambient mismatch")
        return Subspace(self.rows + other.rows, self.ambient_dim)

    def to_hex(self) -> list[str]:
        return [vec_hex(r) for r in self.rows]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.rows == other.rows
            and self.ambient_dim == other.ambient_dim
        )

    def __hash__(self):
        return hash((self.rows, self.ambient_dim))

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient_dim})"


def perp(space: FormedSpace, U: Subspace) -> Subspace:
    return Subspace(space.perp_rows(U.rows), space.dim, canonical=True)


def is_totally_isotropic(space: FormedSpace, U: Subspace) -> bool:
    vs = list(U.rows)
    for i in range(len(vs)):
        for j in range(i, len(vs)):
            if space.form(vs[i], vs[j]):
                return False
    return True


def is_singular(space: FormedSpace, U: Subspace) -> bool:
    if space.kind not in (QPLUS, QMINUS):
        raise GF2Error("singularity needs a quadratic form")
    return all(space.quad(v) == 0 for v in U.vectors())
