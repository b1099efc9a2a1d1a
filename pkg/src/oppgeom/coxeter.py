"""Finite Weyl group combinatorics for the spherical types A, B/C, D, E, F.

Roots are integer coefficient tuples over the simple basis.  The positive
roots are ordered by increasing height with a reverse-lexicographic
tie-break on the coefficient tuple; this global order is what root indices
(e.g. the 44th positive root of E7) refer to everywhere in the package.
Group elements are stored as signed permutations of the root list, so
length and inversion queries are O(#roots) and equality is canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Root = tuple  # coefficient tuple over the simple basis

VALID_LABELS = ("A", "B", "C", "D", "E", "F")

# Anchors for the global root order, asserted at build time.
_E7_ANCHORS = {44: (1, 1, 1, 2, 1, 1, 1), 45: (0, 1, 1, 2, 2, 1, 1), 46: (1, 1, 2, 2, 2, 1, 0)}
_E8_ANCHORS = {88: (1, 1, 2, 3, 2, 2, 2, 1), 89: (1, 2, 2, 4, 3, 2, 1, 0), 90: (1, 2, 2, 3, 3, 2, 1, 1)}


class CoxeterError(ValueError):
    pass


def cartan_matrix(label: str, n: int) -> list[list[int]]:
    """C[i][j] = 2(a_i,a_j)/(a_i,a_i), 0-indexed, Bourbaki numbering."""
    if label not in VALID_LABELS:
        raise CoxeterError(f"unknown type label {label!r}")
    if n < 1:
        raise CoxeterError(f"rank must be >= 1, got {n}")
    if label == "D" and n < 3:
        raise CoxeterError("type D needs rank >= 3")
    if label == "E" and n not in (6, 7, 8):
        raise CoxeterError("type E has ranks 6, 7, 8")
    if label == "F" and n != 4:
        raise CoxeterError("type F has rank 4")
    if label in ("B", "C") and n < 2:
        raise CoxeterError("types B/C need rank >= 2")
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def edge(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if label == "A":
        for i in range(n - 1):
            edge(i, i + 1)
    elif label == "B":  # a_n short
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -1, -2)
    elif label == "C":  # a_n long
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -2, -1)
    elif label == "D":
        for i in range(n - 3):
            edge(i, i + 1)
        edge(n - 3, n - 2)
        edge(n - 3, n - 1)
    elif label == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for a, b in zip(chain, chain[1:]):
            edge(a, b)
        edge(1, 3)
    elif label == "F":
        edge(0, 1)
        edge(1, 2, -1, -2)
        edge(2, 3)
    return C


def _root_key(r: Root):
    return (sum(r), tuple(-c for c in r))


class CoxeterSystem:
    """A finite Weyl group with its positive roots in the global order."""

    def __init__(self, label: str, rank: int):
        self.label = label
        self.rank = rank
        self.cartan = cartan_matrix(label, rank)
        self.roots: tuple[Root, ...] = self._generate_roots()
        self.nroots = len(self.roots)
        self.root_index = {r: i for i, r in enumerate(self.roots)}
        self.coxeter_matrix = self._coxeter_matrix()
        self._simple = [self._reflection_perm(i) for i in range(rank)]
        self._check_anchors()

    # -- construction -------------------------------------------------

    def _generate_roots(self) -> tuple[Root, ...]:
        n = self.rank
        C = self.cartan
        simple = []
        for i in range(n):
            v = [0] * n
            v[i] = 1
            simple.append(tuple(v))
        roots = set(simple)
        frontier = set(simple)
        while frontier:
            new = set()
            for r in frontier:
                for i in range(n):
                    pair = sum(r[j] * C[i][j] for j in range(n))
                    img = list(r)
                    img[i] -= pair
                    t = tuple(img)
                    if min(t) >= 0 and t not in roots:
                        new.add(t)
            roots |= new
            frontier = new
        return tuple(sorted(roots, key=_root_key))

    def _coxeter_matrix(self) -> list[list[int]]:
        n = self.rank
        M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
        table = {0: 2, 1: 3, 2: 4, 3: 6}
        for i in range(n):
            for j in range(n):
                if i != j:
                    M[i][j] = table[self.cartan[i][j] * self.cartan[j][i]]
        return M

    def _reflect(self, i: int, r: Root) -> Root:
        pair = sum(r[j] * self.cartan[i][j] for j in range(self.rank))
        img = list(r)
        img[i] -= pair
        return tuple(img)

    def _reflection_perm(self, i: int) -> tuple[int, ...]:
        # signed image of each positive root under s_i, 1-based signed index
        perm = []
        for r in self.roots:
            img = self._reflect(i, r)
            if min(img) >= 0:
                perm.append(self.root_index[img] + 1)
            else:
                neg = tuple(-c for c in img)
                perm.append(-(self.root_index[neg] + 1))
        return tuple(perm)

    def _check_anchors(self):
        anchors = {}
        if self.label == "E" and self.rank == 7:
            anchors = _E7_ANCHORS
        elif self.label == "E" and self.rank == 8:
            anchors = _E8_ANCHORS
        for idx, coeffs in anchors.items():
            if self.roots[idx - 1] != coeffs:
                raise CoxeterError(
                    f"root order anchor mismatch at index {idx}: "
                    f"{self.roots[idx - 1]} != {coeffs}"
                )

    # -- elements ------------------------------------------------------

    @property
    def identity(self) -> "WeylElement":
        return WeylElement(self, tuple(range(1, self.nroots + 1)))

    def simple_reflection(self, i: int) -> "WeylElement":
        """s_i for a 1-based node index."""
        return WeylElement(self, self._simple[i - 1])

    def root_height(self, idx: int) -> int:
        return sum(self.roots[idx])

    def highest_root(self) -> Root:
        return self.roots[-1]

    def simple_root_indices(self) -> tuple[int, ...]:
        return tuple(self.root_index[r] for r in self.roots if sum(r) == 1)

    def reflection(self, root: Root) -> "WeylElement":
        """The reflection s_beta for an arbitrary positive root beta."""
        # walk beta down to a simple root: (s_ik ... s_i1)(beta) = a_i0
        word = []
        r = root
        while sum(r) > 1:
            for i in range(self.rank):
                img = self._reflect(i, r)
                if sum(img) < sum(r) and min(img) >= 0:
                    word.append(i + 1)
                    r = img
                    break
            else:  # pragma: no cover - cannot happen for valid roots
                raise CoxeterError(f"failed to reduce root {root}")
        i0 = r.index(1) + 1
        w = self.identity
        for i in word:  # u = s_i1 ... s_ik, beta = u(a_i0)
            w = w * self.simple_reflection(i)
        return w * self.simple_reflection(i0) * w.inverse()

    def __repr__(self):
        return f"CoxeterSystem({self.label}{self.rank})"

    # -- derived data ---------------------------------------------------

    def longest_element(self) -> "WeylElement":
        w = self.identity
        while True:
            for i in range(1, self.rank + 1):
                if w.act(self.root_index[self._simple_root(i)] + 1) > 0:
                    w = w * self.simple_reflection(i)
                    break
            else:
                return w

    def _simple_root(self, i: int) -> Root:
        v = [0] * self.rank
        v[i - 1] = 1
        return tuple(v)

    def parabolic_longest(self, K: Iterable[int]) -> "WeylElement":
        """Longest element of the standard parabolic W_K (1-based nodes)."""
        K = sorted(set(K))
        w = self.identity
        while True:
            for i in K:
                if w.act(self.root_index[self._simple_root(i)] + 1) > 0:
                    w = w * self.simple_reflection(i)
                    break
            else:
                return w

    def parabolic_diameter(self, K: Iterable[int]) -> int:
        return self.parabolic_longest(K).length()

    def opposition_involution(self) -> "TypePermutation":
        """The diagram automorphism s -> w0^-1 s w0."""
        w0 = self.longest_element()
        perm = []
        for i in range(1, self.rank + 1):
            img_signed = w0.act(self.root_index[self._simple_root(i)] + 1)
            root = self.roots[abs(img_signed) - 1]  # -w0(a_i), a simple root
            if sum(root) != 1 or img_signed > 0:
                raise CoxeterError("w0 image of a simple root is not a negative simple root")
            perm.append(root.index(1) + 1)
        return TypePermutation(tuple(perm))

    def displacement_from_diagram(self, J: Iterable[int], capped: bool) -> int:
        J = set(J)
        if not J:
            if capped:
                return 0
            raise CoxeterError("empty circled set is only valid for the identity")
        rest = [i for i in range(1, self.rank + 1) if i not in J]
        d = self.longest_element().length() - self.parabolic_diameter(rest)
        return d if capped else d - 1

    def min_coset_transversal(self, K: Iterable[int]) -> list["WeylElement"]:
        """Minimal length representatives of W / W_K, BFS order."""
        K = sorted(set(K))
        simple_idx = {i: self.root_index[self._simple_root(i)] + 1 for i in range(1, self.rank + 1)}

        def reduce_to_min(w: WeylElement) -> WeylElement:
            while True:
                for i in K:
                    if w.act(simple_idx[i]) < 0:
                        w = w * self.simple_reflection(i)
                        break
                else:
                    return w

        start = self.identity
        out = [start]
        seen = {start.perm}
        frontier = [start]
        while frontier:
            new = []
            for w in frontier:
                for i in range(1, self.rank + 1):
                    v = reduce_to_min(self.simple_reflection(i) * w)
                    if v.perm not in seen:
                        seen.add(v.perm)
                        new.append(v)
            out.extend(new)
            frontier = new
        return out

    def diagram_automorphism_root_perm(self, pi: "TypePermutation") -> tuple[int, ...]:
        """Permutation of positive-root indices induced by a diagram automorphism."""
        out = []
        for r in self.roots:
            img = [0] * self.rank
            for j, c in enumerate(r):
                img[pi.image(j + 1) - 1] = c
            out.append(self.root_index[tuple(img)])
        return tuple(out)


@dataclass(frozen=True)
class TypePermutation:
    """A permutation of the node set {1..n} (a diagram automorphism)."""

    images: tuple[int, ...]

    def image(self, i: int) -> int:
        return self.images[i - 1]

    def apply_set(self, J: Iterable[int]) -> frozenset:
        return frozenset(self.image(i) for i in J)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.images))

    def compose(self, other: "TypePermutation") -> "TypePermutation":
        # self after other
        return TypePermutation(tuple(self.image(other.image(i + 1)) for i in range(len(self.images))))

    def inverse(self) -> "TypePermutation":
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v - 1] = i + 1
        return TypePermutation(tuple(inv))

    def order(self) -> int:
        k = 1
        p = self
        while not p.is_identity():
            p = p.compose(self)
            k += 1
        return k

    @staticmethod
    def identity(n: int) -> "TypePermutation":
        return TypePermutation(tuple(range(1, n + 1)))

    def preserves_coxeter_matrix(self, M: Sequence[Sequence[int]]) -> bool:
        n = len(self.images)
        return all(
            M[self.image(i + 1) - 1][self.image(j + 1) - 1] == M[i][j]
            for i in range(n)
            for j in range(n)
        )


class WeylElement:
    """Group element stored as a signed permutation of the positive roots."""

    __slots__ = ("sys", "perm", "_len")

    def __init__(self, sys: CoxeterSystem, perm: tuple[int, ...]):
        self.sys = sys
        self.perm = perm
        self._len = None

    def act(self, signed_index: int) -> int:
        """Image of the signed root index (1-based, negative = negative root)."""
        if signed_index > 0:
            return self.perm[signed_index - 1]
        return -self.perm[-signed_index - 1]

    def act_root(self, root: Root) -> tuple[Root, int]:
        i = self.sys.root_index[root]
        img = self.perm[i]
        if img > 0:
            return self.sys.roots[img - 1], +1
        return self.sys.roots[-img - 1], -1

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        if self.sys is not other.sys:
            raise CoxeterError("elements belong to different Coxeter systems")
        sp = self.perm
        out = []
        for v in other.perm:
            out.append(sp[v - 1] if v > 0 else -sp[-v - 1])
        return WeylElement(self.sys, tuple(out))

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, v in enumerate(self.perm):
            if v > 0:
                inv[v - 1] = i + 1
            else:
                inv[-v - 1] = -(i + 1)
        return WeylElement(self.sys, tuple(inv))

    def length(self) -> int:
        if self._len is None:
            self._len = sum(1 for v in self.perm if v < 0)
        return self._len

    def inversion_set(self) -> frozenset:
        """{beta > 0 : w(beta) < 0} as root indices (0-based)."""
        return frozenset(i for i, v in enumerate(self.perm) if v < 0)

    def is_identity(self) -> bool:
        return all(v == i + 1 for i, v in enumerate(self.perm))

    def descents_right(self) -> list[int]:
        """Nodes i with l(w s_i) < l(w), 1-based."""
        out = []
        for i in range(1, self.sys.rank + 1):
            idx = self.sys.root_index[self.sys._simple_root(i)]
            if self.perm[idx] < 0:
                out.append(i)
        return out

    def reduced_word(self) -> list[int]:
        """A reduced word (greedy by right descent), 1-based node indices."""
        w = self
        rev = []
        while not w.is_identity():
            i = w.descents_right()[0]
            rev.append(i)
            w = w * self.sys.simple_reflection(i)
        return rev[::-1]

    def support(self) -> frozenset:
        """Nodes appearing in a reduced word (1-based)."""
        return frozenset(self.reduced_word())

    def in_parabolic(self, K: Iterable[int]) -> bool:
        K = set(K)
        w = self
        while not w.is_identity():
            ds = w.descents_right()
            i = next((d for d in ds if d in K), None)
            if i is None:
                return False
            w = w * self.sys.simple_reflection(i)
        return True

    def apply_diagram_automorphism(self, root_perm: tuple[int, ...]) -> "WeylElement":
        """Conjugate by a diagram automorphism given as a root-index permutation."""
        n = len(self.perm)
        inv = [0] * n
        for i, v in enumerate(root_perm):
            inv[v] = i
        out = [0] * n
        for i in range(n):
            v = self.perm[inv[i]]
            out[i] = (root_perm[v - 1] + 1) if v > 0 else -(root_perm[-v - 1] + 1)
        return WeylElement(self.sys, tuple(out))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.perm == other.perm and self.sys is other.sys

    def __hash__(self):
        return hash(self.perm)

    def __repr__(self):
        word = "".join(str(i) for i in self.reduced_word()) or "e"
        return f"W[{word}]"


@lru_cache(maxsize=None)
def build_coxeter(label: str, rank: int) -> CoxeterSystem:
    """Construct (and cache) the Coxeter system of the given spherical type."""
    return CoxeterSystem(label, rank)


def max_double_coset(sys: CoxeterSystem, J: Iterable[int], w: WeylElement, K: Iterable[int]) -> WeylElement:
    """Unique maximal-length element of the double coset W_J w W_K."""
    J = sorted(set(J))
    K = sorted(set(K))
    simple_idx = {i: sys.root_index[sys._simple_root(i)] + 1 for i in range(1, sys.rank + 1)}
    changed = True
    while changed:
        changed = False
        winv = w.inverse()
        for i in J:
            # l(s_i w) > l(w) iff w^-1(a_i) > 0
            if winv.act(simple_idx[i]) > 0:
                w = sys.simple_reflection(i) * w
                changed = True
                break
        if changed:
            continue
        for i in K:
            if w.act(simple_idx[i]) > 0:
                w = w * sys.simple_reflection(i)
                changed = True
                break
    return w
