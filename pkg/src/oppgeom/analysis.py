"""Opposite-geometry analysis.

Computes the poset of types realized in Opp(theta), the decorated diagram
(circled/shaded node sets), cappedness, displacement, and the domesticity
classification, plus the base-chamber reduction and the diagram catalogue
membership check.  Exhaustive scans run over the fast raw flag enumerator
and can be split over a fork pool.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .coxeter import TypePermutation
from .gf2 import rank, solve_affine
from .geometry import (
    BuildingModel,
    OriflammeModel,
    ProjectiveModel,
    ScaleError,
    Simplex,
    Vertex,
    make_simplex,
)
from .morphisms import Automorphism, MorphismError
from .tables import DiagramKey, table_row
from .util import cpu_jobs, parallel_any, parallel_map


class AnalysisError(RuntimeError):
    pass


class GateError(AnalysisError):
    """The base-chamber reduction hypothesis does not apply."""


# -- type combinatorics ------------------------------------------------------


def opposition_action(th: Automorphism) -> TypePermutation:
    """The permutation w0-opposition composed with pi_theta."""
    return th.model.opposition.compose(th.type_permutation)


def stable_subsets(th: Automorphism) -> list[frozenset]:
    """Nonempty type sets stable under the opposition action, by size."""
    sigma = opposition_action(th)
    n = th.model.n
    orbits = _orbits(sigma, n)
    out = []
    for r in range(1, len(orbits) + 1):
        for combo in itertools.combinations(orbits, r):
            out.append(frozenset().union(*combo))
    return sorted(out, key=lambda J: (len(J), sorted(J)))


def _orbits(perm: TypePermutation, n: int) -> list[frozenset]:
    seen = set()
    orbits = []
    for i in range(1, n + 1):
        if i in seen:
            continue
        orb = {i}
        j = perm.image(i)
        while j not in orb:
            orb.add(j)
            j = perm.image(j)
        seen |= orb
        orbits.append(frozenset(orb))
    return orbits


# -- the flag-versus-image opposition check ----------------------------------


def _partner_map(th: Automorphism, J: Iterable[int]) -> dict | None:
    """type t -> source type whose image is the dual partner of t."""
    model = th.model
    pi_inv = th.type_permutation.inverse()
    out = {}
    for t in J:
        out[t] = pi_inv.image(model.dual_type(t))
    if set(out.values()) != set(out):
        return None  # J not stable: no type-J simplex can be non-domestic
    return out


def _check_factory(th: Automorphism, J: Sequence[int]):
    """A fast predicate raw-flag -> theta maps it to an opposite simplex."""
    model = th.model
    partner = _partner_map(th, J)
    if partner is None:
        return None
    tbl = th.vector_table
    projective = isinstance(model, ProjectiveModel)
    if projective and not th.dual:
        full = model.dim

        def check(raw):
            by_type = dict(raw)
            for t, rows in raw:
                img = [tbl[r] for r in by_type[partner[t]]]
                if rank(rows + tuple(img)) != full:
                    return False
            return True

        return check

    rev = None if projective else _rev_table(model)

    def check(raw):
        by_type = dict(raw)
        for t, rows in raw:
            img = by_type[partner[t]]
            k = len(rows)
            mats = []
            for u in rows:
                m = 0
                for j, v in enumerate(img):
                    w = tbl[v]
                    if rev is not None:
                        w = rev[w]
                    if (u & w).bit_count() & 1:
                        m |= 1 << j
                mats.append(m)
            if rank(mats) != k:
                return False
        return True

    return check


_REV_CACHE: dict = {}


def _rev_table(model: BuildingModel) -> list:
    key = (model.kind, model.n)
    if key not in _REV_CACHE:
        sp = model.space
        d = model.dim
        tbl = [0] * (1 << d)
        basis = [sp.reverse(1 << i) for i in range(d)]
        for x in range(1, 1 << d):
            low = x & -x
            tbl[x] = tbl[x ^ low] ^ basis[low.bit_length() - 1]
        _REV_CACHE[key] = tbl
    return _REV_CACHE[key]


# -- exhaustive scans ---------------------------------------------------------

_SCAN_STATE: dict = {}


def _scan_chunk_exists(firsts):
    th, J, check = _SCAN_STATE["th"], _SCAN_STATE["J"], _SCAN_STATE["check"]
    model = th.model
    for fv in firsts:
        for raw in model.fast_flags_raw(J, first=fv):
            if check(raw):
                return raw
    return None


def _scan_chunk_count(firsts):
    th, J, check = _SCAN_STATE["th"], _SCAN_STATE["J"], _SCAN_STATE["check"]
    model = th.model
    hits = 0
    total = 0
    for fv in firsts:
        for raw in model.fast_flags_raw(J, first=fv):
            total += 1
            if check(raw):
                hits += 1
    return hits, total


def _first_vector_chunks(model: BuildingModel, jobs: int) -> list:
    ok_mask, _ = model._scan_tables()
    firsts = []
    m = ok_mask
    while m:
        b = m & -m
        m ^= b
        firsts.append(b.bit_length() - 1)
    k = max(1, len(firsts) // max(1, 4 * jobs))
    return [firsts[i : i + k] for i in range(0, len(firsts), k)]


def find_nondomestic(th: Automorphism, J: Iterable[int], jobs: int = 1):
    """A type-J flag mapped to an opposite simplex, or None (exhaustive)."""
    J = tuple(sorted(set(J)))
    check = _check_factory(th, J)
    if check is None:
        return None
    model = th.model
    jobs = cpu_jobs(jobs)
    if jobs == 1:
        for raw in model.fast_flags_raw(J):
            if check(raw):
                return raw
        return None
    _SCAN_STATE.update(th=th, J=J, check=check)
    return parallel_any(_scan_chunk_exists, _first_vector_chunks(model, jobs), jobs)


def count_nondomestic(th: Automorphism, J: Iterable[int], jobs: int = 1) -> tuple[int, int]:
    """(#non-domestic type-J flags, #type-J flags), exhaustive."""
    J = tuple(sorted(set(J)))
    check = _check_factory(th, J)
    model = th.model
    if check is None:
        return 0, model.flag_count(J)
    jobs = cpu_jobs(jobs)
    if jobs == 1:
        hits = total = 0
        for raw in model.fast_flags_raw(J):
            total += 1
            if check(raw):
                hits += 1
        return hits, total
    _SCAN_STATE.update(th=th, J=J, check=check)
    parts = parallel_map(_scan_chunk_count, _first_vector_chunks(model, jobs), jobs)
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


# -- poset of realized types ---------------------------------------------------


@dataclass(frozen=True)
class TypePoset:
    elements: frozenset  # of frozensets

    def maximal(self) -> frozenset:
        out = set()
        for J in self.elements:
            if not any(J < K for K in self.elements):
                out.add(J)
        return frozenset(out)

    def union_type(self) -> frozenset:
        out: frozenset = frozenset()
        for J in self.elements:
            out |= J
        return out

    def __contains__(self, J):
        return frozenset(J) in self.elements

    def sorted(self) -> list:
        return sorted(self.elements, key=lambda J: (len(J), sorted(J)))


def opp_types(th: Automorphism, jobs: int = 1) -> TypePoset:
    """Exact T(theta) by per-type exhaustive scans (with early exit)."""
    if th.is_identity():
        return TypePoset(frozenset())
    present = set()
    for J in stable_subsets(th):
        if find_nondomestic(th, J, jobs=jobs) is not None:
            present.add(J)
    return TypePoset(frozenset(present))


def poset_from_maximal(maximal: Iterable[frozenset], th: Automorphism) -> TypePoset:
    """Reconstruct T(theta) from its maximal elements (downward closure)."""
    maximal = [frozenset(M) for M in maximal]
    out = {J for J in stable_subsets(th) if any(J <= M for M in maximal)}
    return TypePoset(frozenset(out))


# -- decorated diagrams ----------------------------------------------------------


@dataclass(frozen=True)
class DecoratedDiagram:
    family: str
    rank: int
    circled: frozenset
    shaded: frozenset
    pi: TypePermutation
    capped: bool

    def key(self) -> DiagramKey:
        return DiagramKey(
            family=self.family,
            rank=self.rank,
            duality=not self.pi.is_identity(),
            circled=self.circled,
            shaded=self.shaded,
        )

    def to_json(self) -> dict:
        return {
            "type": self.family,
            "rank": self.rank,
            "circled": sorted(self.circled),
            "shaded": sorted(self.shaded),
            "pi": list(self.pi.images),
            "capped": self.capped,
        }


_FAMILY_OF_KIND = {"A": "A", "C": "B", "B24": "B", "D": "D"}


def diagram_from_poset(th: Automorphism, poset: TypePoset) -> DecoratedDiagram:
    model = th.model
    J = poset.union_type()
    capped = (not J) or (J in poset)
    shaded = frozenset()
    if not capped:
        sigma = opposition_action(th)
        for orbit in _orbits(sigma, model.n):
            if orbit <= J and (J - orbit) in poset:
                shaded |= orbit
    return DecoratedDiagram(
        family=_FAMILY_OF_KIND[model.kind],
        rank=model.n,
        circled=J,
        shaded=shaded,
        pi=th.type_permutation,
        capped=capped,
    )


def maximal_types(diagram: DecoratedDiagram) -> frozenset:
    """M(theta) from the decorated diagram."""
    if not diagram.circled:
        return frozenset()
    if diagram.capped:
        return frozenset({diagram.circled})
    return frozenset({diagram.circled - {k} for k in diagram.shaded})


def table_membership(diagram: DecoratedDiagram) -> str:
    if diagram.capped:
        return "capped-only"
    row = table_row(diagram.key())
    if row is None:
        raise AnalysisError(
            f"uncapped diagram {diagram} is missing from the catalogue tables"
        )
    return row


# -- displacement ------------------------------------------------------------------


def displacement_formula(th: Automorphism, diagram: DecoratedDiagram) -> int:
    if not diagram.circled:
        return 0
    return th.model.cox.displacement_from_diagram(diagram.circled, diagram.capped)


_DISP_STATE: dict = {}


def _disp_chunk(idx_chunk):
    th, row0, std = _DISP_STATE["th"], _DISP_STATE["row0"], _DISP_STATE["std"]
    model = th.model
    chams = model.chambers()
    best = 0
    for i in idx_chunk:
        c = chams[i]
        red = model.completion(c).inverse()
        img = model.apply_matrix(red, th.apply(c))
        best = max(best, row0[model.chamber_index(img)].length())
    return best


def exact_displacement(th: Automorphism, jobs: int = 1) -> int:
    """max l(delta(C, C^theta)) over all chambers (single-BFS reduction)."""
    model = th.model
    chams = model.chambers()
    std = model.standard_chamber()
    row0 = model.bfs_row(model.chamber_index(std))
    jobs = cpu_jobs(jobs)
    idx = list(range(len(chams)))
    _DISP_STATE.update(th=th, row0=row0, std=std)
    k = max(1, len(idx) // max(1, 4 * jobs))
    chunks = [idx[i : i + k] for i in range(0, len(idx), k)]
    return max(parallel_map(_disp_chunk, chunks, jobs))


# -- domesticity --------------------------------------------------------------------


@dataclass(frozen=True)
class DomesticityClass:
    classification: str  # non-domestic | domestic | exceptional domestic | strongly...
    j_domestic: tuple  # the stable J for which theta is J-domestic


def domesticity_from_poset(th: Automorphism, poset: TypePoset) -> DomesticityClass:
    S = frozenset(range(1, th.model.n + 1))
    stable = stable_subsets(th)
    j_dom = tuple(sorted((tuple(sorted(J)) for J in stable if J not in poset)))
    if S in poset:
        return DomesticityClass("non-domestic", j_dom)
    full = poset.union_type() == S
    strong = all(J in poset for J in stable if J != S)
    if full and strong:
        return DomesticityClass("strongly exceptional domestic", j_dom)
    if full:
        return DomesticityClass("exceptional domestic", j_dom)
    return DomesticityClass("domestic", j_dom)


def is_J_domestic(th: Automorphism, J: Iterable[int], jobs: int = 1) -> bool:
    return find_nondomestic(th, J, jobs=jobs) is None


# -- base-chamber reduction (red2) -----------------------------------------------------


@dataclass
class ReducedSearch:
    gate: str
    checked: int
    hit_w0: bool
    max_length: int | None


def red2_gate(th: Automorphism) -> str | None:
    """Which reduction hypothesis applies (None if none does)."""
    model = th.model
    if _small(model) and all(min(s) >= 4 for s in model.panel_sizes().values()):
        return "thick-panels"
    try:
        if th.order(cap=4) == 2:
            return "involution"
    except MorphismError:
        pass
    if th.type_permutation.images == model.opposition.images:
        return "oppomorphism-w0"
    return None


def _small(model: BuildingModel) -> bool:
    return model.chamber_count() <= model.MATERIALIZE_CAP


def red2_reduction(th: Automorphism, base: Simplex | None = None, *, force: bool = False,
                   jobs: int = 1) -> ReducedSearch:
    """Search only the chambers opposite a base chamber.

    Under gates (i)/(ii) the maximum over the reduced set equals the true
    displacement; under gate (iii) only the hit_w0 verdict is certified.
    """
    model = th.model
    gate = red2_gate(th)
    if gate is None and not force:
        raise GateError("no reduction hypothesis applies; fall back to full search")
    base = base or model.standard_chamber()
    S = tuple(range(1, model.n + 1))
    check_opp_base = _base_opposite_check(model, base)
    check_theta = _check_factory(th, S)
    hit = False
    checked = 0
    max_len = None
    if _small(model):
        max_len = 0
        row = model.bfs_row(model.chamber_index(base))
        w0 = model.cox.longest_element()
        std = model.standard_chamber()
        row0 = model.bfs_row(model.chamber_index(std))
        for i, c in enumerate(model.chambers()):
            if row[i] != w0:
                continue
            checked += 1
            red = model.completion(c).inverse()
            img = model.apply_matrix(red, th.apply(c))
            ell = row0[model.chamber_index(img)].length()
            max_len = max(max_len, ell)
            if ell == w0.length():
                hit = True
    else:
        for raw in model.fast_flags_raw(S):
            if not check_opp_base(raw):
                continue
            checked += 1
            if check_theta(raw):
                hit = True
                break
    return ReducedSearch(gate=gate or "forced", checked=checked, hit_w0=hit, max_length=max_len)


def _base_opposite_check(model: BuildingModel, base: Simplex):
    base_by_type = {v.type: v for v in base}
    rev = None if isinstance(model, ProjectiveModel) else _rev_table(model)
    projective = isinstance(model, ProjectiveModel)
    dual = model.opposition

    def check(raw):
        for t, rows in raw:
            partner = base_by_type[dual.image(t)]
            if projective:
                if rank(rows + partner.rows) != model.dim:
                    return False
            else:
                k = len(rows)
                mats = []
                for u in rows:
                    m = 0
                    for j, v in enumerate(partner.rows):
                        if (u & rev[v]).bit_count() & 1:
                            m |= 1 << j
                    mats.append(m)
                if rank(mats) != k:
                    return False
        return True

    return check


def _identity_mat(d):
    from .gf2 import BitMat

    return BitMat.identity(d)


# -- absolute point structure ------------------------------------------------------------


@dataclass(frozen=True)
class AbsoluteStructure:
    is_union_of_two_hyperplanes: bool
    fixed_projective_dim: int
    functionals: tuple | None = None


def absolute_structure(th: Automorphism, solution_cap: int = 1 << 12) -> AbsoluteStructure:
    model = th.model
    if isinstance(model, ProjectiveModel) and not th.dual:
        raise AnalysisError("absolute structure needs a polar model or a duality")
    pts = sorted(th.points())
    absolutes = th.absolute_points()
    k = th.fixed_space().projective_dim
    non = [x for x in pts if x not in absolutes]
    if not non:
        return AbsoluteStructure(False, k)
    sol = solve_affine(non, [1] * len(non), model.dim)
    if sol is None:
        return AbsoluteStructure(False, k)
    x0, ns = sol
    if len(ns) > 12:
        raise AnalysisError("hyperplane fit solution space too large")
    cands = [x0]
    for b in ns:
        cands += [c ^ b for c in cands]
    absolutes_set = absolutes
    for c1, c2 in itertools.combinations(sorted(set(cands) - {0}), 2):
        ok = True
        for x in pts:
            on_union = not (((x & c1).bit_count() & 1) and ((x & c2).bit_count() & 1))
            if on_union != (x in absolutes_set):
                ok = False
                break
        if ok:
            return AbsoluteStructure(True, k, (c1, c2))
    return AbsoluteStructure(False, k)


# -- the full report --------------------------------------------------------------------


@dataclass
class AnalysisReport:
    theta: str
    model: dict
    poset: TypePoset
    diagram: DecoratedDiagram
    displacement: int
    domesticity: DomesticityClass
    maximal: frozenset
    strategy: str
    order: int

    def to_json(self) -> dict:
        out = self.diagram.to_json()
        out.update(
            theta=self.theta,
            model=self.model,
            displacement=self.displacement,
            domesticity=self.domesticity.classification,
            j_domestic=[list(j) for j in self.domesticity.j_domestic],
            maximal_types=sorted(sorted(M) for M in self.maximal),
            poset=[sorted(J) for J in self.poset.sorted()],
            strategy=self.strategy,
            order=self.order,
        )
        return out


def analyze(th: Automorphism, jobs: int = 1, cross_check_displacement: bool | None = None) -> AnalysisReport:
    """Full exhaustive analysis of an automorphism at desk scale."""
    model = th.model
    poset = opp_types(th, jobs=jobs)
    diagram = diagram_from_poset(th, poset)
    disp = displacement_formula(th, diagram)
    strategy = "exhaust"
    if cross_check_displacement is None:
        cross_check_displacement = _small(model)
    if cross_check_displacement:
        exact = exact_displacement(th, jobs=jobs)
        if exact != disp:
            raise AnalysisError(
                f"displacement mismatch: formula {disp} vs exhaustive {exact}"
            )
        strategy = "exhaust+bfs"
    dom = domesticity_from_poset(th, poset)
    # consistency: the poset must be the downward closure of its maxima
    maximal = maximal_types(diagram)
    if poset.elements and poset_from_maximal(maximal, th).elements != poset.elements:
        raise AnalysisError("poset is not determined by its maximal elements")
    return AnalysisReport(
        theta=th.name or repr(th),
        model=model.describe(),
        poset=poset,
        diagram=diagram,
        displacement=disp,
        domesticity=dom,
        maximal=maximal,
        strategy=strategy,
        order=th.order(),
    )


# -- rendering ----------------------------------------------------------------------------


def render_diagram(diagram: DecoratedDiagram) -> str:
    n = diagram.rank

    def tok(i):
        if i in diagram.shaded:
            return f"(#{i})"
        if i in diagram.circled:
            return f"(o{i})"
        return f" .{i} "

    fam = diagram.family
    if fam in ("A",):
        body = "--".join(tok(i) for i in range(1, n + 1))
    elif fam == "B":
        body = "--".join(tok(i) for i in range(1, n)) + "==" + tok(n)
    elif fam == "F4":
        body = tok(1) + "--" + tok(2) + "==" + tok(3) + "--" + tok(4)
    elif fam == "D":
        body = "--".join(tok(i) for i in range(1, n - 1))
        body += "--<" + tok(n - 1) + "/" + tok(n) + ">"
    elif fam in ("E6", "E7", "E8"):
        chain = [1, 3, 4, 5, 6, 7, 8][: n - 1]
        body = "--".join(tok(i) for i in chain) + f"   [{tok(2)} under node 4]"
    else:
        body = " ".join(tok(i) for i in range(1, n + 1))
    status = "capped" if diagram.capped else "uncapped"
    return f"{fam}{n}: {body}   ({status})"
