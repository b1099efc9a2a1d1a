"""The static catalogue of decorated diagrams admissible for uncapped maps.

Rows are parameterized: a diagram is identified by its family label, rank,
whether the type permutation is trivial, the circled set J and shaded set K.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class DiagramKey:
    family: str  # "A", "B", "D", "E6", "E7", "E8", "F4", "F4(2,4)"
    rank: int
    duality: bool  # nontrivial type permutation
    circled: frozenset
    shaded: frozenset


def _interval(j):
    return frozenset(range(1, j + 1))


def table_row(key: DiagramKey) -> str | None:
    """Name of the catalogue row containing the diagram, or None."""
    f, n, dual, J, K = key.family, key.rank, key.duality, key.circled, key.shaded
    S = _interval(n)
    if f == "A":
        if dual and J == S and K == S and n >= 2:
            return "A_n(2)"
        return None
    if f == "B":
        if dual:
            return None
        if J == S and K == S and n >= 2:
            return "B_n(2) or B_n(2,4), full"
        for j in range(3, n + 1):
            if J == _interval(j) and K == _interval(j - 1):
                return f"B_n(2) or B_n(2,4), j={j}"
        return None
    if f == "D":
        if n % 2 == 0:
            if not dual:
                if J == S and K == S:
                    return "D_n(2) even, full"
                for twoj in range(4, n - 1, 2):
                    if J == _interval(twoj) and K == _interval(twoj - 1):
                        return f"D_n(2) even, 2j={twoj}"
            else:
                if J == S and K == S - {n - 1, n}:
                    return "D_n(2) even dual, full"
                for m in range(3, n - 2, 2):
                    if J == _interval(m) and K == _interval(m - 1):
                        return f"D_n(2) even dual, 2j+1={m}"
            return None
        if not dual:
            if J == S and K == S - {n - 1, n}:
                return "D_n(2) odd, full"
            for twoj in range(4, n - 2, 2):
                if J == _interval(twoj) and K == _interval(twoj - 1):
                    return f"D_n(2) odd, 2j={twoj}"
        else:
            if J == S and K == S:
                return "D_n(2) odd dual, full"
            for m in range(3, n - 1, 2):
                if J == _interval(m) and K == _interval(m - 1):
                    return f"D_n(2) odd dual, 2j+1={m}"
        return None
    if f == "E6":
        if not dual and J == S and K == frozenset({2, 4}):
            return "E6(2) collineation"
        if dual and J == S and K == S:
            return "E6(2) duality"
        return None
    if f == "E7":
        if dual:
            return None
        if J == frozenset({1, 3, 4, 6}) and K == frozenset({1, 3}):
            return "E7(2), partial"
        if J == S and K == S:
            return "E7(2), full"
        return None
    if f == "E8":
        if dual:
            return None
        if J == frozenset({1, 6, 7, 8}) and K == frozenset({7, 8}):
            return "E8(2), partial"
        if J == S and K == S:
            return "E8(2), full"
        return None
    if f == "F4":
        if dual:
            return None
        if J == S and K in (frozenset({1, 2}), frozenset({3, 4}), S):
            shaded = "".join(str(i) for i in sorted(K))
            return f"F4(2), shaded {shaded}"
        return None
    if f == "F4(2,4)":
        if not dual and J == S and K == frozenset({1, 2}):
            return "F4(2,4)"
        return None
    return None
