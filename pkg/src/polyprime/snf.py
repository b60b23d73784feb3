"""Exact integer linear algebra: Smith and Hermite normal forms.

All matrices here are small (at most about 10 x 10) with small entries,
so the algorithms favor clarity; pivots are chosen by minimal absolute
value to limit intermediate growth anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations


class InvalidArgument(ValueError):
    pass


@dataclass(frozen=True)
class AbGroup:
    """Finitely generated abelian group: torsion invariant factors (each
    dividing the next, all >= 2) plus a free rank."""

    invariant_factors: tuple[int, ...]
    free_rank: int = 0

    def __post_init__(self):
        prev = None
        for f in self.invariant_factors:
            if f < 2 or (prev is not None and f % prev != 0):
                raise InvalidArgument(f"bad invariant factors {self.invariant_factors}")
            prev = f
        if self.free_rank < 0:
            raise InvalidArgument("negative free rank")

    def order(self) -> int:
        if self.free_rank:
            raise InvalidArgument("infinite group has no order")
        return math.prod(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def __str__(self) -> str:
        parts = [f"Z/{f}" for f in self.invariant_factors]
        parts.extend("Z" for _ in range(self.free_rank))
        return " + ".join(parts) if parts else "1"


def _copy(mat) -> list[list[int]]:
    return [[int(v) for v in row] for row in mat]


def smith_normal_form(mat) -> list[int]:
    """Diagonal of the Smith normal form: nonzero invariant factors d_1 | d_2 | ...

    Returns the list of positive diagonal entries (including 1's); zero
    rows/columns are dropped, so the length equals the rank.
    """
    a = _copy(mat)
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    diag: list[int] = []
    top = 0
    while top < rows and top < cols:
        # locate the nonzero entry of minimal absolute value
        piv = None
        for r in range(top, rows):
            for c in range(top, cols):
                v = abs(a[r][c])
                if v and (piv is None or v < piv[0]):
                    piv = (v, r, c)
        if piv is None:
            break
        _, pr, pc = piv
        a[top], a[pr] = a[pr], a[top]
        for row in a:
            row[top], row[pc] = row[pc], row[top]
        # clear the pivot row and column
        dirty = True
        while dirty:
            dirty = False
            p = a[top][top]
            for r in range(top + 1, rows):
                if a[r][top]:
                    q = a[r][top] // p
                    for c in range(top, cols):
                        a[r][c] -= q * a[top][c]
                    if a[r][top]:
                        a[top], a[r] = a[r], a[top]
                        dirty = True
                        break
            if dirty:
                continue
            for c in range(top + 1, cols):
                if a[top][c]:
                    q = a[top][c] // p
                    for r in range(top, rows):
                        a[r][c] -= q * a[r][top]
                    if a[top][c]:
                        for r in range(top, rows):
                            a[r][top], a[r][c] = a[r][c], a[r][top]
                        dirty = True
                        break
            if dirty:
                continue
            # pivot must divide the remaining block
            for r in range(top + 1, rows):
                for c in range(top + 1, cols):
                    if a[r][c] % p:
                        for cc in range(top, cols):
                            a[top][cc] += a[r][cc]
                        dirty = True
                        break
                if dirty:
                    break
        diag.append(abs(a[top][top]))
        top += 1
    return diag


def cokernel(mat, ambient_rank: int) -> AbGroup:
    """Cokernel of Z^rows --mat--> Z^ambient_rank (rows are images)."""
    if mat and len(mat[0]) != ambient_rank:
        raise InvalidArgument("row length must equal ambient rank")
    diag = smith_normal_form(mat)
    factors = tuple(d for d in diag if d > 1)
    return AbGroup(invariant_factors=factors, free_rank=ambient_rank - len(diag))


def snf_minor_gcd_oracle(mat) -> list[int]:
    """Invariant factors via k x k minor gcds; independent check for tests."""
    a = _copy(mat)
    if not a or not a[0]:
        return []
    rows, cols = len(a), len(a[0])
    gcds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = math.gcd(g, _det([[a[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        gcds.append(g)
    return [gcds[k] // gcds[k - 1] for k in range(1, len(gcds))]


def _det(a: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(a)
    a = _copy(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for r in range(k + 1, n):
            for c in range(k + 1, n):
                a[r][c] = (a[r][c] * a[k][k] - a[r][k] * a[k][c]) // prev
            a[r][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_rank(mat) -> int:
    return len(smith_normal_form(mat))


def in_lattice_span(mat, vec) -> bool:
    """Whether vec lies in the Z-span of the rows of mat."""
    base = smith_normal_form(mat)
    aug = smith_normal_form(list(mat) + [list(vec)])
    return base == aug
