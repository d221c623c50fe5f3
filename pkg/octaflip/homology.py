"""
Octaflip Homology

Integer simplicial homology via Smith normal form. Python integers are
arbitrary precision, so elimination never overflows.
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, List, Sequence, Tuple

from .complexes import Complex, ComplexError, face_key, vertices_of


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryMatrix:
    """Matrix of d_i: rows are (i-1)-faces, columns are i-faces (sorted)."""
    dim: int
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    entries: Dict[Tuple[int, int], int]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * len(self.cols) for _ in self.rows]
        for (r, c), value in self.entries.items():
            dense[r][c] = value
        return dense


@dataclass(frozen=True)
class SmithForm:
    rank: int
    invariant_factors: Tuple[int, ...]

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d > 1)


@dataclass(frozen=True)
class HomologyGroup:
    betti: int
    torsion: Tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z_{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HomologyProfile:
    """Unreduced integer homology H_0..H_d."""
    groups: Tuple[HomologyGroup, ...]

    @property
    def betti(self) -> Tuple[int, ...]:
        return tuple(g.betti for g in self.groups)

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * b for i, b in enumerate(self.betti))

    def reduced(self) -> Tuple[HomologyGroup, ...]:
        first = self.groups[0]
        return (HomologyGroup(first.betti - 1, first.torsion),) + self.groups[1:]

    def lines(self) -> List[str]:
        out = [f"H_{i} = {g}" for i, g in enumerate(self.groups)]
        out[0] += f"  (reduced: {self.reduced()[0]})"
        return out


def boundary_matrix(K: Complex, i: int) -> BoundaryMatrix:
    """Entry (tau, sigma) is (-1)^k when tau is sigma minus its k-th vertex."""
    if i < 1 or i > K.dim:
        raise ComplexError(f"Invalid boundary dimension: {i}. Must be in 1..{K.dim}")
    rows = tuple(sorted(K.faces(i - 1), key=face_key))
    cols = tuple(sorted(K.faces(i), key=face_key))
    row_index = {face: r for r, face in enumerate(rows)}
    entries: Dict[Tuple[int, int], int] = {}
    for c, sigma in enumerate(cols):
        for k, v in enumerate(vertices_of(sigma)):
            entries[(row_index[sigma & ~(1 << v)], c)] = -1 if k % 2 else 1
    return BoundaryMatrix(dim=i, rows=rows, cols=cols, entries=entries)


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """Rank and invariant factors d1 | d2 | ... of an integer matrix."""
    rows = [{j: v for j, v in enumerate(row) if v} for row in matrix]
    return _smith_sparse([r for r in rows if r])


def _smith_sparse(rows: List[Dict[int, int]]) -> SmithForm:
    diagonal: List[int] = []
    while rows:
        # pivot: least absolute value, ties broken by position
        i, j = min(
            ((r, c) for r, row in enumerate(rows) for c in row),
            key=lambda rc: (abs(rows[rc[0]][rc[1]]), rc),
        )
        while True:
            p = rows[i][j]
            remainder = False
            for r, row in enumerate(rows):
                if r == i or j not in row:
                    continue
                q = row[j] // p
                for c, v in rows[i].items():
                    value = row.get(c, 0) - q * v
                    if value:
                        row[c] = value
                    else:
                        row.pop(c, None)
                if j in row:
                    remainder = True
            if remainder:
                i = min((r for r, row in enumerate(rows) if j in row), key=lambda r: (abs(rows[r][j]), r))
                continue
            # column j is now zero outside row i, so column operations only touch row i
            pivot_row = rows[i]
            for c in [c for c in pivot_row if c != j]:
                value = pivot_row[c] - (pivot_row[c] // p) * p
                if value:
                    pivot_row[c] = value
                else:
                    del pivot_row[c]
            if len(pivot_row) > 1:
                j = min((c for c in pivot_row if c != j), key=lambda c: (abs(pivot_row[c]), c))
                continue
            break
        diagonal.append(abs(rows[i][j]))
        del rows[i]
        rows = [r for r in rows if r]
    return SmithForm(rank=len(diagonal), invariant_factors=_invariant_factors(diagonal))


def _invariant_factors(diagonal: List[int]) -> Tuple[int, ...]:
    """Normalize a diagonal to divisibility order via gcd/lcm exchanges."""
    values = sorted(diagonal)
    n = len(values)
    for a in range(n):
        for b in range(a + 1, n):
            g = gcd(values[a], values[b])
            if g != values[a]:
                values[a], values[b] = g, values[a] * values[b] // g
    return tuple(values)


def homology(K: Complex) -> HomologyProfile:
    if K.dim > 4:
        raise ComplexError(f"Invalid complex for homology: dimension {K.dim} exceeds 4")
    forms = {i: _smith_sparse(_sparse_rows(boundary_matrix(K, i))) for i in range(1, K.dim + 1)}
    groups = []
    for i in range(K.dim + 1):
        rank_here = forms[i].rank if i >= 1 else 0
        rank_next = forms[i + 1].rank if i + 1 <= K.dim else 0
        torsion = forms[i + 1].torsion if i + 1 <= K.dim else ()
        groups.append(HomologyGroup(len(K.faces(i)) - rank_here - rank_next, torsion))
    logger.debug(f"Homology of {K!r}: {[str(g) for g in groups]}")
    return HomologyProfile(tuple(groups))


def _sparse_rows(matrix: BoundaryMatrix) -> List[Dict[int, int]]:
    rows: List[Dict[int, int]] = [{} for _ in matrix.rows]
    for (r, c), value in matrix.entries.items():
        rows[r][c] = value
    return [r for r in rows if r]
