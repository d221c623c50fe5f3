"""
Octaflip Isomorphism

Canonical forms, isomorphism testing and automorphism groups for complexes
up to vertex relabelling. Canonical labelling refines an ordered vertex
partition against the facet hypergraph, individualizes vertices of the
first non-singleton cell and keeps the least relabelled facet list.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .complexes import (
    Complex,
    degree_sequence_label,
    edge_degrees,
    f_vector,
    g_n_graph,
    link,
    non_edge_graph,
    vertex_degree_sequence,
    vertices_of,
)
from .recognition import classify_surface


logger = logging.getLogger(__name__)

Permutation = Dict[int, int]


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism invariants, compared component by component."""
    f_vector: Tuple[int, ...]
    degree_sequence: Tuple[int, ...]
    edge_degrees: Tuple[int, ...]
    g_n: Tuple[Tuple[int, Tuple[int, ...]], ...]
    neg: Tuple[int, ...]
    links: Tuple[str, ...]

    COMPONENTS = (
        ("f_vector", "f-vector"),
        ("degree_sequence", "degree sequence"),
        ("edge_degrees", "edge degrees"),
        ("g_n", "G_n"),
        ("neg", "NEG"),
        ("links", "links"),
    )


@dataclass(frozen=True)
class IsoResult:
    """Witness bijection, or the invariant that separates the complexes."""
    bijection: Optional[Permutation] = None
    invariant: Optional[str] = None
    detail: str = ""

    @property
    def is_isomorphic(self) -> bool:
        return self.bijection is not None

    def __bool__(self) -> bool:
        return self.is_isomorphic


def _degree_sequence(graph) -> Tuple[int, ...]:
    return tuple(sorted((deg for _, deg in graph.degree()), reverse=True))


def link_signature(K: Complex, v: int) -> str:
    """Catalog surface name of lk(v), e.g. ``R_4``; ``kind[degree sequence]`` when unnamed."""
    from .catalog import surface_name

    lk = link(K, 1 << v)
    kind = classify_surface(lk).kind
    label = degree_sequence_label(lk)
    return surface_name(lk.n_vertices, kind, label) or f"{kind}[{label}]"


def fingerprint(K: Complex) -> Fingerprint:
    degrees = edge_degrees(K) if K.dim >= 1 else {}
    g_n = tuple(
        (n, _degree_sequence(g_n_graph(K, n))) for n in sorted(set(degrees.values()))
    )
    links: Tuple[str, ...] = ()
    if K.dim == 3:
        links = tuple(sorted(link_signature(K, v) for v in K.vertices))
    return Fingerprint(
        f_vector=f_vector(K),
        degree_sequence=vertex_degree_sequence(K),
        edge_degrees=tuple(sorted(degrees.values())),
        g_n=g_n,
        neg=_degree_sequence(non_edge_graph(K)),
        links=links,
    )


def fingerprint_difference(a: Fingerprint, b: Fingerprint) -> Optional[Tuple[str, str]]:
    """Name and detail of the first differing component, or None."""
    for attr, name in Fingerprint.COMPONENTS:
        left, right = getattr(a, attr), getattr(b, attr)
        if left != right:
            return name, f"{name}: {_render(attr, left)} vs {_render(attr, right)}"
    return None


def _render(attr: str, value) -> str:
    if attr == "links":
        counts = Counter(value)
        return ", ".join(f"{label}^{n}" if n > 1 else label for label, n in sorted(counts.items()))
    return str(value)


# ============================================
# CANONICAL LABELLING
# ============================================

class _Search:
    """Individualization-refinement over the facet hypergraph."""

    def __init__(self, K: Complex):
        self.vertices = K.vertices
        index = {v: i for i, v in enumerate(self.vertices)}
        self.facets = [tuple(index[v] for v in vertices_of(f)) for f in K.facets]
        self.incidence: List[List[Tuple[int, ...]]] = [[] for _ in self.vertices]
        for facet in self.facets:
            for i in facet:
                self.incidence[i].append(tuple(j for j in facet if j != i))
        self.best: Optional[Tuple[int, ...]] = None
        self.best_leaves: List[Tuple[int, ...]] = []

    def refine(self, cells: List[List[int]]) -> List[List[int]]:
        while True:
            cell_of = [0] * len(self.vertices)
            for position, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = position
            refined: List[List[int]] = []
            changed = False
            for cell in cells:
                if len(cell) == 1:
                    refined.append(cell)
                    continue
                groups: Dict[tuple, List[int]] = {}
                for v in cell:
                    signature = tuple(sorted(
                        tuple(sorted(cell_of[w] for w in others)) for others in self.incidence[v]
                    ))
                    groups.setdefault(signature, []).append(v)
                if len(groups) > 1:
                    changed = True
                for key in sorted(groups):
                    refined.append(groups[key])
            cells = refined
            if not changed:
                return cells

    def run(self) -> None:
        self._descend([list(range(len(self.vertices)))])

    def _descend(self, cells: List[List[int]]) -> None:
        cells = self.refine(cells)
        target = next((t for t, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            order = tuple(cell[0] for cell in cells)
            label = [0] * len(order)
            for position, v in enumerate(order):
                label[v] = position
            certificate = tuple(sorted(sum(1 << label[i] for i in facet) for facet in self.facets))
            if self.best is None or certificate < self.best:
                self.best = certificate
                self.best_leaves = [order]
            elif certificate == self.best:
                self.best_leaves.append(order)
            return
        cell = cells[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            self._descend(cells[:target] + [[v], rest] + cells[target + 1:])

    def labelling(self, order: Sequence[int]) -> Permutation:
        """Original vertex -> canonical label for a leaf order."""
        return {self.vertices[i]: position for position, i in enumerate(order)}


@lru_cache(maxsize=4096)
def _canonical(facets: FrozenSet[int]) -> Tuple[Tuple[int, ...], Tuple[Permutation, ...]]:
    search = _Search(Complex(facets))
    search.run()
    labellings = tuple(search.labelling(order) for order in search.best_leaves)
    return search.best, labellings


def canonical_labelling(K: Complex) -> Permutation:
    """Map from V(K) onto 0..f0-1 that produces the canonical form."""
    return dict(_canonical(K.facets)[1][0])


def canonical_certificate(K: Complex) -> Tuple[int, ...]:
    return _canonical(K.facets)[0]


def canonical_form(K: Complex) -> Complex:
    return Complex(canonical_certificate(K))


def automorphisms(K: Complex) -> List[Permutation]:
    """The full automorphism group, identity first."""
    labellings = _canonical(K.facets)[1]
    inverse_first = {c: v for v, c in labellings[0].items()}
    group = [{v: inverse_first[lab[v]] for v in K.vertices} for lab in labellings]
    group.sort(key=lambda g: tuple(g[v] for v in K.vertices))
    return group


def are_isomorphic(K: Complex, L: Complex) -> IsoResult:
    if K.facets == L.facets:
        return IsoResult(bijection={v: v for v in K.vertices})
    if K.dim != L.dim or K.n_vertices != L.n_vertices or len(K) != len(L):
        a, b = f_vector(K), f_vector(L)
        return IsoResult(invariant="f-vector", detail=f"f-vector: {a} vs {b}")
    difference = fingerprint_difference(fingerprint(K), fingerprint(L))
    if difference is not None:
        return IsoResult(invariant=difference[0], detail=difference[1])
    if canonical_certificate(K) != canonical_certificate(L):
        return IsoResult(invariant="exhausted search", detail="no relabelling maps the facets onto each other")
    to_canonical = canonical_labelling(K)
    from_canonical = {c: v for v, c in canonical_labelling(L).items()}
    bijection = {v: from_canonical[to_canonical[v]] for v in K.vertices}
    if K.relabel(bijection) != L:
        raise AssertionError("canonical labelling produced an invalid witness")
    return IsoResult(bijection=bijection)


def is_isomorphism(K: Complex, L: Complex, bijection: Permutation) -> bool:
    """True iff the map carries the facet set of K exactly onto that of L."""
    images = [bijection.get(v, v) for v in K.vertices]
    if len(set(images)) != len(images):
        return False
    return K.relabel(bijection) == L


# ============================================
# CYCLE NOTATION
# ============================================

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> Permutation:
    """``"(1,4)(2,7)(3,8)"`` -> {1: 4, 4: 1, ...}; commas or spaces separate."""
    perm: Permutation = {}
    stripped = text.strip()
    if _CYCLE.sub("", stripped).strip():
        raise ValueError(f"Invalid cycle notation: {text!r}")
    for body in _CYCLE.findall(stripped):
        labels = [int(t) for t in body.replace(",", " ").split()]
        for i, v in enumerate(labels):
            if v in perm:
                raise ValueError(f"Invalid cycle notation: {text!r} repeats {v}")
            perm[v] = labels[(i + 1) % len(labels)]
    return perm


def format_cycles(perm: Permutation) -> str:
    """Cycle notation without fixed points; the identity is ``()``."""
    seen = set()
    cycles = []
    for start in sorted(perm):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        v = perm[start]
        while v != start:
            cycle.append(v)
            seen.add(v)
            v = perm[v]
        cycles.append("(" + ",".join(str(x) for x in cycle) + ")")
    return "".join(cycles) or "()"


def apply_permutation(K: Complex, perm: Permutation) -> Complex:
    return K.relabel(perm)
