"""
Octaflip Recognition

Decides the pseudomanifold hierarchy (weak pseudomanifold, pseudomanifold,
normal pseudomanifold, combinatorial manifold) and classifies closed surfaces.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx

from .complexes import (
    Complex,
    ComplexError,
    edge_graph,
    euler_characteristic,
    link,
    popcount,
    sub_masks,
    vertices_of,
)


logger = logging.getLogger(__name__)

SPHERE = "sphere"
TORUS = "torus"
PROJECTIVE_PLANE = "projective_plane"
KLEIN_BOTTLE = "klein_bottle"
ORIENTABLE_GENUS = "orientable_genus_g"
NONORIENTABLE_GENUS = "nonorientable_genus_k"
NOT_A_SURFACE = "not_a_surface"


@dataclass(frozen=True)
class SurfaceType:
    """Topological type of a 2-complex."""
    kind: str
    vertex_count: int
    genus: int = 0

    @property
    def is_surface(self) -> bool:
        return self.kind != NOT_A_SURFACE

    def __str__(self) -> str:
        if self.kind in (ORIENTABLE_GENUS, NONORIENTABLE_GENUS):
            return f"{self.kind}({self.genus}) on {self.vertex_count} vertices"
        return f"{self.kind} on {self.vertex_count} vertices"


@dataclass
class RecognitionReport:
    """Outcome of all recognition checks on one facet list."""
    is_pure: bool
    is_weak_pm: bool
    is_strongly_connected: bool
    is_pseudomanifold: bool
    is_normal: bool
    is_combinatorial_manifold: Optional[bool]
    singular_vertices: List[Tuple[int, SurfaceType]] = field(default_factory=list)
    dim: int = -1
    n_vertices: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "n_vertices": self.n_vertices,
            "is_pure": self.is_pure,
            "is_weak_pm": self.is_weak_pm,
            "is_strongly_connected": self.is_strongly_connected,
            "is_pseudomanifold": self.is_pseudomanifold,
            "is_normal": self.is_normal,
            "is_combinatorial_manifold": self.is_combinatorial_manifold,
            "singular_vertices": [
                {"vertex": v, "kind": s.kind, "vertex_count": s.vertex_count, "genus": s.genus}
                for v, s in self.singular_vertices
            ],
        }


# ============================================
# PSEUDOMANIFOLD HIERARCHY
# ============================================

def is_weak_pseudomanifold(K: Complex) -> bool:
    if K.dim == 0:
        # the empty face lies in every facet
        return len(K.facets) == 2
    return all(count == 2 for count in K.ridges().values())


def facet_adjacency(K: Complex) -> nx.Graph:
    """Lambda(K): facets adjacent when they share a (d-1)-face."""
    graph = nx.Graph()
    graph.add_nodes_from(K.facets)
    if K.dim == 0:
        return graph
    by_ridge: Dict[int, List[int]] = {}
    for f in K.facets:
        for r in sub_masks(f, K.dim):
            by_ridge.setdefault(r, []).append(f)
    for members in by_ridge.values():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                graph.add_edge(a, b)
    return graph


def is_strongly_connected(K: Complex) -> bool:
    return nx.is_connected(facet_adjacency(K))


def is_pseudomanifold(K: Complex) -> bool:
    if K.dim == 0:
        # S^0_2 is a pseudomanifold by convention
        return is_weak_pseudomanifold(K)
    return is_weak_pseudomanifold(K) and is_strongly_connected(K)


def is_connected(K: Complex) -> bool:
    return nx.is_connected(edge_graph(K))


def is_normal(K: Complex) -> bool:
    """Connected weak pseudomanifold whose faces of dim <= d-2 have connected links."""
    if K.dim == 0:
        return is_pseudomanifold(K)
    if not is_weak_pseudomanifold(K) or not is_connected(K):
        return False
    for size in range(1, K.dim):
        for face in K.faces(size - 1):
            if not is_connected(link(K, face)):
                return False
    return True


def is_orientable(K: Complex) -> bool:
    """Propagate a facet orientation across ridges; any conflict means non-orientable."""
    if K.dim == 0 or not is_weak_pseudomanifold(K):
        return False
    by_ridge: Dict[int, List[int]] = {}
    for f in K.facets:
        for r in sub_masks(f, K.dim):
            by_ridge.setdefault(r, []).append(f)
    sign: Dict[int, int] = {}

    def induced(f: int, r: int) -> int:
        missing = f & ~r
        position = vertices_of(f).index(vertices_of(missing)[0])
        return -1 if position % 2 else 1

    for start in sorted(K.facets):
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for r in sub_masks(f, K.dim):
                for g in by_ridge[r]:
                    if g == f:
                        continue
                    wanted = -sign[f] * induced(f, r) * induced(g, r)
                    if g not in sign:
                        sign[g] = wanted
                        queue.append(g)
                    elif sign[g] != wanted:
                        return False
    return True


def classify_surface(K: Complex) -> SurfaceType:
    """Classify a connected closed 2-manifold by Euler characteristic and orientability."""
    n = K.n_vertices
    if K.dim != 2 or not is_weak_pseudomanifold(K) or not is_connected(K):
        return SurfaceType(NOT_A_SURFACE, n)
    for v in K.vertices:
        if not is_connected(link(K, 1 << v)):
            return SurfaceType(NOT_A_SURFACE, n)
    chi = euler_characteristic(K)
    if is_orientable(K):
        if chi == 2:
            return SurfaceType(SPHERE, n)
        if chi == 0:
            return SurfaceType(TORUS, n, 1)
        return SurfaceType(ORIENTABLE_GENUS, n, (2 - chi) // 2)
    if chi == 1:
        return SurfaceType(PROJECTIVE_PLANE, n, 1)
    if chi == 0:
        return SurfaceType(KLEIN_BOTTLE, n, 2)
    return SurfaceType(NONORIENTABLE_GENUS, n, 2 - chi)


def link_types(K: Complex) -> Dict[int, SurfaceType]:
    """Surface type of every vertex link of a 3-complex."""
    if K.dim != 3:
        raise ComplexError(f"Invalid complex: link types need dimension 3, got {K.dim}")
    return {v: classify_surface(link(K, 1 << v)) for v in K.vertices}


def singular_vertices(K: Complex) -> List[Tuple[int, SurfaceType]]:
    """Vertices whose link is not a 2-sphere, in label order."""
    return [(v, s) for v, s in link_types(K).items() if s.kind != SPHERE]


def is_combinatorial_3_manifold(K: Complex) -> bool:
    return K.dim == 3 and is_normal(K) and not singular_vertices(K)


def is_combinatorial_manifold(K: Complex) -> Optional[bool]:
    """Exact for d <= 3; None above (no sphere recognition in dimension >= 3)."""
    if K.dim == 0:
        return is_pseudomanifold(K)
    if K.dim in (1, 2):
        return is_normal(K)
    if K.dim == 3:
        return is_combinatorial_3_manifold(K)
    return None


# ============================================
# REPORTS
# ============================================

def recognize(K: Complex) -> RecognitionReport:
    weak = is_weak_pseudomanifold(K)
    strong = is_strongly_connected(K)
    normal = is_normal(K)
    singular = singular_vertices(K) if K.dim == 3 and normal else []
    manifold = is_combinatorial_manifold(K) if normal else False
    return RecognitionReport(
        is_pure=True,
        is_weak_pm=weak,
        is_strongly_connected=strong,
        is_pseudomanifold=is_pseudomanifold(K),
        is_normal=normal,
        is_combinatorial_manifold=manifold,
        singular_vertices=singular,
        dim=K.dim,
        n_vertices=K.n_vertices,
    )


def recognize_facets(facets: Iterable[int]) -> RecognitionReport:
    """Like ``recognize`` but accepts facet lists that may not be pure."""
    masks = list(facets)
    sizes = {popcount(f) for f in masks}
    if len(sizes) != 1:
        vertex_mask = 0
        for f in masks:
            vertex_mask |= f
        logger.info(f"Facet list is not pure (sizes {sorted(sizes)})")
        return RecognitionReport(
            is_pure=False,
            is_weak_pm=False,
            is_strongly_connected=False,
            is_pseudomanifold=False,
            is_normal=False,
            is_combinatorial_manifold=False,
            dim=max(sizes) - 1,
            n_vertices=popcount(vertex_mask),
        )
    return recognize(Complex(masks))
