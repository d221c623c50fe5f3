"""
Octaflip Branched Coverings

Certifies simplicial maps as k-fold branched coverings with a discrete
branch locus and lifts bistellar moves through them.

The branch locus is computed, never trusted: a target vertex y is in it when
some preimage x has a link that f does not map isomorphically onto lk(y).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from .bistellar import Move, apply_move, is_removable, perform
from .complexes import (
    Complex,
    FaceLike,
    MAX_VERTEX,
    face_key,
    f_vector,
    format_face,
    link,
    popcount,
    simplex,
    suspension,
    vertices_of,
)


logger = logging.getLogger(__name__)


class CoveringError(ValueError):
    """Invalid simplicial map or a failed lift."""


@dataclass(frozen=True)
class SimplicialMap:
    source: Complex
    target: Complex
    vertex_map: Dict[int, int]

    def __post_init__(self):
        missing = [v for v in self.source.vertices if v not in self.vertex_map]
        if missing:
            raise CoveringError(f"Invalid simplicial map: no image for source vertices {missing}")
        stray = sorted({self.vertex_map[v] for v in self.source.vertices} - set(self.target.vertices))
        if stray:
            raise CoveringError(f"Invalid simplicial map: images {stray} are not target vertices")

    def image(self, face: int) -> int:
        result = 0
        for v in vertices_of(face):
            result |= 1 << self.vertex_map[v]
        return result

    def preimages(self, face: int, dim: int) -> List[int]:
        """Source faces of dimension ``dim`` mapped onto ``face``."""
        return sorted(
            (s for s in self.source.faces(dim) if self.image(s) == face and popcount(s) == popcount(face)),
            key=face_key,
        )


@dataclass(frozen=True)
class BranchedCoveringCertificate:
    k: int
    branch_locus: FrozenSet[int]


def _maps_link_isomorphically(f: SimplicialMap, x: int) -> bool:
    lk_source = link(f.source, 1 << x)
    lk_target = link(f.target, 1 << f.vertex_map[x])
    images = [f.vertex_map[v] for v in lk_source.vertices]
    if len(set(images)) != len(images) or len(lk_source) != len(lk_target):
        return False
    return {f.image(s) for s in lk_source.facets} == lk_target.facets


def check_branched_covering(f: SimplicialMap) -> Optional[BranchedCoveringCertificate]:
    """Certificate if every target facet has the same number of preimages."""
    if f.source.dim != f.target.dim:
        raise CoveringError(f"Invalid simplicial map: dimensions {f.source.dim} and {f.target.dim} differ")
    counts: Counter = Counter()
    for sigma in f.source.facets:
        image = f.image(sigma)
        if popcount(image) != popcount(sigma):
            raise CoveringError(f"Degenerate facet image: {format_face(sigma)} -> {format_face(image)}")
        if image not in f.target.facets:
            raise CoveringError(f"Facet image {format_face(image)} of {format_face(sigma)} is not a target facet")
        counts[image] += 1
    if set(counts) != set(f.target.facets) or len(set(counts.values())) != 1:
        logger.info("Facet preimage counts are not uniform")
        return None
    k = next(iter(counts.values()))
    locus = frozenset(
        f.vertex_map[x] for x in f.source.vertices if not _maps_link_isomorphically(f, x)
    ) if f.source.dim >= 1 else frozenset()
    return BranchedCoveringCertificate(k=k, branch_locus=locus)


def edge_preimage_counts(f: SimplicialMap) -> Dict[int, int]:
    counts: Counter = Counter(f.image(e) for e in f.source.faces(1))
    return {e: counts.get(e, 0) for e in f.target.faces(1)}


# ============================================
# LIFTS
# ============================================

def lift_proper_move(f: SimplicialMap, alpha: FaceLike) -> Tuple[List[Move], SimplicialMap]:
    """Lift kappa_alpha (alpha an l-face, 1 <= l < d-1) to k moves upstairs."""
    alpha = simplex(alpha)
    certificate = check_branched_covering(f)
    if certificate is None:
        raise CoveringError("Map is not a branched covering")
    d = f.target.dim
    l = popcount(alpha) - 1
    if not 1 <= l < d - 1:
        raise CoveringError(f"Invalid lift dimension: {l}. Must satisfy 1 <= l < {d - 1}")
    move = is_removable(f.target, alpha)
    if move is None:
        raise CoveringError(f"Face {format_face(alpha)} is not removable in the target")
    preimages = f.preimages(alpha, l)
    if len(preimages) != certificate.k:
        raise CoveringError(
            f"Face {format_face(alpha)} has {len(preimages)} preimages, expected {certificate.k}"
        )
    current = f.source
    lifted: List[Move] = []
    for face in preimages:
        lifted_move = is_removable(current, face)
        if lifted_move is None:
            raise CoveringError(f"Preimage {format_face(face)} of {format_face(alpha)} is not removable")
        current = perform(current, lifted_move)
        lifted.append(lifted_move)
    result = SimplicialMap(current, perform(f.target, move), dict(f.vertex_map))
    _recertify(result, certificate)
    logger.debug(f"Lifted {move} to {len(lifted)} moves")
    return lifted, result


def lift_star(
    f: SimplicialMap, target_facet: FaceLike, new_target_vertex: int, new_source_vertices: Sequence[int]
) -> SimplicialMap:
    """Starring a vertex in a target facet lifts to starring one vertex in each preimage facet."""
    target_facet = simplex(target_facet)
    certificate = check_branched_covering(f)
    if certificate is None:
        raise CoveringError("Map is not a branched covering")
    preimages = f.preimages(target_facet, f.target.dim)
    if len(preimages) != len(new_source_vertices):
        raise CoveringError(
            f"Facet {format_face(target_facet)} has {len(preimages)} preimages, "
            f"got {len(new_source_vertices)} new vertices"
        )
    current = f.source
    vertex_map = dict(f.vertex_map)
    for face, w in zip(preimages, new_source_vertices):
        current = apply_move(current, face, w)
        vertex_map[w] = new_target_vertex
    result = SimplicialMap(current, apply_move(f.target, target_facet, new_target_vertex), vertex_map)
    _recertify(result, certificate)
    return result


def _recertify(f: SimplicialMap, original: BranchedCoveringCertificate) -> BranchedCoveringCertificate:
    certificate = check_branched_covering(f)
    if certificate is None or certificate.k != original.k:
        raise CoveringError("Lifted map is no longer a branched covering of the same degree")
    if not certificate.branch_locus <= original.branch_locus:
        raise CoveringError(
            f"Branch locus grew from {sorted(original.branch_locus)} to {sorted(certificate.branch_locus)}"
        )
    return certificate


# ============================================
# CONSTRUCTIONS
# ============================================

# Upper ring 1..5, lower ring 7..11, poles 0 and 6; antipode(v) = v + 6 mod 12.
ICOSAHEDRON_FACETS = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (6, 10, 11), (6, 7, 11), (6, 7, 8), (6, 8, 9), (6, 9, 10),
    (1, 2, 10), (2, 3, 11), (3, 4, 7), (4, 5, 8), (1, 5, 9),
    (2, 10, 11), (3, 7, 11), (4, 7, 8), (5, 8, 9), (1, 9, 10),
)


def icosahedron() -> Complex:
    """Boundary of the icosahedron with antipodal labelling."""
    return Complex.from_faces(ICOSAHEDRON_FACETS)


def antipodal_map() -> SimplicialMap:
    """The 2-fold covering of the 6-vertex projective plane by the icosahedron."""
    I = icosahedron()
    vertex_map = {v: v % 6 for v in I.vertices}
    quotient = Complex({sum(1 << vertex_map[v] for v in vertices_of(f)) for f in I.facets})
    return SimplicialMap(I, quotient, vertex_map)


def trivial_cover(K: Complex, k: int) -> SimplicialMap:
    """k disjoint relabelled copies of K mapping onto K."""
    if k < 1:
        raise CoveringError(f"Invalid sheet count: {k}. Must be at least 1")
    offset = max(K.vertices) + 1
    if k * offset - 1 > MAX_VERTEX:
        raise CoveringError(f"Invalid sheet count: {k} copies exceed vertex label {MAX_VERTEX}")
    facets = set()
    vertex_map: Dict[int, int] = {}
    for sheet in range(k):
        shift = sheet * offset
        for v in K.vertices:
            vertex_map[v + shift] = v
        facets.update(sum(1 << (v + shift) for v in vertices_of(f)) for f in K.facets)
    return SimplicialMap(Complex(facets), K, vertex_map)


def suspension_cover() -> SimplicialMap:
    """S^0(12,13) * I over S^0(6,7) * R_1, branched at the suspension points."""
    base = antipodal_map()
    source = suspension(base.source, 12, 13)
    target = suspension(base.target, 6, 7)
    vertex_map = dict(base.vertex_map)
    vertex_map.update({12: 6, 13: 7})
    return SimplicialMap(source, target, vertex_map)


@dataclass(frozen=True)
class QuotientReport:
    cover_f_vector: Tuple[int, ...]
    cover_is_sphere: bool
    k: int
    branch_locus: FrozenSet[int]
    witness: Dict[int, int]


def verify_n24_quotient(n24: Optional[Complex] = None) -> QuotientReport:
    """Certify N_24 as a 2-fold branched quotient of the 14-vertex S^0 * I."""
    from .homology import homology
    from .iso import are_isomorphic
    from .recognition import is_combinatorial_3_manifold

    if n24 is None:
        from .catalog import get
        n24 = get("N_24")
    cover = suspension_cover()
    first = check_branched_covering(cover)
    if first is None or first.k != 2 or first.branch_locus != frozenset({6, 7}):
        raise CoveringError(f"Suspension map is not the expected 2-fold covering: {first}")
    result = are_isomorphic(cover.target, n24)
    if not result:
        raise CoveringError(f"N_24 is not isomorphic to S^0 * R_1 ({result.detail})")
    composite_map = {v: result.bijection[t] for v, t in cover.vertex_map.items()}
    certificate = check_branched_covering(SimplicialMap(cover.source, n24, composite_map))
    if certificate is None or certificate.k != 2:
        raise CoveringError("Composite map onto N_24 is not a 2-fold branched covering")
    if certificate.branch_locus != frozenset(result.bijection[v] for v in first.branch_locus):
        raise CoveringError(f"Unexpected branch locus {sorted(certificate.branch_locus)} in N_24")
    profile = homology(cover.source)
    is_sphere = is_combinatorial_3_manifold(cover.source) and profile.betti == (1, 0, 0, 1) and not any(
        g.torsion for g in profile.groups
    )
    if not is_sphere:
        raise CoveringError("The 14-vertex cover is not a combinatorial 3-manifold with sphere homology")
    logger.info(f"N_24 certified: k=2, branch locus {sorted(certificate.branch_locus)}")
    return QuotientReport(
        cover_f_vector=f_vector(cover.source),
        cover_is_sphere=is_sphere,
        k=certificate.k,
        branch_locus=certificate.branch_locus,
        witness=result.bijection,
    )


def read_map(path: Union[str, Path]) -> Dict[int, int]:
    """Whitespace-separated ``source target`` pairs, ``#`` comments allowed."""
    from .complexes import FacetParseError

    vertex_map: Dict[int, int] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2 or not all(t.isdigit() for t in tokens):
            raise FacetParseError("expected 'source target' vertex pair", line_no, 1, str(path))
        source, target = int(tokens[0]), int(tokens[1])
        if source in vertex_map:
            raise FacetParseError(f"vertex {source} mapped twice", line_no, 1, str(path))
        vertex_map[source] = target
    return vertex_map
