"""
Octaflip Census

Exhaustive enumeration of small weak pseudomanifolds and the classification of
8-vertex normal 3-pseudomanifolds: neighbourly classes are completed from
their vertex links, then closed downwards under bistellar 2-moves. Every class
is matched one-to-one against the catalog.
"""

import json
import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .bistellar import NeighbourlyError, apply_move, enumerate_moves, neighbourly_ize, perform
from .catalog import NORMAL_SERIES, SPHERE_SERIES, get_catalog
from .complexes import (
    Complex,
    euler_characteristic,
    f_vector,
    face_key,
    format_face,
    is_neighbourly,
    mask_of,
    popcount,
    sub_masks,
    vertices_of,
)
from .config import CensusConfig
from .iso import are_isomorphic, automorphisms, canonical_certificate, canonical_labelling, link_signature
from .recognition import classify_surface, is_combinatorial_3_manifold, is_normal, singular_vertices


logger = logging.getLogger(__name__)

Certificate = Tuple[int, ...]

MIN_SURFACE_VERTICES = 3
MAX_SURFACE_VERTICES = 10
CENSUS_VERTICES = 8


class ClassificationError(ValueError):
    """Census and catalog disagree; carries the facet lists for manual adjudication."""

    def __init__(self, message: str, complexes: Sequence[Tuple[str, Complex]] = ()):
        self.complexes = list(complexes)
        super().__init__(message)

    def details(self) -> List[str]:
        lines = []
        for label, K in self.complexes:
            facets = " ".join(format_face(f) for f in sorted(K.facets, key=face_key))
            lines.append(f"{label}: {facets}")
        return lines


# ============================================
# RIDGE-COMPLETION SEARCH
# ============================================

@dataclass(frozen=True)
class SearchNode:
    """Partial complex: chosen facets plus the number of facets on each ridge."""
    chosen: FrozenSet[int]
    ridge_counts: Dict[int, int]
    vertex_mask: int
    dim: int

    @classmethod
    def start(cls, facets: Iterable[int], dim: int) -> "SearchNode":
        node: Optional[SearchNode] = cls(frozenset(), {}, 0, dim)
        for f in facets:
            node = node.extend(f)
            if node is None:
                raise ValueError("Invalid start facets: a ridge lies in more than two facets")
        return node

    @property
    def frontier(self) -> List[int]:
        """Deficient ridges (in exactly one chosen facet), lexicographically sorted."""
        return sorted((r for r, count in self.ridge_counts.items() if count == 1), key=face_key)

    def extend(self, facet: int) -> Optional["SearchNode"]:
        """Child node with ``facet`` added, or None if some ridge would exceed two facets."""
        counts = dict(self.ridge_counts)
        for r in sub_masks(facet, self.dim):
            count = counts.get(r, 0) + 1
            if count > 2:
                return None
            counts[r] = count
        return SearchNode(self.chosen | {facet}, counts, self.vertex_mask | facet, self.dim)

    def closed(self, face: int) -> bool:
        """True if ``face`` is used and no deficient ridge contains it (its link is a closed cycle set)."""
        used = False
        for r, count in self.ridge_counts.items():
            if r & face == face:
                if count == 1:
                    return False
                used = True
        return used


class RidgeCompletion:
    """Depth-first completion of deficient ridges.

    Always branches on the lexicographically least deficient ridge and tries
    the extra vertex in ascending order. Unused labels are interchangeable, so
    only the least unused one is tried.
    """

    def __init__(
        self,
        n: int,
        dim: int,
        pool: Optional[int] = None,
        fresh: bool = True,
        components: bool = False,
        prune_links: bool = False,
    ):
        self.n = n
        self.dim = dim
        self.pool = pool if pool is not None else (1 << n) - 1
        self.fresh = fresh
        self.components = components
        self.prune_links = prune_links
        self.nodes = 0

    def run(self, start: SearchNode) -> Iterator[FrozenSet[int]]:
        """Closed facet sets on exactly n vertices reachable from ``start``."""
        yield from self._complete(start)

    def _complete(self, node: SearchNode) -> Iterator[FrozenSet[int]]:
        self.nodes += 1
        frontier = node.frontier
        if not frontier:
            if popcount(node.vertex_mask) == self.n:
                yield node.chosen
            if self.components:
                for seed in self._component_seeds(node):
                    child = node.extend(seed)
                    if child is not None:
                        yield from self._complete(child)
            return
        ridge = frontier[0]
        for w in self._candidates(node, ridge):
            facet = ridge | 1 << w
            if facet in node.chosen:
                continue
            if self.prune_links and self._closes_link(node, ridge, w):
                continue
            child = node.extend(facet)
            if child is not None:
                yield from self._complete(child)

    def _candidates(self, node: SearchNode, ridge: int) -> List[int]:
        candidates = list(vertices_of(node.vertex_mask & self.pool & ~ridge))
        if self.fresh and popcount(node.vertex_mask) < self.n:
            unused = self.pool & ~node.vertex_mask
            if unused:
                candidates.append(vertices_of(unused)[0])
        return sorted(candidates)

    def _closes_link(self, node: SearchNode, ridge: int, w: int) -> bool:
        # a closed vertex or edge link can never grow again, so a second piece disconnects it
        bit = 1 << w
        if node.closed(bit):
            return True
        return any(node.closed(bit | 1 << x) for x in vertices_of(ridge))

    def _component_seeds(self, node: SearchNode) -> Iterator[int]:
        """Facets starting a new strongly connected component."""
        used = vertices_of(node.vertex_mask)
        unused = vertices_of(self.pool & ~node.vertex_mask)
        size = self.dim + 1
        for k in range(0, min(size, len(unused)) + 1):
            fresh_mask = mask_of(unused[:k])
            for old in combinations(used, size - k):
                facet = mask_of(old) | fresh_mask
                if all(node.ridge_counts.get(r, 0) == 0 for r in sub_masks(facet, self.dim)):
                    yield facet


def _dedupe(facet_sets: Iterable[FrozenSet[int]]) -> List[Complex]:
    certificates = {canonical_certificate(Complex(facets)) for facets in facet_sets}
    return [Complex(c) for c in sorted(certificates)]


@lru_cache(maxsize=None)
def _weak_2pm(n: int) -> Tuple[Complex, ...]:
    engine = RidgeCompletion(n=n, dim=2, components=True)
    classes = _dedupe(engine.run(SearchNode.start([0b111], 2)))
    logger.info(f"{len(classes)} weak 2-pseudomanifolds on {n} vertices ({engine.nodes} search nodes)")
    return tuple(classes)


def enumerate_weak_2pm(n: int = 7) -> List[Complex]:
    """All pure 2-complexes on exactly n vertices with every edge in exactly two
    triangles, up to isomorphism, as canonical forms on 0..n-1."""
    if not MIN_SURFACE_VERTICES <= n <= MAX_SURFACE_VERTICES:
        raise ValueError(
            f"Invalid vertex count: {n}. Must be in {MIN_SURFACE_VERTICES}..{MAX_SURFACE_VERTICES}"
        )
    return list(_weak_2pm(n))


def neighbourly_links() -> List[Complex]:
    """The closed surfaces on 7 vertices: candidate vertex links of the census."""
    return [K for K in enumerate_weak_2pm(CENSUS_VERTICES - 1) if classify_surface(K).is_surface]


def _least_in_orbit(chosen: FrozenSet[int], group: Sequence[Dict[int, int]]) -> bool:
    key = tuple(sorted(chosen))
    for g in group:
        image = tuple(sorted(mask_of(g.get(v, v) for v in vertices_of(f)) for f in chosen))
        if image < key:
            return False
    return True


def _complete_link(task: Tuple[Tuple[int, ...], bool]) -> List[Certificate]:
    """Certificates of the neighbourly normal completions of the cone over one link."""
    lk_facets, symmetry = task
    lk = Complex(lk_facets)
    apex = 1 << (CENSUS_VERTICES - 1)
    start = SearchNode.start([f | apex for f in lk.facets], 3)
    engine = RidgeCompletion(n=CENSUS_VERTICES, dim=3, pool=lk.vertex_mask, fresh=False)
    group = automorphisms(lk)[1:] if symmetry else []
    certificates = set()
    leaves = 0
    for chosen in engine.run(start):
        leaves += 1
        if group and not _least_in_orbit(chosen, group):
            continue
        K = Complex(chosen)
        if is_neighbourly(K) and is_normal(K):
            certificates.add(canonical_certificate(K))
    logger.debug(f"Link {lk!r}: {leaves} completions, {len(certificates)} classes, {engine.nodes} nodes")
    return sorted(certificates)


def enumerate_neighbourly_normal_8(symmetry: bool = True, jobs: int = 1) -> List[Complex]:
    """All 8-vertex neighbourly normal 3-pseudomanifolds up to isomorphism.

    The facets through vertex 7 are the cone over one of the 7-vertex closed
    surfaces; the rest is completed over the 35 tetrahedra on 0..6.
    """
    tasks = [(tuple(sorted(lk.facets)), symmetry) for lk in neighbourly_links()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_complete_link, tasks))
    else:
        results = [_complete_link(task) for task in tasks]
    certificates = set()
    for task, found in zip(tasks, results):
        logger.info(f"Link with {len(task[0])} triangles: {len(found)} neighbourly classes")
        certificates.update(found)
    return [Complex(c) for c in sorted(certificates)]


def enumerate_normal_3pm_flat(n: int = CENSUS_VERTICES) -> List[Complex]:
    """All normal 3-pseudomanifolds on exactly n vertices by one flat ridge completion."""
    engine = RidgeCompletion(n=n, dim=3, prune_links=True)
    classes = _dedupe(
        facets for facets in engine.run(SearchNode.start([0b1111], 3)) if is_normal(Complex(facets))
    )
    logger.info(f"Flat search: {len(classes)} normal 3-pseudomanifolds on {n} vertices ({engine.nodes} nodes)")
    return classes


# ============================================
# 2-MOVE CLOSURE
# ============================================

@dataclass
class CensusClass:
    """One isomorphism class, stored as its canonical form on 0..n-1."""
    complex: Complex
    layer: int
    name: Optional[str] = None
    labels: Dict[int, int] = field(default_factory=dict)
    record: Dict[str, Any] = field(default_factory=dict)

    @property
    def certificate(self) -> Certificate:
        return tuple(sorted(self.complex.facets))

    def catalog_face(self, face: int) -> str:
        """A face of the canonical form written in catalog labels."""
        return format_face(mask_of(self.labels.get(v, v) for v in vertices_of(face)))


@dataclass(frozen=True)
class PosetEdge:
    parent: int
    child: int
    faces: Tuple[int, ...]


@dataclass
class CensusReport:
    classes: List[CensusClass]
    poset_edges: List[PosetEdge]

    def layer_sizes(self) -> List[int]:
        counts = Counter(c.layer for c in self.classes)
        return [counts.get(layer, 0) for layer in range(max(counts) + 1)] if counts else []

    def named(self, name: str) -> CensusClass:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def index_of(self, K: Complex) -> Optional[int]:
        certificate = canonical_certificate(K)
        for i, c in enumerate(self.classes):
            if c.certificate == certificate:
                return i
        return None

    def graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        for i, c in enumerate(self.classes):
            graph.add_node(i, layer=c.layer, name=c.name)
        for edge in self.poset_edges:
            graph.add_edge(edge.parent, edge.child, faces=edge.faces)
        return graph


def class_record(K: Complex) -> Dict[str, Any]:
    """Invariants reported per class."""
    return {
        "f_vector": list(f_vector(K)),
        "chi": euler_characteristic(K),
        "n_s": len(singular_vertices(K)),
        "links": {v: link_signature(K, v) for v, _ in singular_vertices(K)},
        "combinatorial_manifold": is_combinatorial_3_manifold(K),
    }


def _non_edge_count(K: Complex) -> int:
    n = K.n_vertices
    return n * (n - 1) // 2 - len(K.faces(1))


def close_under_2moves(seeds: Iterable[Complex]) -> CensusReport:
    """Breadth-first closure under bistellar 2-moves, deduplicated by canonical form."""
    found: Dict[Certificate, Complex] = {}
    for K in seeds:
        certificate = canonical_certificate(K)
        found.setdefault(certificate, Complex(certificate))
    queue = deque(sorted(found))
    edge_faces: Dict[Tuple[Certificate, Certificate], List[int]] = {}
    while queue:
        certificate = queue.popleft()
        K = found[certificate]
        for move in enumerate_moves(K, K.dim - 1):
            child = canonical_certificate(perform(K, move))
            edge_faces.setdefault((certificate, child), []).append(move.alpha)
            if child not in found:
                found[child] = Complex(child)
                queue.append(child)
    ordered = sorted(found, key=lambda c: (_non_edge_count(found[c]), c))
    index = {c: i for i, c in enumerate(ordered)}
    classes = [
        CensusClass(complex=found[c], layer=_non_edge_count(found[c]), record=class_record(found[c]))
        for c in ordered
    ]
    edges = [
        PosetEdge(index[p], index[c], tuple(sorted(faces, key=face_key)))
        for (p, c), faces in sorted(edge_faces.items(), key=lambda item: (index[item[0][0]], index[item[0][1]]))
    ]
    report = CensusReport(classes=classes, poset_edges=edges)
    logger.info(f"2-move closure: {len(classes)} classes, layer sizes {report.layer_sizes()}")
    return report


def verify_poset_edges(report: CensusReport) -> None:
    """Re-apply every recorded move and check it lands on the recorded class."""
    for edge in report.poset_edges:
        parent = report.classes[edge.parent]
        child = report.classes[edge.child]
        for face in edge.faces:
            if not are_isomorphic(apply_move(parent.complex, face), child.complex):
                raise ClassificationError(
                    f"Poset edge {parent.name or edge.parent} -> {child.name or edge.child} "
                    f"via {format_face(face)} does not reproduce the child class",
                    [("parent", parent.complex), ("child", child.complex)],
                )


# ============================================
# CATALOG MATCHING AND REPORTS
# ============================================

def match_catalog(report: CensusReport, names: Sequence[str]) -> CensusReport:
    """Name every class by the catalog entry it is isomorphic to; the match must be one-to-one."""
    catalog = get_catalog()
    by_certificate: Dict[Certificate, str] = {}
    labellings: Dict[str, Dict[int, int]] = {}
    for name in names:
        K = catalog.get(name)
        certificate = canonical_certificate(K)
        if certificate in by_certificate:
            raise ClassificationError(
                f"Catalog entries {by_certificate[certificate]} and {name} are isomorphic",
                [(by_certificate[certificate], catalog.get(by_certificate[certificate])), (name, K)],
            )
        by_certificate[certificate] = name
        labellings[name] = canonical_labelling(K)
    matched = set()
    for c in report.classes:
        name = by_certificate.get(c.certificate)
        if name is None:
            raise ClassificationError(
                f"UNMATCHED census class in layer {c.layer} with f-vector {tuple(c.record['f_vector'])}",
                [("census class", c.complex)],
            )
        c.name = name
        c.labels = {label: v for v, label in labellings[name].items()}
        matched.add(name)
    missing = [name for name in names if name not in matched]
    if missing:
        raise ClassificationError(
            f"Catalog entries matched by no census class: {', '.join(missing)}",
            [(name, catalog.get(name)) for name in missing],
        )
    logger.info(f"Matched {len(report.classes)} classes one-to-one against the catalog")
    return report


@dataclass(frozen=True)
class TableRow:
    name: str
    f_vector: Tuple[int, ...]
    chi: int
    n_s: int
    links: Tuple[Tuple[int, str], ...]

    def links_text(self) -> str:
        return ", ".join(f"{v}:{name}" for v, name in self.links) or "-"


def table_rows(report: CensusReport) -> List[TableRow]:
    """Per-class f-vector, Euler characteristic and singular links in catalog labels."""
    rows = []
    for c in report.classes:
        links = tuple(sorted((c.labels.get(v, v), name) for v, name in c.record["links"].items()))
        rows.append(TableRow(
            name=c.name or f"class_{c.certificate}",
            f_vector=tuple(c.record["f_vector"]),
            chi=c.record["chi"],
            n_s=c.record["n_s"],
            links=links,
        ))
    return sorted(rows, key=lambda row: _series_index(row.name))


def _series_index(name: str) -> Tuple:
    for series in (SPHERE_SERIES, NORMAL_SERIES):
        if name in series:
            return (0, series.index(name))
    return (1, name)


def emit_table(rows: Sequence[TableRow]) -> str:
    lines = [f"{'name':<8} {'f-vector':<16} {'chi':>3} {'n_s':>3}  singular links"]
    for row in rows:
        f = "(" + ", ".join(str(x) for x in row.f_vector[1:]) + ")"
        lines.append(f"{row.name:<8} {f:<16} {row.chi:>3} {row.n_s:>3}  {row.links_text()}")
    return "\n".join(lines) + "\n"


def emit_hasse(report: CensusReport, title: str) -> str:
    """DOT text of the 2-move poset; one ``rank = same`` block per layer."""
    graph = report.graph()
    names = {i: c.name or f"class{i}" for i, c in enumerate(report.classes)}
    lines = [f"digraph {title} {{", "\tgraph [rankdir=TB];"]
    for layer in sorted({c.layer for c in report.classes}):
        members = [i for i, c in enumerate(report.classes) if c.layer == layer]
        lines.append("\t{")
        lines.append("\t\trank = same;")
        for i in sorted(members, key=lambda i: _series_index(names[i])):
            lines.append(f'\t\t"{names[i]}" [label="{names[i]}"];')
        lines.append("\t}")
    edges = sorted(graph.edges(data=True), key=lambda e: (_series_index(names[e[0]]), _series_index(names[e[1]])))
    for parent, child, data in edges:
        faces = ",".join(report.classes[parent].catalog_face(f) for f in data["faces"])
        lines.append(f'\t"{names[parent]}" -> "{names[child]}" [label="{faces}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class ReachabilityResult:
    """Outcome of raising every non-neighbourly class to a neighbourly one by 1-moves."""
    reached: Dict[str, str] = field(default_factory=dict)
    scripts: Dict[str, str] = field(default_factory=dict)
    failures: List[str] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return len(self.reached) + len(self.failures)

    @property
    def passed(self) -> bool:
        return not self.failures


def check_neighbourly_reachability(reports: Sequence[CensusReport]) -> ReachabilityResult:
    targets: Dict[Certificate, str] = {}
    for report in reports:
        for c in report.classes:
            if c.layer == 0:
                targets[c.certificate] = c.name or str(c.certificate)
    result = ReachabilityResult()
    for report in reports:
        for c in report.classes:
            if c.layer == 0:
                continue
            name = c.name or str(c.certificate)
            try:
                final, script = neighbourly_ize(c.complex)
            except NeighbourlyError as e:
                result.failures.append(f"{name}: {e}")
                continue
            target = targets.get(canonical_certificate(final))
            if target is None:
                result.failures.append(f"{name}: 1-moves end outside the neighbourly classes")
                continue
            result.reached[name] = target
            result.scripts[name] = str(script)
    logger.info(f"Neighbourly reachability: {len(result.reached)} of {result.checked} classes")
    return result


# ============================================
# FULL CENSUS
# ============================================

@dataclass
class Census:
    seeds: List[Complex]
    spheres: CensusReport
    normals: CensusReport
    reachability: ReachabilityResult
    flat_count: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        classes = []
        for series, report in (("sphere", self.spheres), ("normal", self.normals)):
            for c in report.classes:
                named = c.complex.relabel(c.labels) if c.labels else c.complex
                classes.append({
                    "name": c.name,
                    "series": series,
                    "layer": c.layer,
                    "f_vector": c.record["f_vector"],
                    "chi": c.record["chi"],
                    "n_s": c.record["n_s"],
                    "combinatorial_manifold": c.record["combinatorial_manifold"],
                    "singular_links": {str(c.labels.get(v, v)): s for v, s in c.record["links"].items()},
                    "facets": [list(f) for f in named.facet_tuples()],
                })
        edges = []
        for report in (self.spheres, self.normals):
            for edge in report.poset_edges:
                parent = report.classes[edge.parent]
                edges.append({
                    "parent": parent.name,
                    "child": report.classes[edge.child].name,
                    "faces": [parent.catalog_face(f) for f in edge.faces],
                })
        return {
            "vertices": CENSUS_VERTICES,
            "counts": {
                "neighbourly": len(self.seeds),
                "spheres": len(self.spheres.classes),
                "normals": len(self.normals.classes),
                "total": len(self.spheres.classes) + len(self.normals.classes),
            },
            "layer_sizes": {"spheres": self.spheres.layer_sizes(), "normals": self.normals.layer_sizes()},
            "classes": classes,
            "poset_edges": edges,
            "neighbourly_reachability": {
                "checked": self.reachability.checked,
                "passed": self.reachability.passed,
                "reached": self.reachability.reached,
                "failures": self.reachability.failures,
            },
            "flat_count": self.flat_count,
        }


def run_census(config: Optional[CensusConfig] = None) -> Census:
    config = config or CensusConfig()
    seeds = enumerate_neighbourly_normal_8(symmetry=config.symmetry, jobs=config.jobs)
    logger.info(f"{len(seeds)} neighbourly normal 3-pseudomanifolds on {CENSUS_VERTICES} vertices")
    sphere_seeds = [K for K in seeds if is_combinatorial_3_manifold(K)]
    normal_seeds = [K for K in seeds if not is_combinatorial_3_manifold(K)]
    spheres = match_catalog(close_under_2moves(sphere_seeds), SPHERE_SERIES)
    normals = match_catalog(close_under_2moves(normal_seeds), NORMAL_SERIES)
    verify_poset_edges(spheres)
    verify_poset_edges(normals)
    flat_count = None
    if config.exhaustive:
        flat = {canonical_certificate(K) for K in enumerate_normal_3pm_flat(CENSUS_VERTICES)}
        closed = {c.certificate for c in spheres.classes + normals.classes}
        if flat != closed:
            extra = [("flat search only", Complex(c)) for c in sorted(flat - closed)]
            extra += [("closure only", Complex(c)) for c in sorted(closed - flat)]
            raise ClassificationError(
                f"Flat search found {len(flat)} classes, 2-move closure found {len(closed)}", extra
            )
        flat_count = len(flat)
    reachability = check_neighbourly_reachability([spheres, normals])
    if not reachability.passed:
        raise ClassificationError(f"Neighbourly reachability failed: {'; '.join(reachability.failures)}")
    return Census(seeds=seeds, spheres=spheres, normals=normals, reachability=reachability, flat_count=flat_count)


def write_outputs(census: Census, directory: Path) -> List[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    outputs = {
        "census.json": json.dumps(census.to_dict(), indent=2, sort_keys=True) + "\n",
        "table1.txt": emit_table(table_rows(census.normals)),
        "hasse_spheres.dot": emit_hasse(census.spheres, "spheres"),
        "hasse_normals.dot": emit_hasse(census.normals, "normals"),
    }
    paths = []
    for filename, text in outputs.items():
        path = directory / filename
        path.write_text(text)
        paths.append(path)
        logger.debug(f"Wrote {path}")
    return paths
