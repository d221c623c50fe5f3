"""
Octaflip Simplicial Complexes

Value types and elementary queries for finite pure simplicial complexes.
Vertices are integers in 0..63 and every simplex is stored as a 64-bit
vertex mask, so subset, union and disjointness tests are mask arithmetic.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx


logger = logging.getLogger(__name__)

MAX_VERTEX = 63

# A face is passed around as a vertex mask; public helpers also accept any
# iterable of vertex labels.
FaceLike = Union[int, Iterable[int]]


class ComplexError(ValueError):
    """Raised for invalid complexes, faces or vertex labels."""


class FacetParseError(ComplexError):
    """Malformed facet-list input, located by 1-based line and column."""

    def __init__(self, message: str, line: int, column: int, path: Optional[str] = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")


# ============================================
# MASK HELPERS
# ============================================

def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=1 << 16)
def vertices_of(mask: int) -> Tuple[int, ...]:
    """Sorted vertex labels of a mask."""
    result = []
    v = 0
    while mask:
        if mask & 1:
            result.append(v)
        mask >>= 1
        v += 1
    return tuple(result)


def mask_of(vertices: Iterable[int]) -> int:
    """Vertex mask of an iterable of labels (labels validated)."""
    mask = 0
    for v in vertices:
        if not isinstance(v, int) or v < 0 or v > MAX_VERTEX:
            raise ComplexError(f"Invalid vertex label: {v}. Must be an integer in 0..{MAX_VERTEX}")
        mask |= 1 << v
    return mask


def simplex(face: FaceLike) -> int:
    """Normalize a face given as mask or label iterable to a mask."""
    if isinstance(face, int):
        if face <= 0 or face >= 1 << (MAX_VERTEX + 1):
            raise ComplexError(f"Invalid face mask: {face}")
        return face
    mask = mask_of(face)
    if mask == 0:
        raise ComplexError("Invalid face: empty vertex set")
    return mask


@lru_cache(maxsize=1 << 16)
def sub_masks(mask: int, size: int) -> Tuple[int, ...]:
    """All sub-masks of ``mask`` with exactly ``size`` vertices."""
    return tuple(
        sum(1 << v for v in combo) for combo in combinations(vertices_of(mask), size)
    )


def face_key(mask: int) -> Tuple[int, ...]:
    """Lexicographic sort key of a face (its sorted vertex tuple)."""
    return vertices_of(mask)


def format_face(mask: int) -> str:
    """Render a face the way move scripts write it: ``238`` or ``1 10 11``."""
    labels = vertices_of(mask)
    if all(v < 10 for v in labels):
        return "".join(str(v) for v in labels)
    return " ".join(str(v) for v in labels)


# ============================================
# COMPLEX
# ============================================

class Complex:
    """An immutable pure simplicial complex given by its facet masks."""

    __slots__ = ("facets", "dim", "vertex_mask", "_cache")

    def __init__(self, facets: Iterable[int]):
        facet_set = frozenset(facets)
        if not facet_set:
            raise ComplexError("Invalid complex: facet set is empty")
        sizes = {popcount(f) for f in facet_set}
        if len(sizes) != 1:
            raise ComplexError(f"Invalid complex: facets of mixed sizes {sorted(sizes)}")
        size = sizes.pop()
        vertex_mask = 0
        for f in facet_set:
            if f <= 0 or f >= 1 << (MAX_VERTEX + 1):
                raise ComplexError(f"Invalid facet mask: {f}")
            vertex_mask |= f
        self.facets: FrozenSet[int] = facet_set
        self.dim: int = size - 1
        self.vertex_mask: int = vertex_mask
        self._cache: Dict[Any, Any] = {}

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[int]]) -> "Complex":
        """Build from facets given as label iterables."""
        return cls(mask_of(face) for face in faces)

    @property
    def vertices(self) -> Tuple[int, ...]:
        return vertices_of(self.vertex_mask)

    @property
    def n_vertices(self) -> int:
        return popcount(self.vertex_mask)

    def facet_tuples(self) -> List[Tuple[int, ...]]:
        """Facets as sorted vertex tuples, in lexicographic order."""
        return sorted(vertices_of(f) for f in self.facets)

    def faces(self, i: int) -> FrozenSet[int]:
        """All i-dimensional faces (masks)."""
        if i < 0 or i > self.dim:
            raise ComplexError(f"Invalid face dimension: {i}. Must be in 0..{self.dim}")
        key = ("faces", i)
        if key not in self._cache:
            found = set()
            for f in self.facets:
                found.update(sub_masks(f, i + 1))
            self._cache[key] = frozenset(found)
        return self._cache[key]

    def ridges(self) -> Dict[int, int]:
        """Map from each (d-1)-face to the number of facets containing it."""
        if "ridges" not in self._cache:
            counts: Counter = Counter()
            if self.dim > 0:
                for f in self.facets:
                    counts.update(sub_masks(f, self.dim))
            self._cache["ridges"] = dict(counts)
        return self._cache["ridges"]

    def contains_face(self, face: FaceLike) -> bool:
        mask = simplex(face)
        return any(f & mask == mask for f in self.facets)

    def star_facets(self, face: FaceLike) -> List[int]:
        """Facets containing the face."""
        mask = simplex(face)
        return [f for f in self.facets if f & mask == mask]

    def relabel(self, mapping: Dict[int, int]) -> "Complex":
        """Image under a vertex map that must be injective on V(K)."""
        images = [mapping.get(v, v) for v in self.vertices]
        if len(set(images)) != len(images):
            raise ComplexError("Invalid relabelling: map is not injective on the vertex set")
        lookup = {v: mapping.get(v, v) for v in self.vertices}
        return Complex(mask_of(lookup[v] for v in vertices_of(f)) for f in self.facets)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Complex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __len__(self) -> int:
        return len(self.facets)

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, f0={self.n_vertices}, facets={len(self.facets)})"


@dataclass(frozen=True)
class FaceSet:
    """Possibly non-pure complex given by its maximal faces (induced subcomplexes)."""
    maximal_faces: FrozenSet[int]
    is_pure: bool

    @property
    def dim(self) -> int:
        return max(popcount(f) for f in self.maximal_faces) - 1 if self.maximal_faces else -1

    def to_complex(self) -> Complex:
        if not self.is_pure or not self.maximal_faces:
            raise ComplexError("Induced face set is not a pure complex")
        return Complex(self.maximal_faces)


# ============================================
# QUERIES
# ============================================

def faces(K: Complex, i: int) -> FrozenSet[int]:
    return K.faces(i)


def f_vector(K: Complex) -> Tuple[int, ...]:
    return tuple(len(K.faces(i)) for i in range(K.dim + 1))


def euler_characteristic(K: Complex) -> int:
    return sum((-1) ** i * f for i, f in enumerate(f_vector(K)))


def link(K: Complex, face: FaceLike) -> Complex:
    """Link of a non-maximal face, as a pure complex of dimension d - dim(face) - 1."""
    mask = simplex(face)
    rest = [f & ~mask for f in K.facets if f & mask == mask]
    if not rest:
        raise ComplexError(f"Invalid face: {format_face(mask)} is not a face of the complex")
    if any(r == 0 for r in rest):
        raise ComplexError(f"Invalid face: {format_face(mask)} is a facet and has an empty link")
    return Complex(rest)


def link_vertex_mask(K: Complex, face: FaceLike) -> int:
    """Vertex mask of lk(face); 0 when the face is absent or a facet."""
    mask = simplex(face)
    result = 0
    for f in K.facets:
        if f & mask == mask:
            result |= f
    return result & ~mask


def degree(K: Complex, face: FaceLike) -> int:
    """Number of vertices in the link of a face."""
    mask = simplex(face)
    if not K.contains_face(mask):
        raise ComplexError(f"Invalid face: {format_face(mask)} is not a face of the complex")
    return popcount(link_vertex_mask(K, mask))


def edge_degrees(K: Complex) -> Dict[int, int]:
    """Degree of every edge, keyed by edge mask."""
    if "edge_degrees" not in K._cache:
        links: Dict[int, int] = {}
        for f in K.facets:
            for e in sub_masks(f, 2):
                links[e] = links.get(e, 0) | (f & ~e)
        K._cache["edge_degrees"] = {e: popcount(m) for e, m in links.items()}
    return K._cache["edge_degrees"]


def vertex_degrees(K: Complex) -> Dict[int, int]:
    """Degree of every vertex (number of neighbours)."""
    if "vertex_degrees" not in K._cache:
        links: Dict[int, int] = {v: 0 for v in K.vertices}
        for f in K.facets:
            for v in vertices_of(f):
                links[v] |= f
        K._cache["vertex_degrees"] = {v: popcount(m & ~(1 << v)) for v, m in links.items()}
    return K._cache["vertex_degrees"]


def vertex_degree_sequence(K: Complex) -> Tuple[int, ...]:
    return tuple(sorted(vertex_degrees(K).values(), reverse=True))


def degree_sequence_label(K: Complex) -> str:
    """Degree sequence in exponent notation, e.g. ``6^2.4^3.3^2``."""
    counts = Counter(vertex_degree_sequence(K))
    parts = []
    for deg in sorted(counts, reverse=True):
        parts.append(str(deg) if counts[deg] == 1 else f"{deg}^{counts[deg]}")
    return ".".join(parts)


def induced(K: Complex, vertices: FaceLike) -> FaceSet:
    """Induced subcomplex K[U], flagged when not pure."""
    U = simplex(vertices)
    pieces = {f & U for f in K.facets if f & U}
    maximal = frozenset(p for p in pieces if not any(p != q and p & q == p for q in pieces))
    sizes = {popcount(p) for p in maximal}
    return FaceSet(maximal_faces=maximal, is_pure=len(sizes) <= 1)


def is_neighbourly(K: Complex) -> bool:
    n = K.n_vertices
    if K.dim == 0:
        return n == 1
    return len(K.faces(1)) == n * (n - 1) // 2


def edge_graph(K: Complex) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(K.vertices)
    if K.dim >= 1:
        graph.add_edges_from(vertices_of(e) for e in K.faces(1))
    return graph


def non_edge_graph(K: Complex) -> nx.Graph:
    return nx.complement(edge_graph(K))


def g_n_graph(K: Complex, n: int) -> nx.Graph:
    """Graph on V(K) whose edges are the edges of K of degree n."""
    graph = nx.Graph()
    graph.add_nodes_from(K.vertices)
    graph.add_edges_from(vertices_of(e) for e, deg in edge_degrees(K).items() if deg == n)
    return graph


# ============================================
# CONSTRUCTORS
# ============================================

def join(X: Complex, Y: Complex) -> Complex:
    if X.vertex_mask & Y.vertex_mask:
        clash = vertices_of(X.vertex_mask & Y.vertex_mask)
        raise ComplexError(f"Invalid join: vertex sets share {list(clash)}")
    return Complex(x | y for x in X.facets for y in Y.facets)


def disjoint_union(X: Complex, Y: Complex) -> Complex:
    if X.vertex_mask & Y.vertex_mask:
        raise ComplexError("Invalid union: vertex sets are not disjoint")
    if X.dim != Y.dim:
        raise ComplexError(f"Invalid union: dimensions {X.dim} and {Y.dim} differ")
    return Complex(X.facets | Y.facets)


def one_point_suspension(K: Complex, u: int, v: int) -> Complex:
    """Sigma_uv K: u keeps the antistar, the fresh vertex v is coned over K."""
    if not K.vertex_mask >> u & 1:
        raise ComplexError(f"Invalid suspension vertex: {u} is not a vertex of the complex")
    new = mask_of([v])
    if K.vertex_mask & new:
        raise ComplexError(f"Invalid suspension vertex: {v} is already a vertex of the complex")
    u_bit = 1 << u
    facets = {f | u_bit for f in K.facets if not f & u_bit}
    facets.update(f | new for f in K.facets)
    return Complex(facets)


def suspension(K: Complex, u: int, v: int) -> Complex:
    """Two-point suspension S^0(u, v) * K."""
    return join(standard_sphere(0, [u, v]), K)


def standard_sphere(d: int, vertices: Iterable[int]) -> Complex:
    """Boundary of the (d+1)-simplex on d+2 vertices."""
    labels = sorted(set(vertices))
    if d < 0 or len(labels) != d + 2:
        raise ComplexError(f"Invalid standard sphere: dimension {d} needs {d + 2} vertices, got {len(labels)}")
    return Complex(sub_masks(mask_of(labels), d + 1))


def cycle(vertices: Sequence[int]) -> Complex:
    """The cycle C_n through the vertices in the given order."""
    labels = list(vertices)
    if len(labels) < 3 or len(set(labels)) != len(labels):
        raise ComplexError(f"Invalid cycle: needs at least 3 distinct vertices, got {labels}")
    return Complex(mask_of([labels[i], labels[(i + 1) % len(labels)]]) for i in range(len(labels)))


# ============================================
# FACET-LIST I/O
# ============================================

def parse_facets(text: str, path: Optional[str] = None) -> List[int]:
    """Parse facet-list text into facet masks without checking purity."""
    facets: List[int] = []
    seen: Dict[int, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        labels = []
        column = 0
        for token in raw.split():
            column = raw.index(token, column) + 1
            if not token.isdigit() or not token.isascii():
                raise FacetParseError(f"expected a vertex label, found {token!r}", line_no, column, path)
            label = int(token)
            if label > MAX_VERTEX:
                raise FacetParseError(f"vertex label {label} exceeds {MAX_VERTEX}", line_no, column, path)
            if label in labels:
                raise FacetParseError(f"vertex {label} repeated in facet", line_no, column, path)
            labels.append(label)
            column += len(token) - 1
        mask = mask_of(labels)
        if mask in seen:
            raise FacetParseError(f"duplicate facet (first on line {seen[mask]})", line_no, 1, path)
        seen[mask] = line_no
        facets.append(mask)
    if not facets:
        raise FacetParseError("no facets found", 1, 1, path)
    return facets


def parse_complex(text: str, path: Optional[str] = None) -> Complex:
    facets = parse_facets(text, path)
    size = popcount(facets[0])
    for index, f in enumerate(facets):
        if popcount(f) != size:
            raise FacetParseError(
                f"facet has {popcount(f)} vertices, expected {size} (complex must be pure)",
                _facet_line(text, index), 1, path,
            )
    return Complex(facets)


def _facet_line(text: str, index: int) -> int:
    count = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            count += 1
            if count == index:
                return line_no
    return 1


def format_complex(K: Complex, header: Optional[str] = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.extend(" ".join(str(v) for v in facet) for facet in K.facet_tuples())
    return "\n".join(lines) + "\n"


def complex_to_json(K: Complex) -> Dict[str, Any]:
    return {"dim": K.dim, "facets": [list(facet) for facet in K.facet_tuples()]}


def complex_from_json(data: Any) -> Complex:
    if not isinstance(data, dict) or "facets" not in data:
        raise ComplexError("Invalid JSON complex: expected an object with 'dim' and 'facets'")
    K = Complex.from_faces(data["facets"])
    if "dim" in data and data["dim"] != K.dim:
        raise ComplexError(f"Invalid JSON complex: dim {data['dim']} does not match facets of dimension {K.dim}")
    return K


def read_facet_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as e:
        raise FacetParseError("file is not ASCII", 1, e.start + 1, str(path))


def read_complex(path: Union[str, Path]) -> Complex:
    """Read a complex from facet-list text, or JSON for ``.json`` files."""
    path = Path(path)
    if path.suffix == ".json":
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as e:
            raise FacetParseError(e.msg, e.lineno, e.colno, str(path))
        return complex_from_json(data)
    return parse_complex(read_facet_text(path), str(path))


def write_complex(K: Complex, path: Union[str, Path], header: Optional[str] = None) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(complex_to_json(K)) + "\n")
    else:
        path.write_text(format_complex(K, header))
    logger.debug(f"Wrote {K!r} to {path}")
