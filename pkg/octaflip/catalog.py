"""
Octaflip Catalog

Every named complex of the 8-vertex census, shipped as facet-list files, move
scripts, constructors or 7-vertex census selections. Entries are described by
data/catalog.yaml and checked against their expected invariants the first
time they are requested.
"""

import logging
import re
import threading
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from .bistellar import MoveError, enumerate_moves, parse_face, run_script
from .complexes import (
    Complex,
    ComplexError,
    degree_sequence_label,
    edge_degrees,
    euler_characteristic,
    f_vector,
    format_face,
    join,
    mask_of,
    one_point_suspension,
    read_complex,
    standard_sphere,
    sub_masks,
)
from .covering import antipodal_map, icosahedron
from .homology import homology
from .iso import are_isomorphic, automorphisms, is_isomorphism, link_signature, parse_cycles
from .recognition import (
    classify_surface,
    is_combinatorial_manifold,
    is_normal,
    is_pseudomanifold,
    is_weak_pseudomanifold,
    singular_vertices,
)


logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
MANIFEST_FILE = DATA_DIR / "catalog.yaml"
COMPLEXES_DIR = DATA_DIR / "complexes"

SPHERE_SERIES = [f"S3_8_{i}" for i in range(1, 40)]
NORMAL_SERIES = [f"N_{i}" for i in range(1, 36)]
SURFACE_NAMES = (
    [f"S_{i}" for i in range(1, 10)]
    + [f"R_{i}" for i in range(1, 5)]
    + ["T"]
    + [f"P_{i}" for i in range(1, 5)]
)


class CatalogError(ValueError):
    """Unknown entry, failed materialization or an expected-invariant mismatch."""


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    source: Dict[str, Any]
    expected: Dict[str, Any] = field(default_factory=dict)
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def kind(self) -> str:
        if "file" in self.source:
            return "file"
        if "parent" in self.source:
            return "script"
        if "constructor" in self.source:
            return "constructor"
        if "census" in self.source:
            return "census"
        raise CatalogError(f"Invalid catalog source for {self.name}: {self.source}")

    def describe_source(self) -> str:
        kind = self.kind
        if kind == "file":
            return f"file {self.source['file']}"
        if kind == "script":
            return f"{self.source['parent']} : {self.source['script']}"
        if kind == "constructor":
            return f"{self.source['constructor']}({_format_args(self.source.get('args', {}))})"
        census = self.source["census"]
        return f"{census['vertices']}-vertex census [{census['degree_sequence']}, {census['surface']}]"


@dataclass
class VerificationResult:
    """Per-entry outcome of the integrity suite."""
    name: str
    checked: List[str] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": self.failures}


def _format_args(args: Dict[str, Any]) -> str:
    return ", ".join(f"{key}={value}" for key, value in args.items())


def _natural_key(name: str) -> Tuple:
    return tuple(int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name))


def _degree_sequence_size(label: str) -> int:
    """Vertex count of a ``6^2.4^3.3^2`` style label."""
    total = 0
    for part in label.split("."):
        total += int(part.split("^")[1]) if "^" in part else 1
    return total


# ============================================
# CONSTRUCTORS
# ============================================

def k_manifold(d: int) -> Complex:
    """K^d_{2d+3} on labels 1..2d+3: each window of d+2 cyclically consecutive
    vertices minus one of its d interior vertices."""
    if d < 2:
        raise CatalogError(f"Invalid dimension: {d}. Must be at least 2")
    n = 2 * d + 3

    def label(x: int) -> int:
        return (x - 1) % n + 1

    facets = set()
    for i in range(1, n + 1):
        window = [label(x) for x in range(i, i + d + 2)]
        for j in range(1, d + 1):
            facets.add(mask_of(window[:j] + window[j + 1:]))
    return Complex(facets)


# Balls of K^3_9 and K^4_11 that get replaced by a cone from vertex 0.
_A_BALLS = {
    3: [(1, 2, 3, 5), (2, 3, 5, 6), (3, 5, 6, 7), (3, 4, 6, 7), (4, 6, 7, 8)],
    4: [(1, 2, 3, 4, 6), (2, 3, 4, 6, 7), (3, 4, 6, 7, 8), (4, 6, 7, 8, 9), (4, 5, 7, 8, 9), (5, 7, 8, 9, 10)],
}


def a_complex(d: int) -> Complex:
    """A^d_{2d+4}: K^d_{2d+3} with a ball swapped for the cone from 0 over its boundary."""
    if d not in _A_BALLS:
        raise CatalogError(f"Invalid dimension: {d}. Must be one of {sorted(_A_BALLS)}")
    K = k_manifold(d)
    ball = {mask_of(facet) for facet in _A_BALLS[d]}
    missing = [format_face(f) for f in ball if f not in K.facets]
    if missing:
        raise CatalogError(f"Ball facets {missing} are not facets of K^{d}_{2 * d + 3}")
    ridge_count: Dict[int, int] = {}
    for f in ball:
        for r in sub_masks(f, d):
            ridge_count[r] = ridge_count.get(r, 0) + 1
    boundary = [r for r, count in ridge_count.items() if count == 1]
    return Complex((K.facets - ball) | {r | 1 for r in boundary})


def projective_plane_6() -> Complex:
    """R_1: the antipodal quotient of the icosahedron, labelled 1..6."""
    quotient = antipodal_map().target
    return quotient.relabel({v: v + 1 for v in quotient.vertices})


def join_spheres(pairs: Sequence[Sequence[int]]) -> Complex:
    """Iterated join of 0-spheres S^0(a, b)."""
    if not pairs:
        raise CatalogError("Invalid join: no vertex pairs given")
    result = standard_sphere(0, pairs[0])
    for pair in pairs[1:]:
        result = join(result, standard_sphere(0, pair))
    return result


def _identify_vertices(K: Complex, keep: int, drop: int) -> Complex:
    """Glue ``drop`` onto ``keep``; the two must not share a facet."""
    drop_bit, keep_bit = 1 << drop, 1 << keep
    facets = set()
    for f in K.facets:
        if f & drop_bit and f & keep_bit:
            raise CatalogError(f"Invalid identification: {drop} and {keep} share facet {format_face(f)}")
        facets.add(f & ~drop_bit | keep_bit if f & drop_bit else f)
    if len(facets) != len(K):
        raise CatalogError(f"Invalid identification: gluing {drop} onto {keep} merges facets")
    return Complex(facets)


CONSTRUCTORS: Dict[str, Callable[..., Complex]] = {
    "standard_sphere": standard_sphere,
    "projective_plane_6": projective_plane_6,
    "icosahedron": icosahedron,
    "k_manifold": k_manifold,
    "a_complex": a_complex,
    "join_spheres": join_spheres,
    "one_point_suspension": one_point_suspension,
}


# ============================================
# EXPECTED-INVARIANT CHECKS
# ============================================

def _edge_set(values: Sequence[str]) -> set:
    return {parse_face(str(value)) for value in values}


def _render_edges(masks) -> str:
    return "{" + ", ".join(sorted(format_face(m) for m in masks)) + "}"


def _compare(what: str, got: Any, want: Any) -> Optional[str]:
    return None if got == want else f"{what}: got {got}, expected {want}"


def _non_edges(K: Complex) -> set:
    edges = K.faces(1)
    return {a | b for a, b in combinations([1 << v for v in K.vertices], 2) if a | b not in edges}


def _check_edges(what: str, got: set, want: Sequence[str]) -> Optional[str]:
    wanted = _edge_set(want)
    return None if got == wanted else f"{what}: got {_render_edges(got)}, expected {_render_edges(wanted)}"


def _check_g_n(K: Complex, value: Dict[int, Sequence[str]], catalog: "Catalog") -> Optional[str]:
    degrees = edge_degrees(K)
    for n, edges in value.items():
        got = {e for e, deg in degrees.items() if deg == int(n)}
        failure = _check_edges(f"G_{n}", got, edges)
        if failure:
            return failure
    return None


def _check_edge_degrees(K: Complex, value: Dict[str, int], catalog: "Catalog") -> Optional[str]:
    degrees = edge_degrees(K)
    for edge, want in value.items():
        got = degrees.get(parse_face(str(edge)))
        if got != want:
            return f"degree of edge {edge}: got {got}, expected {want}"
    return None


def _check_automorphisms(K: Complex, value: Sequence[str], catalog: "Catalog") -> Optional[str]:
    for text in value:
        if not is_isomorphism(K, K, parse_cycles(text)):
            return f"{text} is not an automorphism"
    return None


def _check_links(K: Complex, value: Dict[int, str], catalog: "Catalog") -> Optional[str]:
    got = {v: link_signature(K, v) for v, _ in singular_vertices(K)}
    want = {int(v): name for v, name in value.items()}
    return _compare("singular links", got, want)


def _check_all_links(K: Complex, value: str, catalog: "Catalog") -> Optional[str]:
    got = sorted({link_signature(K, v) for v in K.vertices})
    return _compare("vertex links", got, [value])


def _check_identified(K: Complex, value: Dict[str, Any], catalog: "Catalog") -> Optional[str]:
    glued = _identify_vertices(catalog.get(value["entry"], verify=False), value["keep"], value["drop"])
    return None if glued == K else f"not equal to {value['entry']} with {value['drop']} glued onto {value['keep']}"


def _check_isomorphic(K: Complex, value: str, catalog: "Catalog") -> Optional[str]:
    result = are_isomorphic(K, catalog.get(value, verify=False))
    return None if result else f"not isomorphic to {value} ({result.detail})"


def _check_homology(K: Complex, value: Sequence[Any], catalog: "Catalog") -> Optional[str]:
    return _compare("homology", [str(g) for g in homology(K).groups], [str(v) for v in value])


def _check_layer(K: Complex, value: int, catalog: "Catalog") -> Optional[str]:
    n = K.n_vertices
    return _compare("non-edge count", n * (n - 1) // 2 - len(K.faces(1)), value)


_CHECKS: Dict[str, Callable[[Complex, Any, "Catalog"], Optional[str]]] = {
    "f_vector": lambda K, v, c: _compare("f-vector", list(f_vector(K)), list(v)),
    "chi": lambda K, v, c: _compare("Euler characteristic", euler_characteristic(K), v),
    "n_s": lambda K, v, c: _compare("singular vertex count", len(singular_vertices(K)), v),
    "degree_sequence": lambda K, v, c: _compare("degree sequence", degree_sequence_label(K), v),
    "surface": lambda K, v, c: _compare("surface type", classify_surface(K).kind, v),
    "neighbourly": lambda K, v, c: _compare("neighbourly", not _non_edges(K), v),
    "aut_order": lambda K, v, c: _compare("automorphism group order", len(automorphisms(K)), v),
    "combinatorial_manifold": lambda K, v, c: _compare("combinatorial manifold", is_combinatorial_manifold(K), v),
    "weak_pseudomanifold": lambda K, v, c: _compare("weak pseudomanifold", is_weak_pseudomanifold(K), v),
    "pseudomanifold": lambda K, v, c: _compare("pseudomanifold", is_pseudomanifold(K), v),
    "normal": lambda K, v, c: _compare("normal", is_normal(K), v),
    "one_moves": lambda K, v, c: _check_edges(
        "bistellar 1-move faces", {m.alpha for m in enumerate_moves(K, 1)}, v
    ),
    "removable_edges": lambda K, v, c: _check_edges(
        "removable edges", {m.alpha for m in enumerate_moves(K, K.dim - 1)}, v
    ),
    "non_edges": lambda K, v, c: _check_edges("non-edges", _non_edges(K), v),
    "degree_3_edges": lambda K, v, c: _check_edges(
        "degree-3 edges", {e for e, deg in edge_degrees(K).items() if deg == 3}, v
    ),
    "g_n": _check_g_n,
    "edge_degrees": _check_edge_degrees,
    "automorphisms": _check_automorphisms,
    "singular_links": _check_links,
    "all_links": _check_all_links,
    "identified_from": _check_identified,
    "isomorphic_to": _check_isomorphic,
    "homology": _check_homology,
    "layer": _check_layer,
}


# ============================================
# CATALOG
# ============================================

class Catalog:
    """Manifest-driven registry of named complexes with verify-on-first-get."""

    def __init__(self, manifest_path: Path = MANIFEST_FILE):
        self._lock = threading.RLock()
        self._entries = self._load(manifest_path)
        self._complexes: Dict[str, Complex] = {}
        self._verified: Dict[str, VerificationResult] = {}
        self._materializing: List[str] = []
        self._surface_table: Optional[Dict[Tuple[int, str, str], str]] = None

    @staticmethod
    def _load(path: Path) -> Dict[str, CatalogEntry]:
        try:
            with open(path, "r") as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise CatalogError(f"Cannot read catalog manifest {path}: {e}")
        entries = {}
        for name, body in (data.get("entries") or {}).items():
            if "source" not in body:
                raise CatalogError(f"Invalid catalog entry {name}: no source")
            entries[name] = CatalogEntry(
                name=name,
                source=body["source"],
                expected=body.get("expected") or {},
                meta=body.get("meta") or {},
            )
        logger.debug(f"Loaded {len(entries)} catalog entries from {path}")
        return entries

    def names(self) -> List[str]:
        return sorted(self._entries, key=_natural_key)

    def entry(self, name: str) -> CatalogEntry:
        if name not in self._entries:
            raise CatalogError(f"Unknown catalog entry: {name}")
        return self._entries[name]

    def get(self, name: str, verify: bool = True) -> Complex:
        entry = self.entry(name)
        with self._lock:
            if name not in self._complexes:
                if name in self._materializing:
                    raise CatalogError(f"Catalog entry {name} depends on itself")
                self._materializing.append(name)
                try:
                    self._complexes[name] = self._materialize(entry)
                finally:
                    self._materializing.remove(name)
                logger.info(f"Materialized {name} from {entry.describe_source()}")
            if verify:
                result = self._verified.get(name)
                if result is None:
                    result = self.verify_entry(name)
                # a cached failure raises again
                if not result.passed:
                    for failure in result.failures:
                        logger.error(f"{name}: {failure}")
                    raise CatalogError(f"Integrity violation in {name}: {'; '.join(result.failures)}")
            return self._complexes[name]

    def _materialize(self, entry: CatalogEntry) -> Complex:
        kind = entry.kind
        try:
            if kind == "file":
                return read_complex(COMPLEXES_DIR / entry.source["file"])
            if kind == "script":
                parent = self.get(entry.source["parent"], verify=False)
                return run_script(parent, str(entry.source["script"]))
            if kind == "constructor":
                return self._construct(entry)
            return self._select_surface(entry)
        except MoveError as e:
            raise CatalogError(f"Integrity violation in {entry.name}: {e}")
        except ComplexError as e:
            raise CatalogError(f"Cannot materialize {entry.name}: {e}")

    def _construct(self, entry: CatalogEntry) -> Complex:
        name = entry.source["constructor"]
        if name not in CONSTRUCTORS:
            raise CatalogError(f"Invalid constructor for {entry.name}: {name}. Must be one of {sorted(CONSTRUCTORS)}")
        args = dict(entry.source.get("args") or {})
        if "of" in args:
            args["K"] = self.get(args.pop("of"), verify=False)
        return CONSTRUCTORS[name](**args)

    def _select_surface(self, entry: CatalogEntry) -> Complex:
        from .classify import enumerate_weak_2pm

        census = entry.source["census"]
        matches = [
            K for K in enumerate_weak_2pm(census["vertices"])
            if degree_sequence_label(K) == census["degree_sequence"]
            and classify_surface(K).kind == census["surface"]
        ]
        if len(matches) != 1:
            raise CatalogError(
                f"Integrity violation in {entry.name}: {len(matches)} census classes have degree sequence "
                f"{census['degree_sequence']} and type {census['surface']}, expected exactly one"
            )
        K = matches[0]
        return K.relabel({v: v + 1 for v in K.vertices})

    def verify_entry(self, name: str) -> VerificationResult:
        entry = self.entry(name)
        with self._lock:
            result = VerificationResult(name=name)
            try:
                K = self.get(name, verify=False)
            except CatalogError as e:
                result.failures.append(str(e))
                self._verified[name] = result
                return result
            for key, value in entry.expected.items():
                check = _CHECKS.get(key)
                if check is None:
                    result.failures.append(f"unknown expected invariant {key!r}")
                    continue
                result.checked.append(key)
                try:
                    failure = check(K, value, self)
                except (ValueError, KeyError) as e:
                    failure = f"{key}: {e}"
                if failure:
                    logger.warning(f"{name}: {failure}")
                    result.failures.append(failure)
            self._verified[name] = result
            return result

    def verify_all(self) -> List[VerificationResult]:
        return [self.verify_entry(name) for name in self.names()]

    def surface_name(self, n_vertices: int, kind: str, degree_sequence: str) -> Optional[str]:
        """Name of the surface entry with this vertex count, type and degree sequence.

        Read from the manifest alone; the 7-vertex census shows these three
        values already separate all surfaces on at most 7 vertices.
        """
        with self._lock:
            if self._surface_table is None:
                table = {}
                for name in SURFACE_NAMES:
                    entry = self._entries.get(name)
                    if entry is None:
                        continue
                    if entry.kind == "census":
                        census = entry.source["census"]
                        key = (census["vertices"], census["surface"], census["degree_sequence"])
                    else:
                        label = entry.expected["degree_sequence"]
                        key = (_degree_sequence_size(label), entry.expected["surface"], label)
                    table[key] = name
                self._surface_table = table
            return self._surface_table.get((n_vertices, kind, degree_sequence))

    def match_surface(self, K: Complex) -> Optional[str]:
        """Surface entry isomorphic to K, if any."""
        if K.dim != 2:
            return None
        name = self.surface_name(K.n_vertices, classify_surface(K).kind, degree_sequence_label(K))
        if name is None:
            return None
        return name if are_isomorphic(K, self.get(name)) else None


_catalog: Optional[Catalog] = None
_catalog_lock = threading.Lock()


def get_catalog() -> Catalog:
    global _catalog
    with _catalog_lock:
        if _catalog is None:
            _catalog = Catalog()
        return _catalog


def get(name: str) -> Complex:
    return get_catalog().get(name)


def names() -> List[str]:
    return get_catalog().names()


def verify_entry(name: str) -> VerificationResult:
    return get_catalog().verify_entry(name)


def verify_all() -> List[VerificationResult]:
    return get_catalog().verify_all()


def surface_name(n_vertices: int, kind: str, degree_sequence: str) -> Optional[str]:
    return get_catalog().surface_name(n_vertices, kind, degree_sequence)


def match_surface(K: Complex) -> Optional[str]:
    return get_catalog().match_surface(K)


def seven_vertex_surface(name: str) -> Complex:
    if name not in SURFACE_NAMES:
        raise CatalogError(f"Invalid surface name: {name}. Must be one of {SURFACE_NAMES}")
    return get(name)


def b39() -> Complex:
    return get("B_3_9")
