"""Tests for octaflip.covering."""

from itertools import combinations

import pytest

from octaflip.bistellar import apply_move, parse_face
from octaflip.catalog import Catalog, join_spheres
from octaflip.complexes import FacetParseError, standard_sphere, vertices_of
from octaflip.covering import (
    CoveringError,
    SimplicialMap,
    antipodal_map,
    check_branched_covering,
    edge_preimage_counts,
    lift_proper_move,
    lift_star,
    read_map,
    suspension_cover,
    trivial_cover,
    verify_n24_quotient,
)


@pytest.fixture
def branched_cover_with_removable_edge() -> SimplicialMap:
    """S^0 * I over S^0 * R_1 after starring 8 into 0126 and flipping triangle 016.

    Downstairs, 58 is then a removable edge whose link is the boundary of 016.
    """
    starred = lift_star(suspension_cover(), parse_face("0126"), 8, [14, 15])
    alpha = parse_face("016")
    source = starred.source
    for face in starred.preimages(alpha, 2):
        source = apply_move(source, face)
    return SimplicialMap(source, apply_move(starred.target, alpha), dict(starred.vertex_map))


class TestCertificates:
    """Uniform facet preimage counts and the computed branch locus."""

    def test_antipodal_map_is_unbranched(self) -> None:
        certificate = check_branched_covering(antipodal_map())
        assert certificate.k == 2
        assert certificate.branch_locus == frozenset()

    def test_every_edge_has_two_preimages(self) -> None:
        assert set(edge_preimage_counts(antipodal_map()).values()) == {2}

    def test_trivial_cover(self, catalog: Catalog) -> None:
        certificate = check_branched_covering(trivial_cover(catalog.get("T"), 3))
        assert certificate.k == 3
        assert not certificate.branch_locus

    def test_suspension_points_branch(self) -> None:
        """S^0 * I over S^0 * R_1 branches exactly at the suspension points."""
        certificate = check_branched_covering(suspension_cover())
        assert certificate.k == 2
        assert certificate.branch_locus == frozenset({6, 7})

    def test_non_uniform_counts(self) -> None:
        """Folding the octahedron onto one triangle misses the other target facets."""
        octahedron = join_spheres([[0, 1], [2, 3], [4, 5]])
        f = SimplicialMap(octahedron, standard_sphere(2, [0, 1, 2, 3]), {0: 0, 1: 0, 2: 1, 3: 1, 4: 2, 5: 2})
        assert check_branched_covering(f) is None

    def test_missing_vertex_image(self, tetrahedron_boundary) -> None:
        with pytest.raises(CoveringError, match="no image"):
            SimplicialMap(tetrahedron_boundary, tetrahedron_boundary, {0: 0, 1: 1, 2: 2})

    def test_degenerate_facet(self, tetrahedron_boundary) -> None:
        f = SimplicialMap(tetrahedron_boundary, tetrahedron_boundary, {0: 0, 1: 0, 2: 2, 3: 3})
        with pytest.raises(CoveringError, match="Degenerate"):
            check_branched_covering(f)


class TestLifts:
    """Moves downstairs lift to moves upstairs."""

    def test_proper_move_lifts_to_k_moves(self, catalog: Catalog) -> None:
        S35 = catalog.get("S3_8_35")
        moves, lifted = lift_proper_move(trivial_cover(S35, 2), parse_face("13"))
        assert len(moves) == 2
        assert lifted.target == apply_move(S35, parse_face("13"))
        assert check_branched_covering(lifted).k == 2

    def test_non_removable_target_face(self, catalog: Catalog) -> None:
        with pytest.raises(CoveringError, match="not removable"):
            lift_proper_move(trivial_cover(catalog.get("S3_8_35"), 2), parse_face("12"))

    def test_branched_lift(self, branched_cover_with_removable_edge: SimplicialMap) -> None:
        f = branched_cover_with_removable_edge
        assert check_branched_covering(f).branch_locus == frozenset({6, 7})
        moves, lifted = lift_proper_move(f, parse_face("58"))
        assert len(moves) == 2
        assert all(move.i == 2 for move in moves)
        assert lifted.target == apply_move(f.target, parse_face("58"))
        certificate = check_branched_covering(lifted)
        assert certificate.k == 2
        assert certificate.branch_locus == frozenset({6, 7})

    def test_lifted_spans_meet_in_at_most_one_vertex(self, branched_cover_with_removable_edge: SimplicialMap) -> None:
        f = branched_cover_with_removable_edge
        moves, _ = lift_proper_move(f, parse_face("58"))
        for first, second in combinations(moves, 2):
            shared = vertices_of(first.span & second.span)
            assert len(shared) <= 1
            # the spans can only touch over the branch locus
            assert {f.vertex_map[v] for v in shared} <= {6, 7}

    def test_lift_dimension_range(self, simplex_boundary_3) -> None:
        """Only faces of dimension 1..d-2 lift as proper moves."""
        with pytest.raises(CoveringError, match="lift dimension"):
            lift_proper_move(trivial_cover(simplex_boundary_3, 2), parse_face("012"))

    def test_lift_star(self, simplex_boundary_3) -> None:
        lifted = lift_star(trivial_cover(simplex_boundary_3, 2), parse_face("0123"), 5, [10, 11])
        certificate = check_branched_covering(lifted)
        assert certificate.k == 2
        assert lifted.vertex_map[10] == lifted.vertex_map[11] == 5
        assert lifted.source.n_vertices == 12


class TestQuotient:
    """N_24 as a branched quotient of a 14-vertex sphere."""

    def test_n24_certificate(self) -> None:
        report = verify_n24_quotient()
        assert report.k == 2
        assert len(report.branch_locus) == 2
        assert report.cover_f_vector == (14, 54, 80, 40)
        assert report.cover_is_sphere


class TestMapFiles:
    """Vertex map text files."""

    def test_read_map(self, tmp_path) -> None:
        path = tmp_path / "map.txt"
        path.write_text("# source target\n0 0\n6 0\n1 1\n")
        assert read_map(path) == {0: 0, 6: 0, 1: 1}

    def test_vertex_mapped_twice(self, tmp_path) -> None:
        path = tmp_path / "map.txt"
        path.write_text("0 0\n0 1\n")
        with pytest.raises(FacetParseError, match="mapped twice"):
            read_map(path)
