"""Tests for octaflip.homology."""

import pytest

from octaflip.catalog import SPHERE_SERIES, Catalog
from octaflip.complexes import Complex, ComplexError, cycle, euler_characteristic, standard_sphere
from octaflip.homology import boundary_matrix, homology, smith_normal_form


ALL_NAMES = Catalog().names()


def _groups(K: Complex):
    return [str(g) for g in homology(K).groups]


class TestSmithNormalForm:
    """Rank and invariant factors."""

    def test_diagonal_is_normalized(self) -> None:
        form = smith_normal_form([[2, 0], [0, 3]])
        assert form.rank == 2
        assert form.invariant_factors == (1, 6)
        assert form.torsion == (6,)

    def test_full_matrix(self) -> None:
        form = smith_normal_form([[2, 4], [6, 8]])
        assert form.invariant_factors == (2, 4)

    def test_rank_deficient(self) -> None:
        form = smith_normal_form([[1, 2, 3], [2, 4, 6], [0, 0, 0]])
        assert form.rank == 1
        assert form.invariant_factors == (1,)

    def test_zero_matrix(self) -> None:
        assert smith_normal_form([[0, 0], [0, 0]]).rank == 0


class TestBoundaryMatrix:
    """Oriented boundary maps."""

    def test_boundary_of_boundary_vanishes(self, catalog: Catalog) -> None:
        K = catalog.get("S3_8_35")
        d2 = boundary_matrix(K, 2).to_dense()
        d3 = boundary_matrix(K, 3).to_dense()
        for row in d2:
            for c in range(len(d3[0])):
                assert sum(row[k] * d3[k][c] for k in range(len(row))) == 0

    def test_shape(self, simplex_boundary_3: Complex) -> None:
        assert boundary_matrix(simplex_boundary_3, 1).shape == (5, 10)

    def test_dimension_range(self, tetrahedron_boundary: Complex) -> None:
        with pytest.raises(ComplexError):
            boundary_matrix(tetrahedron_boundary, 3)


class TestHomology:
    """Integer homology of catalog complexes."""

    def test_circle(self) -> None:
        assert _groups(cycle([0, 1, 2, 3])) == ["Z", "Z"]

    def test_sphere(self, catalog: Catalog) -> None:
        assert _groups(catalog.get("S3_8_35")) == ["Z", "0", "0", "Z"]

    def test_torus(self, catalog: Catalog) -> None:
        assert _groups(catalog.get("T")) == ["Z", "Z^2", "Z"]

    def test_projective_plane(self, catalog: Catalog) -> None:
        assert _groups(catalog.get("R_1")) == ["Z", "Z_2", "0"]

    def test_n1(self, catalog: Catalog) -> None:
        """Eight torus links give H_2 of rank eight."""
        assert _groups(catalog.get("N_1")) == ["Z", "0", "Z^8", "Z"]

    def test_n3_torsion(self, catalog: Catalog) -> None:
        assert _groups(catalog.get("N_3")) == ["Z", "0", "Z^2 + Z_2", "0"]

    def test_euler_characteristic_agrees(self, catalog: Catalog) -> None:
        for name in ("N_1", "N_3", "N_7", "T", "R_1"):
            K = catalog.get(name)
            assert homology(K).euler_characteristic() == euler_characteristic(K)

    def test_reduced_h0(self, tetrahedron_boundary: Complex) -> None:
        profile = homology(tetrahedron_boundary)
        assert str(profile.reduced()[0]) == "0"
        assert profile.lines()[0] == "H_0 = Z  (reduced: 0)"

    def test_dimension_limit(self) -> None:
        with pytest.raises(ComplexError, match="exceeds 4"):
            homology(standard_sphere(5, range(7)))


class TestEulerPoincare:
    """Alternating sums of Betti numbers and face counts agree."""

    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_catalog_entry(self, catalog: Catalog, name: str) -> None:
        K = catalog.get(name)
        assert homology(K).euler_characteristic() == euler_characteristic(K)

    @pytest.mark.parametrize("name", SPHERE_SERIES)
    def test_spheres_have_sphere_homology(self, catalog: Catalog, name: str) -> None:
        assert _groups(catalog.get(name)) == ["Z", "0", "0", "Z"]
