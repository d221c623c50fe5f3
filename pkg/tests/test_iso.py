"""Tests for octaflip.iso."""

import random

import pytest

from octaflip.bistellar import apply_move, parse_face
from octaflip.catalog import Catalog
from octaflip.complexes import Complex
from octaflip.iso import (
    apply_permutation,
    are_isomorphic,
    automorphisms,
    canonical_certificate,
    canonical_form,
    canonical_labelling,
    fingerprint,
    format_cycles,
    is_isomorphism,
    link_signature,
    parse_cycles,
)


ALL_NAMES = Catalog().names()
RELABELLINGS = 100


def _witnessed(K: Complex, L: Complex, cycles: str) -> bool:
    """The permutation, read in either direction, carries K onto L."""
    perm = parse_cycles(cycles)
    inverse = {image: v for v, image in perm.items()}
    return is_isomorphism(K, L, perm) or is_isomorphism(K, L, inverse)


class TestCycleNotation:
    """Permutations in cycle notation."""

    def test_parse(self) -> None:
        assert parse_cycles("(1,4)(2,7)(3,8)") == {1: 4, 4: 1, 2: 7, 7: 2, 3: 8, 8: 3}

    def test_format_skips_fixed_points(self) -> None:
        assert format_cycles({1: 3, 3: 7, 7: 1, 2: 2}) == "(1,3,7)"
        assert format_cycles({1: 1}) == "()"

    def test_spaces_separate_labels(self) -> None:
        assert parse_cycles("(1 10 11)") == {1: 10, 10: 11, 11: 1}

    def test_repeated_label_rejected(self) -> None:
        with pytest.raises(ValueError, match="repeats"):
            parse_cycles("(1,2)(2,3)")

    def test_garbage_rejected(self) -> None:
        with pytest.raises(ValueError, match="cycle notation"):
            parse_cycles("1,2")


class TestCanonicalForm:
    """Canonical labelling by individualization-refinement."""

    def test_invariant_under_relabelling(self, catalog: Catalog) -> None:
        """Relabelled copies share the certificate."""
        K = catalog.get("S3_8_36")
        shuffled = apply_permutation(K, parse_cycles("(1,5,3)(2,8)(4,7,6)"))
        assert canonical_certificate(K) == canonical_certificate(shuffled)
        assert canonical_form(K) == canonical_form(shuffled)

    @pytest.mark.parametrize("count", [3, pytest.param(RELABELLINGS, marks=pytest.mark.slow)])
    @pytest.mark.parametrize("name", ALL_NAMES)
    def test_invariant_under_random_relabellings(self, catalog: Catalog, name: str, count: int) -> None:
        K = catalog.get(name)
        certificate = canonical_certificate(K)
        form = canonical_form(K)
        vertices = list(K.vertices)
        for seed in range(count):
            images = vertices[:]
            random.Random(seed).shuffle(images)
            shuffled = apply_permutation(K, dict(zip(vertices, images)))
            assert canonical_certificate(shuffled) == certificate, f"{name}, seed {seed}"
            assert canonical_form(shuffled) == form

    def test_canonical_form_uses_zero_based_labels(self, catalog: Catalog) -> None:
        K = catalog.get("T")
        assert canonical_form(K).vertices == tuple(range(7))
        assert sorted(canonical_labelling(K).values()) == list(range(7))

    def test_distinct_classes_have_distinct_certificates(self, catalog: Catalog) -> None:
        certificates = {canonical_certificate(catalog.get(name)) for name in ("S3_8_35", "S3_8_36", "S3_8_37", "S3_8_38")}
        assert len(certificates) == 4


class TestAutomorphisms:
    """Full automorphism groups."""

    def test_torus_group_order(self, catalog: Catalog) -> None:
        assert len(automorphisms(catalog.get("T"))) == 42

    def test_icosahedron_group_order(self, catalog: Catalog) -> None:
        assert len(automorphisms(catalog.get("I"))) == 120

    def test_identity_first(self, catalog: Catalog) -> None:
        K = catalog.get("S3_8_37")
        group = automorphisms(K)
        assert all(group[0][v] == v for v in K.vertices)

    def test_every_element_is_an_automorphism(self, catalog: Catalog) -> None:
        K = catalog.get("S3_8_35")
        group = automorphisms(K)
        assert len(group) == 16
        assert all(is_isomorphism(K, K, g) for g in group)

    def test_non_automorphism(self, catalog: Catalog) -> None:
        assert not is_isomorphism(catalog.get("S3_8_35"), catalog.get("S3_8_35"), parse_cycles("(1,2)"))


class TestIsomorphism:
    """Isomorphism decisions with witnesses or separating invariants."""

    def test_identical_complexes(self, catalog: Catalog) -> None:
        result = are_isomorphic(catalog.get("N_7"), catalog.get("N_7"))
        assert result
        assert format_cycles(result.bijection) == "()"

    def test_witness_is_valid(self, catalog: Catalog) -> None:
        """The returned bijection maps facets onto facets."""
        K = catalog.get("S3_8_38")
        L = apply_permutation(K, parse_cycles("(1,6,2)(3,4)"))
        result = are_isomorphic(K, L)
        assert result
        assert is_isomorphism(K, L, result.bijection)

    def test_different_f_vectors(self, catalog: Catalog) -> None:
        result = are_isomorphic(catalog.get("N_1"), catalog.get("N_3"))
        assert not result
        assert result.invariant == "f-vector"
        assert result.detail.startswith("f-vector:")

    def test_n5_and_n6_differ(self, catalog: Catalog) -> None:
        """Same f-vector, different vertex links."""
        N5, N6 = catalog.get("N_5"), catalog.get("N_6")
        assert fingerprint(N5).links == ("R_4",) * 8
        assert fingerprint(N6).links == ("R_3",) * 8
        result = are_isomorphic(N5, N6)
        assert not result
        assert result.invariant is not None

    def test_link_signature(self, catalog: Catalog) -> None:
        N3 = catalog.get("N_3")
        assert link_signature(N3, 8) == "T"
        assert link_signature(N3, 2) == "R_3"
        assert link_signature(N3, 1).startswith("S_")


class TestKnownWitnesses:
    """Isomorphisms between move results and catalog entries."""

    def test_n11_to_n18(self, catalog: Catalog) -> None:
        K = apply_move(catalog.get("N_11"), parse_face("67"))
        assert _witnessed(K, catalog.get("N_18"), "(2,4)(5,7)")

    def test_s35_to_s30(self, catalog: Catalog) -> None:
        K = apply_move(catalog.get("S3_8_35"), parse_face("68"))
        assert _witnessed(K, catalog.get("S3_8_30"), "(1,7,3)(2,8,4,5,6)")

    def test_n5_double_prime_to_n6(self, catalog: Catalog) -> None:
        assert _witnessed(catalog.get("N_5pp"), catalog.get("N_6"), "(2,3)(5,8)")
