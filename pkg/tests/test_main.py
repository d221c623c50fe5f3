"""Tests for the octaflip command-line interface."""

import json
from pathlib import Path

import pytest

import octaflip
from octaflip.complexes import read_complex
from octaflip.main import EXIT_INTEGRITY, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def _flat(capsys) -> str:
    """Captured stdout with all whitespace removed (rich wraps long lines)."""
    return "".join(capsys.readouterr().out.split())


class TestVerify:
    """octaflip verify."""

    def test_sphere(self, facet_file, capsys) -> None:
        path = facet_file("0 1 2\n0 1 3\n0 2 3\n1 2 3\n")
        assert main(["verify", str(path), "--json"]) == EXIT_OK
        data = _json(capsys)
        assert data["is_pseudomanifold"] is True
        assert data["is_combinatorial_manifold"] is True

    def test_pinched_surface_is_negative(self, catalog_file) -> None:
        assert main(["verify", str(catalog_file("P_1"))]) == EXIT_NEGATIVE

    def test_pinched_pseudomanifold_is_negative(self, catalog_file, capsys) -> None:
        """P_3 is a pseudomanifold whose vertex links are not all connected."""
        assert main(["verify", str(catalog_file("P_3")), "--json"]) == EXIT_NEGATIVE
        data = _json(capsys)
        assert data["is_pseudomanifold"] is True
        assert data["is_normal"] is False

    def test_normal_non_manifold_is_affirmative(self, catalog_file, capsys) -> None:
        assert main(["verify", str(catalog_file("N_3")), "--json"]) == EXIT_OK
        data = _json(capsys)
        assert data["is_normal"] is True
        assert data["is_combinatorial_manifold"] is False

    def test_non_pure_facets(self, facet_file, capsys) -> None:
        path = facet_file("0 1 2\n2 3\n")
        assert main(["verify", str(path), "--json"]) == EXIT_NEGATIVE
        assert _json(capsys)["is_pure"] is False

    def test_malformed_input(self, facet_file, capsys) -> None:
        path = facet_file("0 1 2\n0 1 q\n")
        assert main(["verify", str(path)]) == EXIT_USAGE
        assert ":2:5:" in _flat(capsys)

    def test_missing_file(self, tmp_path) -> None:
        assert main(["verify", str(tmp_path / "absent.cplx")]) == EXIT_USAGE


class TestLinksAndMoves:
    """octaflip links, moves, apply and script."""

    def test_links_name_surfaces(self, catalog_file, capsys) -> None:
        assert main(["links", str(catalog_file("N_3")), "--json"]) == EXIT_OK
        rows = {row["vertex"]: row for row in _json(capsys)}
        assert rows[8]["name"] == "T"
        assert rows[3]["name"] == "R_2"
        assert rows[3]["kind"] == "projective_plane"

    def test_no_two_moves_on_n1(self, catalog_file, capsys) -> None:
        assert main(["moves", str(catalog_file("N_1")), "-i", "2", "--json"]) == EXIT_OK
        assert _json(capsys) == []

    def test_two_moves_on_s35(self, catalog_file, capsys) -> None:
        assert main(["moves", str(catalog_file("S3_8_35")), "-i", "2", "--json"]) == EXIT_OK
        moves = _json(capsys)
        assert len(moves) == 8
        assert {m["i"] for m in moves} == {2}

    def test_apply_writes_file(self, catalog, catalog_file, tmp_path) -> None:
        out = tmp_path / "out.cplx"
        assert main(["apply", str(catalog_file("S3_8_37")), "24", "-o", str(out)]) == EXIT_OK
        assert read_complex(out) == catalog.get("S3_8_30")

    def test_apply_not_removable(self, catalog_file) -> None:
        assert main(["apply", str(catalog_file("S3_8_35")), "12"]) == EXIT_NEGATIVE

    def test_script_to_stdout(self, catalog, catalog_file, facet_file, capsys) -> None:
        assert main(["script", str(catalog_file("N_7")), "67;56;238"]) == EXIT_OK
        path = facet_file(capsys.readouterr().out, "n18.cplx")
        assert read_complex(path) == catalog.get("N_18")

    def test_script_failure_names_step(self, catalog_file, capsys) -> None:
        assert main(["script", str(catalog_file("S3_8_35")), "13;13"]) == EXIT_NEGATIVE
        assert "Scriptstep2" in _flat(capsys)

    def test_moves_dim_flag(self, catalog_file, capsys) -> None:
        path = str(catalog_file("S3_8_35"))
        assert main(["moves", path, "--dim", "2", "--json"]) == EXIT_OK
        by_flag = _json(capsys)
        assert main(["moves", path, "-i", "2", "--json"]) == EXIT_OK
        assert _json(capsys) == by_flag

    def test_apply_face_flag(self, catalog, catalog_file, tmp_path) -> None:
        out = tmp_path / "out.cplx"
        assert main(["apply", str(catalog_file("S3_8_37")), "--face", "2 4", "-o", str(out)]) == EXIT_OK
        assert read_complex(out) == catalog.get("S3_8_30")

    def test_script_steps_flag(self, catalog, catalog_file, tmp_path) -> None:
        out = tmp_path / "n18.cplx"
        assert main(["script", str(catalog_file("N_7")), "--steps", "67;56;238", "-o", str(out)]) == EXIT_OK
        assert read_complex(out) == catalog.get("N_18")

    @pytest.mark.parametrize("argv", [
        ["apply", "{path}"],
        ["apply", "{path}", "24", "--face", "24"],
        ["script", "{path}"],
        ["script", "{path}", "24", "--steps", "24"],
    ])
    def test_face_and_script_need_exactly_one_form(self, catalog_file, argv) -> None:
        path = str(catalog_file("S3_8_37"))
        assert main([arg.format(path=path) for arg in argv]) == EXIT_USAGE


class TestIsoAndHomology:
    """octaflip iso and homology."""

    def test_not_isomorphic(self, catalog_file, capsys) -> None:
        assert main(["iso", str(catalog_file("N_5")), str(catalog_file("N_6")), "--json"]) == EXIT_NEGATIVE
        data = _json(capsys)
        assert data["isomorphic"] is False
        assert data["detail"]

    def test_isomorphic_with_witness(self, catalog_file, capsys) -> None:
        assert main(["iso", str(catalog_file("N_6")), str(catalog_file("N_5pp")), "--json"]) == EXIT_OK
        assert _json(capsys)["witness"].startswith("(")

    def test_homology(self, catalog_file, capsys) -> None:
        assert main(["homology", str(catalog_file("N_3")), "--json"]) == EXIT_OK
        data = _json(capsys)
        assert data["groups"] == ["Z", "0", "Z^2 + Z_2", "0"]
        assert data["euler_characteristic"] == 3


class TestCover:
    """octaflip cover."""

    def test_quotient(self, capsys) -> None:
        assert main(["cover", "quotient", "--json"]) == EXIT_OK
        data = _json(capsys)
        assert data["k"] == 2
        assert data["cover_f_vector"] == [14, 54, 80, 40]

    def test_check_trivial_cover(self, facet_file, tmp_path, capsys) -> None:
        source = facet_file("0 1 2\n0 1 3\n0 2 3\n1 2 3\n4 5 6\n4 5 7\n4 6 7\n5 6 7\n", "source.cplx")
        target = facet_file("0 1 2\n0 1 3\n0 2 3\n1 2 3\n", "target.cplx")
        vertex_map = tmp_path / "map.txt"
        vertex_map.write_text("\n".join(f"{v} {v % 4}" for v in range(8)) + "\n")
        assert main(["cover", "check", str(source), str(target), str(vertex_map), "--json"]) == EXIT_OK
        assert _json(capsys) == {"covering": True, "k": 2, "branch_locus": []}


class TestCatalogCommands:
    """octaflip catalog."""

    def test_get(self, catalog, facet_file, capsys) -> None:
        assert main(["catalog", "get", "N_18"]) == EXIT_OK
        path = facet_file(capsys.readouterr().out, "n18.cplx")
        assert read_complex(path) == catalog.get("N_18")

    def test_unknown_entry(self) -> None:
        assert main(["catalog", "get", "N_99"]) == EXIT_INTEGRITY

    def test_verify_selected(self, capsys) -> None:
        assert main(["catalog", "verify", "N_1", "B_3_9", "--json"]) == EXIT_OK
        results = _json(capsys)
        assert [r["name"] for r in results] == ["N_1", "B_3_9"]
        assert all(r["passed"] for r in results)

    def test_list(self, capsys) -> None:
        assert main(["catalog", "list", "--json"]) == EXIT_OK
        names = [row["name"] for row in _json(capsys)]
        assert "S3_8_39" in names and "N_35" in names


class TestUsage:
    """Argument errors and enumeration bounds."""

    def test_surface_vertex_bound(self) -> None:
        assert main(["enumerate-surfaces", "--vertices", "11"]) == EXIT_USAGE

    def test_census_vertex_bound(self, tmp_path) -> None:
        assert main(["classify", "--vertices", "9", "-o", str(tmp_path)]) == EXIT_USAGE

    def test_enumerate_surfaces(self, capsys) -> None:
        assert main(["enumerate-surfaces", "--vertices", "7", "--json"]) == EXIT_OK
        rows = _json(capsys)
        assert len(rows) == 13
        assert {row["name"] for row in rows} >= {"T", "R_4", "P_1"}

    def test_unknown_command(self) -> None:
        assert main(["flip"]) == EXIT_USAGE

    def test_version(self, capsys) -> None:
        assert main(["--version"]) == EXIT_OK
        assert "Octaflip" in capsys.readouterr().out

    @pytest.mark.parametrize("command", ["verify", "iso", "cover"])
    def test_missing_arguments(self, command: str) -> None:
        assert main([command]) == EXIT_USAGE


class TestOutputSchema:
    """--json outputs carry the keys the published schema requires."""

    @pytest.fixture(scope="class")
    def schema(self):
        return json.loads((Path(octaflip.__file__).parent / "data" / "output.schema.json").read_text())

    def _required(self, schema, name):
        definition = schema["$defs"][name]
        if definition["type"] == "array":
            definition = definition["items"]
        return set(definition["required"])

    def test_verify(self, schema, facet_file, capsys) -> None:
        main(["verify", str(facet_file("0 1 2\n0 1 3\n0 2 3\n1 2 3\n")), "--json"])
        assert set(_json(capsys)) == self._required(schema, "verify")

    def test_homology(self, schema, catalog_file, capsys) -> None:
        main(["homology", str(catalog_file("N_1")), "--json"])
        assert set(_json(capsys)) == self._required(schema, "homology")

    def test_links(self, schema, catalog_file, capsys) -> None:
        main(["links", str(catalog_file("N_1")), "--json"])
        assert all(set(row) == self._required(schema, "links") for row in _json(capsys))

    def test_catalog_verify(self, schema, capsys) -> None:
        main(["catalog", "verify", "N_1", "--json"])
        assert set(_json(capsys)[0]) == self._required(schema, "catalog_verify")
