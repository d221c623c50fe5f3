"""Tests for octaflip.config."""

from pathlib import Path

import pytest

from octaflip.config import CensusConfig


class TestCensusConfig:
    """Validated run settings."""

    def test_defaults(self) -> None:
        config = CensusConfig()
        assert config.vertices == 8
        assert config.symmetry is True
        assert config.exhaustive is False
        assert config.jobs == 1
        assert config.output_dir == Path(".")

    def test_overrides(self) -> None:
        config = CensusConfig({"jobs": 4, "symmetry": False, "output_dir": "census"})
        assert config.to_dict() == {
            "vertices": 8,
            "exhaustive": False,
            "symmetry": False,
            "jobs": 4,
            "output_dir": "census",
        }

    def test_unsupported_vertex_count(self) -> None:
        with pytest.raises(ValueError, match="Invalid vertex count: 9"):
            CensusConfig({"vertices": 9})

    @pytest.mark.parametrize("jobs", [0, -2, "4"])
    def test_invalid_jobs(self, jobs) -> None:
        with pytest.raises(ValueError, match="Invalid job count"):
            CensusConfig({"jobs": jobs})

    def test_unknown_setting(self) -> None:
        with pytest.raises(ValueError, match="Invalid setting: depth"):
            CensusConfig({"depth": 3})

    def test_surface_vertex_range(self) -> None:
        assert CensusConfig.check_surface_vertices(10) == 10
        with pytest.raises(ValueError, match="3..10"):
            CensusConfig.check_surface_vertices(2)
