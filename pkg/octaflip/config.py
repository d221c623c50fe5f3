"""
Octaflip Run Configuration

Settings for the census and surface enumeration, built from command-line
flags only. Nothing is read from files or the environment.
"""

from pathlib import Path
from typing import Any, Dict, Optional


class CensusConfig:
    """Validated settings for one census or enumeration run."""

    VALID_CENSUS_VERTICES = [8]
    VALID_SURFACE_VERTICES = list(range(3, 11))

    DEFAULTS = {
        "vertices": 8,
        "exhaustive": False,
        "symmetry": True,
        "jobs": 1,
        "output_dir": ".",
    }

    def __init__(self, config_data: Optional[Dict[str, Any]] = None):
        self._config: Dict[str, Any] = dict(self.DEFAULTS)
        for key, value in (config_data or {}).items():
            if key not in self.DEFAULTS:
                raise ValueError(f"Invalid setting: {key}. Must be one of {list(self.DEFAULTS)}")
            setattr(self, key, value)

    @property
    def vertices(self) -> int:
        return self._config["vertices"]

    @vertices.setter
    def vertices(self, value: int) -> None:
        if value not in self.VALID_CENSUS_VERTICES:
            raise ValueError(f"Invalid vertex count: {value}. Must be one of {self.VALID_CENSUS_VERTICES}")
        self._config["vertices"] = value

    @property
    def exhaustive(self) -> bool:
        """Also run the flat search and cross-check the class sets."""
        return self._config["exhaustive"]

    @exhaustive.setter
    def exhaustive(self, value: bool) -> None:
        self._config["exhaustive"] = bool(value)

    @property
    def symmetry(self) -> bool:
        """Reduce link completions modulo the link's automorphism group."""
        return self._config["symmetry"]

    @symmetry.setter
    def symmetry(self, value: bool) -> None:
        self._config["symmetry"] = bool(value)

    @property
    def jobs(self) -> int:
        return self._config["jobs"]

    @jobs.setter
    def jobs(self, value: int) -> None:
        if not isinstance(value, int) or value < 1:
            raise ValueError(f"Invalid job count: {value}. Must be a positive integer")
        self._config["jobs"] = value

    @property
    def output_dir(self) -> Path:
        return Path(self._config["output_dir"])

    @output_dir.setter
    def output_dir(self, value) -> None:
        self._config["output_dir"] = str(value)

    @classmethod
    def check_surface_vertices(cls, value: int) -> int:
        if value not in cls.VALID_SURFACE_VERTICES:
            raise ValueError(
                f"Invalid vertex count: {value}. Must be in "
                f"{cls.VALID_SURFACE_VERTICES[0]}..{cls.VALID_SURFACE_VERTICES[-1]}"
            )
        return value

    def to_dict(self) -> Dict[str, Any]:
        """Return configuration as dictionary."""
        return self._config.copy()
