"""Shared fixtures for the octaflip test suite."""

from pathlib import Path
from typing import Callable

import pytest

from octaflip.catalog import Catalog, get_catalog
from octaflip.complexes import Complex, standard_sphere, write_complex


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run slow searches")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return get_catalog()


@pytest.fixture
def tetrahedron_boundary() -> Complex:
    return standard_sphere(2, [0, 1, 2, 3])


@pytest.fixture
def simplex_boundary_3() -> Complex:
    """Boundary of the 4-simplex on 0..4."""
    return standard_sphere(3, range(5))


@pytest.fixture
def facet_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write raw facet-list text to a temporary file."""
    def write(text: str, name: str = "complex.cplx") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


@pytest.fixture
def catalog_file(tmp_path: Path, catalog: Catalog) -> Callable[[str], Path]:
    """Write a catalog entry to a temporary facet-list file."""
    def write(name: str) -> Path:
        path = tmp_path / f"{name}.cplx"
        write_complex(catalog.get(name), path, name)
        return path
    return write
