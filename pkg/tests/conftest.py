import pytest

from pubrank import (
    load_registry_dir,
    load_taxonomy,
    sample_registry_dir,
    sample_taxonomy_path,
)


@pytest.fixture(scope="session")
def registry():
    return load_registry_dir(sample_registry_dir())


@pytest.fixture(scope="session")
def taxonomy():
    return load_taxonomy(sample_taxonomy_path())
