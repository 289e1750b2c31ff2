import pytest

from moralstat.dataset import load_canonical


@pytest.fixture(scope="session")
def canonical():
    return load_canonical()


@pytest.fixture(scope="session")
def dataset(canonical):
    return canonical[0]


@pytest.fixture(scope="session")
def basemap(canonical):
    return canonical[1]


@pytest.fixture(scope="session")
def ordered(dataset):
    return dataset.ordered()
