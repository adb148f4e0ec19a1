import pytest

from csiso.catalog import catalog, perm_fixtures


@pytest.fixture(scope="session")
def cat():
    return catalog()


@pytest.fixture(scope="session")
def perm_groups():
    return perm_fixtures()


# element indices in the catalog tables
S3_TRANSPOSITIONS = (1, 2, 5)
S3_A3 = (0, 3, 4)
Q8_MINUS_ONE = 2
