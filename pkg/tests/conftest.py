import pytest

from nc3 import catalog, construction


def quintic_partition(*parts: int) -> catalog.PartitionSpec:
    return catalog.PartitionSpec(parts=tuple((a,) for a in parts))


@pytest.fixture
def quintic5():
    return catalog.instantiate("quintic", quintic_partition(5))


@pytest.fixture
def quintic5_blown(quintic5):
    config, divisor = quintic5
    return construction.sequential_blowup(config, divisor)


def all_catalog_cases():
    """(family, partition) for every reference row; computed once per session."""
    cases = []
    for fam_id in catalog.family_ids():
        for spec in catalog.enumerate_partitions(fam_id):
            cases.append((fam_id, spec))
    return cases
