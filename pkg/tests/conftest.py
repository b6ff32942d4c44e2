from pathlib import Path

import pytest

from koszulcy.presentations import QuiverSpec, preprojective_from_quiver, read_presentation

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def jordan():
    return preprojective_from_quiver(QuiverSpec(["1"], [("a", "1", "1")]))[1]


@pytest.fixture(scope="session")
def jordan_algebra():
    return preprojective_from_quiver(QuiverSpec(["1"], [("a", "1", "1")]))[0]


@pytest.fixture(scope="session")
def kronecker():
    return preprojective_from_quiver(QuiverSpec(["1", "2"], [("a", "1", "2"), ("b", "1", "2")]))[1]


@pytest.fixture(scope="session")
def dual_numbers():
    return read_presentation(DATA / "dual_numbers.toml")


@pytest.fixture(scope="session")
def kx():
    return read_presentation(DATA / "kx.toml")


@pytest.fixture(scope="session")
def kxy():
    return read_presentation(DATA / "kxy.toml")
