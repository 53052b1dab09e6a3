import pytest

from lexdisambig import bundled_kb_dir, load_kb

BANK_Q = "How can student deposit money into the bank?"
CHAIR_Q = "Who is the chair of the department?"
RIVER_Q = "Who is seating on the bank of the river?"


@pytest.fixture(scope="session")
def kb_dir():
    return bundled_kb_dir()


@pytest.fixture(scope="session")
def kb(kb_dir):
    return load_kb(kb_dir)
