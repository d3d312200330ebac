"""Shared fixtures: the desk shifts and block codes shipped under config/."""

from pathlib import Path

import pytest

from src.conjugacy import BlockCode
from src.parser import load_block_code_text, load_shift

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"
SHIFTS_DIR = CONFIG_DIR / "shifts"
CODES_DIR = CONFIG_DIR / "codes"


def shift_path(name: str) -> str:
    return str(SHIFTS_DIR / f"{name}.shift")


def code_path(name: str) -> str:
    return str(CODES_DIR / f"{name}.code")


@pytest.fixture(scope="session")
def full2():
    return load_shift(shift_path("full2"))


@pytest.fixture(scope="session")
def golden():
    return load_shift(shift_path("golden"))


@pytest.fixture(scope="session")
def even():
    return load_shift(shift_path("even"))


@pytest.fixture(scope="session")
def onepoint():
    return load_shift(shift_path("onepoint"))


@pytest.fixture(scope="session")
def golden2block():
    return load_shift(shift_path("golden2block"))


@pytest.fixture(scope="session")
def desk_shifts(full2, golden, even, onepoint):
    return {"full2": full2, "golden": golden, "even": even, "onepoint": onepoint}


@pytest.fixture(scope="session")
def golden_codes(golden, golden2block):
    """Forward (window 2) and inverse (window 1) codes between golden and its 2-block presentation."""
    forward = BlockCode.from_text(load_block_code_text(code_path("golden_to_2block")), golden, golden2block)
    inverse = BlockCode.from_text(load_block_code_text(code_path("2block_to_golden")), golden2block, golden)
    return forward, inverse
