import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for oracles.py

from nemo.exact import solve_positions
from nemo.games import euclid_spec, mancala_spec, nim_spec, tictactoe_spec

GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def ttt():
    return tictactoe_spec()


@pytest.fixture(scope="session")
def ttt_solved(ttt):
    return solve_positions(ttt)


@pytest.fixture(scope="session")
def nim83():
    return nim_spec(8, 3)


@pytest.fixture(scope="session")
def nim53():
    return nim_spec(5, 3)


@pytest.fixture(scope="session")
def nim53_solved(nim53):
    return solve_positions(nim53)


@pytest.fixture(scope="session")
def mancala():
    return mancala_spec()


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN_DIR
