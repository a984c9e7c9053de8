import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from temperley.lattice import (
    Polyomino,
    make_temperleyan,
    rectangle_host,
    square_annulus_host,
)


def three_by_three_squares():
    """Even 3x3 block: corners are B1 squares."""
    return {(x, y) for x in range(3) for y in range(1, 4)}


def five_by_five_squares():
    return {(x, y) for x in range(5) for y in range(1, 6)}


@pytest.fixture(scope="session")
def host_3x3():
    """3x3 even block minus its lower-left B1 corner: 4 tilings."""
    return make_temperleyan(Polyomino(three_by_three_squares()), (0, 1), [])


@pytest.fixture(scope="session")
def host_5x5():
    """5x5 even block minus corner: 192 tilings."""
    return make_temperleyan(Polyomino(five_by_five_squares()), (0, 1), [])


@pytest.fixture(scope="session")
def host_annulus_small():
    """13x13 with a 5x5 hole, one exposed square."""
    return square_annulus_host(13, 5)


@pytest.fixture(scope="session")
def host_rect_21():
    return rectangle_host(21, 21)


@pytest.fixture(scope="session")
def host_annulus_21():
    return square_annulus_host(21, 7)
