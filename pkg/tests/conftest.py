import math

import pytest

from bellgame.builtin import builtin_game
from bellgame.game import Prior
from bellgame.quantum import PlanarAngles, ghz_advisor


@pytest.fixture(scope="session")
def table1():
    return builtin_game()


@pytest.fixture(scope="session")
def utilities(table1):
    return table1.utilities


@pytest.fixture(scope="session")
def uniform_prior():
    return Prior.uniform()


@pytest.fixture(scope="session")
def reference_angles():
    # the known four-decimal optimum in the canonical gauge
    return PlanarAngles(0.0, -math.pi / 2, 0.0, -math.pi / 2, 2.1588, 0.5880)


@pytest.fixture(scope="session")
def ghz():
    return ghz_advisor()
