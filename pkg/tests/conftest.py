import pytest

from agam.planet import PlanetModel, get_planet
from agam.spacecraft import SpacecraftModel
from tests.maneuver_factory import ManeuverFactory


@pytest.fixture(scope="module")
def maneuver_factory():
    """Fixture to create a memoized ManeuverFactory instance."""
    return ManeuverFactory()


@pytest.fixture(scope="module")
def venus() -> PlanetModel:
    return get_planet("venus")


@pytest.fixture(scope="module")
def mars() -> PlanetModel:
    return get_planet("mars")


@pytest.fixture(scope="module")
def craft() -> SpacecraftModel:
    return SpacecraftModel()
