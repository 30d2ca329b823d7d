import math
from dataclasses import replace

import pytest

from agam.atmosphere import (
    altitude_at_knudsen,
    atmosphere_profile,
    band_altitudes,
    density,
    knudsen,
    mean_free_path,
)
from agam.errors import DomainError
from agam.flow_regime import FlowRegime, classify_regime


def test_density_is_exponential(venus):
    assert density(0.0, venus) == venus.surface_density_kg_m3
    assert density(venus.scale_height_km, venus) == pytest.approx(
        venus.surface_density_kg_m3 / math.e
    )


@pytest.mark.parametrize(
    "planet_name, floor_km, ceiling_km",
    [("venus", 232.1, 268.7), ("mars", 72.25, 97.8)],
)
def test_band_altitudes(request, planet_name, floor_km, ceiling_km, craft):
    planet = request.getfixturevalue(planet_name)
    floor, ceiling = band_altitudes(planet, craft)
    assert floor == pytest.approx(floor_km, abs=0.2)
    assert ceiling == pytest.approx(ceiling_km, abs=0.2)


def test_altitude_at_knudsen_inverts_knudsen(venus, craft):
    for kn in (1e-3, 1e-2, 0.37):
        altitude = altitude_at_knudsen(kn, venus, craft)
        assert knudsen(altitude, venus, craft) == pytest.approx(kn, rel=1e-10)


def test_longer_spacecraft_raises_the_band(venus, craft):
    longer = replace(craft, reference_length_m=10.0)
    assert band_altitudes(venus, longer)[0] > band_altitudes(venus, craft)[0]


def test_no_atmosphere(venus, craft):
    bare = replace(venus, surface_density_kg_m3=0.0)
    assert mean_free_path(100.0, bare) == math.inf
    with pytest.raises(DomainError):
        band_altitudes(bare, craft)


def test_knudsen_must_be_positive(venus, craft):
    with pytest.raises(DomainError):
        altitude_at_knudsen(0.0, venus, craft)


@pytest.mark.parametrize(
    "kn, regime, in_band",
    [
        (20.0, FlowRegime.FREE_MOLECULAR, False),
        (10.0, FlowRegime.FREE_MOLECULAR, False),
        (1.0, FlowRegime.TRANSITION, False),
        (0.01, FlowRegime.CONTINUUM, True),
        (5e-3, FlowRegime.CONTINUUM, True),
        (1e-3, FlowRegime.CONTINUUM, True),
        (1e-4, FlowRegime.CONTINUUM, False),
    ],
)
def test_classify_regime(kn, regime, in_band):
    classification = classify_regime(kn)
    assert classification.regime is regime
    assert classification.in_analysis_band is in_band


@pytest.mark.parametrize("kn", [0.0, -1.0, float("nan")])
def test_classify_regime_rejects(kn):
    with pytest.raises(DomainError):
        classify_regime(kn)


def test_profile_rows(mars, craft):
    rows = atmosphere_profile(mars, craft, [60.0, 80.0, 100.0, 200.0])
    assert [r.altitude_km for r in rows] == [60.0, 80.0, 100.0, 200.0]
    assert [r.in_analysis_band for r in rows] == [False, True, False, False]
    knudsens = [r.knudsen for r in rows]
    assert knudsens == sorted(knudsens)
    assert rows[0].regime is FlowRegime.CONTINUUM
