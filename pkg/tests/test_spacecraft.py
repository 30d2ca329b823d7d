import math
from dataclasses import replace

import pytest

from agam.errors import ConfigError, DomainError, LiftToDragRangeError
from agam.spacecraft import (
    aero_coefficients,
    bridge_factor,
    coefficient_table,
    continuum_coefficients,
    drag_coefficient,
    ld_to_aoa,
    lift_to_drag,
    max_lift_to_drag,
)


def test_continuum_coefficients_at_ten_degrees(craft):
    lift, drag = continuum_coefficients(math.radians(10.0), craft)
    assert lift == pytest.approx(0.10364, rel=1e-4)
    assert drag == pytest.approx(0.064274, rel=1e-4)
    assert lift_to_drag(math.radians(10.0), craft) == pytest.approx(1.6125, rel=1e-3)


def test_zero_angle_has_no_lift(craft):
    assert continuum_coefficients(0.0, craft) == (0.0, craft.newtonian_zero_drag)


def test_peak_lift_to_drag(craft):
    aoa, ld = max_lift_to_drag(craft)
    assert math.degrees(aoa) == pytest.approx(16.7, abs=0.1)
    assert ld == pytest.approx(2.1429, rel=1e-3)


def test_ld_to_aoa(craft):
    assert math.degrees(ld_to_aoa(2.0, craft)) == pytest.approx(12.9, abs=0.1)
    assert ld_to_aoa(0.0, craft) == 0.0


@pytest.mark.parametrize("ld", [0.1, 0.5, 1.0, 1.6125, 2.0, 2.14])
def test_ld_to_aoa_inverts_lift_to_drag(craft, ld):
    assert lift_to_drag(ld_to_aoa(ld, craft), craft) == pytest.approx(ld, rel=1e-10)


def test_ld_out_of_range(craft):
    with pytest.raises(LiftToDragRangeError):
        ld_to_aoa(2.2, craft)
    with pytest.raises(DomainError):
        ld_to_aoa(-0.5, craft)


def test_aoa_outside_fit(craft):
    with pytest.raises(DomainError):
        continuum_coefficients(math.radians(18.0), craft)


def test_bridge_factor():
    assert bridge_factor(1e-3) == 0.0
    assert bridge_factor(0.01) == 0.0
    assert bridge_factor(10.0) == 1.0
    assert bridge_factor(1.0) == pytest.approx(0.75)
    samples = [bridge_factor(10 ** (k / 10)) for k in range(-20, 11)]
    assert samples == sorted(samples)


def test_transition_drag(craft):
    assert drag_coefficient(1.0, 0.0, craft) == pytest.approx(0.7615)
    assert aero_coefficients(1.0, math.radians(10.0), craft)[0] == 0.0


def test_free_molecular_coefficients(craft):
    assert aero_coefficients(50.0, math.radians(10.0), craft) == (0.0, 1.0)


def test_coefficient_table(craft):
    rows = coefficient_table(craft)
    assert len(rows) == 18
    assert rows[0].aoa_deg == 0.0
    assert rows[-1].aoa_deg == 17.0
    assert rows[10].lift_to_drag == pytest.approx(1.6125, rel=1e-3)
    with pytest.raises(DomainError):
        coefficient_table(craft, 0.0)


@pytest.mark.parametrize(
    "field, value",
    [
        ("area_to_mass_m2_kg", 0.0),
        ("reference_length_m", -5.0),
        ("newtonian_lift_constant", -1.0),
        ("max_aoa_deg", 25.0),
    ],
)
def test_invalid_spacecraft(craft, field, value):
    with pytest.raises(ConfigError) as info:
        replace(craft, **{field: value})
    assert info.value.field == field
