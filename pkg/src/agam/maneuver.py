"""Swing-by simulation, from the projected pericenter to the extracted metrics.

A maneuver is flown in two legs. The projected pericenter state is propagated
backward without atmosphere to find where the encounter starts, then forward with
the perturbation of the maneuver kind until the spacecraft leaves the vicinity of
the planet. Metrics come from the forward leg and its events.

Forward-leg state vectors carry a fifth component, the accumulated thrust
acceleration (delta-V, VU), so that the step control bounds its error as well.
It stays at zero unless the maneuver is powered.
"""

import logging
import math
from typing import List, NamedTuple

import numpy as np

from agam.aerodynamics import AeroModel
from agam.atmosphere import band_altitudes
from agam.crtbp import (
    crtbp_rates,
    heliocentric_energy,
    planet_distance,
    planet_relative,
)
from agam.errors import (
    DegenerateLiftError,
    IntegrationError,
    MissingSoiCrossingError,
    SingularPositionError,
)
from agam.events import EventDirection, EventRecord, EventSpec
from agam.maneuver_config import ManeuverConfig
from agam.maneuver_kind import ManeuverKind
from agam.propagator import Propagation, Trajectory, propagate
from agam.rkf78 import Derivative
from agam.rotating_state import RotatingState, StateVector
from agam.trajectory_result import EventTime, TrajectoryResult, TrajectoryStatus

logger = logging.getLogger(__name__)

# The encounter spans the time the spacecraft is closer than this to the planet.
ENCOUNTER_DISTANCE_DU = 0.5
# ...but never more than this on each side of the pericenter.
ENCOUNTER_HALF_SPAN_TU = 0.5 * math.pi

# The forward leg stops this many scale heights below the band floor.
DEEP_ATMOSPHERE_SCALE_HEIGHTS = 3.0

# Contributions relative to a baseline smaller than this are undefined.
CONTRIBUTION_BASELINE_MIN = 1e-12

SOI = "soi"
BAND_FLOOR = "band_floor"
BAND_CEILING = "band_ceiling"
PERICENTER = "pericenter"
COLLISION = "collision"
DEEP_ATMOSPHERE = "deep_atmosphere"
END = "end"


class ApproachLeg(NamedTuple):
    """Start of the encounter found by the backward leg.

    Values:
        initial_state: Rotating state where the backward propagation stopped.
        initial_energy: Heliocentric energy there, canonical.
    """

    initial_state: RotatingState
    initial_energy: float


class Contribution(NamedTuple):
    """Change of a metric relative to the GAM baseline, in percent. None when the
    baseline is (numerically) zero or missing."""

    voe_pct: float | None
    delta_pct: float | None


def build_derivative(config: ManeuverConfig) -> Derivative:
    """Forward-leg equations of motion of the maneuver kind, on 5-vectors."""
    mu = config.planet.mass_ratio
    match config.kind:
        case ManeuverKind.GAM:

            def derivative(t: float, y: StateVector) -> StateVector:
                return np.append(crtbp_rates(y, mu), 0.0)

        case ManeuverKind.AGAM | ManeuverKind.PAGAM:
            aero = AeroModel(
                config.planet,
                config.craft,
                config.kind,
                config.signed_ld,
                config.pagam_thrust,
            )

            def derivative(t: float, y: StateVector) -> StateVector:
                acceleration = aero.acceleration_at(y[0], y[1], y[2], y[3])
                rates = crtbp_rates(y, mu, acceleration.perturbation)
                return np.append(rates, acceleration.thrust)

        case _:
            raise ValueError("Unknown ManeuverKind.")
    return derivative


def _gravity(mu: float) -> Derivative:
    def derivative(t: float, y: StateVector) -> StateVector:
        return crtbp_rates(y, mu)

    return derivative


def pericenter_state(config: ManeuverConfig) -> RotatingState:
    """Projected pericenter at t = 0.

    The position is r_p (cos psi, sin psi) from the planet centre; the velocity has
    the configured speed along the radial direction turned by the velocity sense.
    """
    mu = config.planet.mass_ratio
    psi = math.radians(config.psi_deg)
    r_p = config.pericenter_radius_du
    radial = (math.cos(psi), math.sin(psi))
    turn = math.radians(config.velocity_sense.angle_deg)
    c, s = math.cos(turn), math.sin(turn)
    speed = config.pericenter_speed_vu
    return RotatingState(
        x=1.0 - mu + r_p * radial[0],
        y=r_p * radial[1],
        vx=speed * (c * radial[0] - s * radial[1]),
        vy=speed * (s * radial[0] + c * radial[1]),
        t=0.0,
    )


def _end_event(mu: float) -> EventSpec:
    return EventSpec(
        lambda t, y: planet_distance(y, mu) - ENCOUNTER_DISTANCE_DU,
        EventDirection.RISING,
        terminal=True,
        label=END,
    )


def backward_leg(config: ManeuverConfig) -> ApproachLeg:
    """Propagate the pericenter backward, without atmosphere, until the spacecraft
    is 0.5 DU from the planet or t = -pi/2.

    Raises:
        IntegrationError: If the propagation fails.
    """
    mu = config.planet.mass_ratio
    start = pericenter_state(config)
    propagation = propagate(
        _gravity(mu),
        start.as_array(),
        0.0,
        -ENCOUNTER_HALF_SPAN_TU,
        [_end_event(mu)],
        config.integrator,
    )
    trajectory = propagation.trajectory
    state = RotatingState.from_array(trajectory.final_state, trajectory.final_time)
    energy = heliocentric_energy(state, mu)
    logger.debug(
        "Backward leg ended at t=%.12g (%s), E_i=%.15g",
        state.t,
        propagation.reason.value,
        energy,
    )
    return ApproachLeg(state, energy)


def _forward_events(config: ManeuverConfig) -> List[EventSpec]:
    planet = config.planet
    mu = planet.mass_ratio
    soi = planet.soi_radius_du
    surface = planet.radius_du

    events = [
        EventSpec(lambda t, y: planet_distance(y, mu) - soi, label=SOI),
        EventSpec(
            lambda t, y: (y[0] - 1.0 + mu) * y[2] + y[1] * y[3],
            EventDirection.RISING,
            label=PERICENTER,
        ),
        EventSpec(
            lambda t, y: planet_distance(y, mu) - surface,
            EventDirection.FALLING,
            terminal=True,
            label=COLLISION,
        ),
        _end_event(mu),
    ]
    if _in_atmosphere(config):
        floor_km, ceiling_km = band_altitudes(planet, config.craft)
        floor = (planet.radius_km + floor_km) / planet.du_km
        ceiling = (planet.radius_km + ceiling_km) / planet.du_km
        events.append(
            EventSpec(lambda t, y: planet_distance(y, mu) - floor, label=BAND_FLOOR)
        )
        events.append(
            EventSpec(lambda t, y: planet_distance(y, mu) - ceiling, label=BAND_CEILING)
        )
        deep_km = floor_km - DEEP_ATMOSPHERE_SCALE_HEIGHTS * planet.scale_height_km
        if deep_km > 0.0:
            deep = (planet.radius_km + deep_km) / planet.du_km
            events.append(
                EventSpec(
                    lambda t, y: planet_distance(y, mu) - deep,
                    EventDirection.FALLING,
                    terminal=True,
                    label=DEEP_ATMOSPHERE,
                )
            )
    return events


def _in_atmosphere(config: ManeuverConfig) -> bool:
    return config.kind.flies_in_atmosphere and config.planet.has_atmosphere


def forward_leg(initial_state: RotatingState, config: ManeuverConfig) -> Propagation:
    """Propagate the encounter with the perturbation of the maneuver kind.

    Stops at 0.5 DU from the planet, at t = pi/2, at a surface collision, or
    DEEP_ATMOSPHERE_SCALE_HEIGHTS scale heights below the analysis band. SOI
    crossings, pericenters and (when flying in an atmosphere) analysis-band
    boundary crossings are recorded on the way.

    Raises:
        IntegrationError: If the propagation fails.
    """
    start = np.append(initial_state.as_array(), 0.0)
    return propagate(
        build_derivative(config),
        start,
        initial_state.t,
        ENCOUNTER_HALF_SPAN_TU,
        _forward_events(config),
        config.integrator,
    )


def _rotating(vector: StateVector, t: float) -> RotatingState:
    return RotatingState.from_array(vector, t)


def _angle_between(a, b) -> float:
    norm = math.hypot(*a) * math.hypot(*b)
    cosine = (a[0] * b[0] + a[1] * b[1]) / norm
    return math.degrees(math.acos(min(1.0, max(-1.0, cosine))))


def _turn_angle(
    trajectory: Trajectory, events: List[EventRecord], config: ManeuverConfig
) -> float | None:
    crossings = [e for e in events if e.label == SOI]
    inbound = next(
        (e for e in crossings if e.direction is EventDirection.FALLING), None
    )
    if inbound is None:
        raise MissingSoiCrossingError(
            f"The trajectory never entered the SOI of {config.planet.name} "
            f"(psi={config.psi_deg}, h={config.pericenter_altitude_km} km)."
        )
    outbound = next(
        (e for e in reversed(crossings) if e.direction is EventDirection.RISING), None
    )
    if outbound is not None and outbound.t > inbound.t:
        exit_state = _rotating(outbound.state, outbound.t)
    else:
        exit_state = _rotating(trajectory.final_state, trajectory.final_time)
    v_in = planet_relative(_rotating(inbound.state, inbound.t), config.planet).velocity
    v_out = planet_relative(exit_state, config.planet).velocity
    return _angle_between(v_in, v_out)


def _tof_band(
    trajectory: Trajectory, events: List[EventRecord], config: ManeuverConfig
) -> float:
    """Time spent between the band floor and ceiling, in seconds."""
    if not _in_atmosphere(config):
        return 0.0
    planet = config.planet
    floor_km, ceiling_km = band_altitudes(planet, config.craft)
    altitude = planet_relative(
        _rotating(trajectory.initial_state, trajectory.times[0]), planet
    ).altitude_km
    above_floor = altitude >= floor_km
    below_ceiling = altitude <= ceiling_km

    inside_since = trajectory.times[0] if above_floor and below_ceiling else None
    total = 0.0
    for event in events:
        if event.label == BAND_FLOOR:
            above_floor = event.direction is EventDirection.RISING
        elif event.label == BAND_CEILING:
            below_ceiling = event.direction is EventDirection.FALLING
        else:
            continue
        inside = above_floor and below_ceiling
        if inside and inside_since is None:
            inside_since = event.t
        elif not inside and inside_since is not None:
            total += event.t - inside_since
            inside_since = None
    if inside_since is not None:
        total += trajectory.final_time - inside_since
    return total * planet.tu_s


def _closest_approach(
    trajectory: Trajectory, events: List[EventRecord], mu: float
) -> RotatingState:
    pericenters = [e for e in events if e.label == PERICENTER]
    if pericenters:
        best = min(pericenters, key=lambda e: planet_distance(e.state, mu))
        return _rotating(best.state, best.t)
    distances = np.hypot(trajectory.states[:, 0] - 1.0 + mu, trajectory.states[:, 1])
    i = int(np.argmin(distances))
    return _rotating(trajectory.states[i], trajectory.times[i])


def _post_passage_energy(
    trajectory: Trajectory, events: List[EventRecord], config: ManeuverConfig
) -> float:
    """Planet-relative energy once out of the atmosphere: at the last band-ceiling
    exit, else the last SOI exit, else the final state."""
    for label in (BAND_CEILING, SOI):
        exits = [
            e
            for e in events
            if e.label == label and e.direction is EventDirection.RISING
        ]
        if exits:
            state = _rotating(exits[-1].state, exits[-1].t)
            return planet_relative(state, config.planet).energy
    final = _rotating(trajectory.final_state, trajectory.final_time)
    return planet_relative(final, config.planet).energy


def _wrap_deg(angle: float) -> float:
    wrapped = math.fmod(angle + 180.0, 360.0)
    if wrapped <= 0.0:
        wrapped += 360.0
    return wrapped - 180.0


def extract_metrics(
    trajectory: Trajectory,
    events: List[EventRecord],
    initial_energy: float,
    config: ManeuverConfig,
) -> TrajectoryResult:
    """Metrics and status of a forward leg.

    Raises:
        MissingSoiCrossingError: If the trajectory never enters the SOI.
    """
    planet = config.planet
    mu = planet.mass_ratio
    collided = any(e.label == COLLISION for e in events)
    below_band = _in_atmosphere(config) and any(
        e.label == BAND_FLOOR and e.direction is EventDirection.FALLING for e in events
    )

    closest = _closest_approach(trajectory, events, mu)
    closest_relative = planet_relative(closest, planet)
    distances = np.hypot(trajectory.states[:, 0] - 1.0 + mu, trajectory.states[:, 1])
    min_altitude_km = min(
        closest_relative.altitude_km,
        float(distances.min()) * planet.du_km - planet.radius_km,
    )

    samples = None
    if config.record_samples:
        samples = np.column_stack((trajectory.times, trajectory.states[:, :4]))
    event_times = [EventTime(e.label, e.t) for e in events]

    if collided:
        return TrajectoryResult(
            TrajectoryStatus.COLLISION,
            min_altitude_km=min_altitude_km,
            initial_energy=initial_energy,
            events=event_times,
            samples=samples,
        )

    final = _rotating(trajectory.final_state, trajectory.final_time)
    final_energy = heliocentric_energy(final, mu)
    post_passage = _post_passage_energy(trajectory, events, config)

    actual_psi = math.degrees(math.atan2(closest.y, closest.x - (1.0 - mu))) % 360.0
    psi_deviation = _wrap_deg(actual_psi - config.psi_deg)
    psi_deviation_pct = (
        100.0 * psi_deviation / config.psi_deg if config.psi_deg != 0.0 else None
    )

    message = ""
    if below_band:
        status = TrajectoryStatus.BELOW_BAND
        if any(e.label == DEEP_ATMOSPHERE for e in events):
            message = (
                f"Stopped {DEEP_ATMOSPHERE_SCALE_HEIGHTS:g} scale heights below "
                "the analysis band."
            )
    elif post_passage <= 0.0:
        status = TrajectoryStatus.CAPTURED
    else:
        status = TrajectoryStatus.OK

    return TrajectoryResult(
        status,
        voe_km2_s2=(final_energy - initial_energy) * planet.vu_km_s**2,
        turn_angle_deg=_turn_angle(trajectory, events, config),
        tof_band_s=_tof_band(trajectory, events, config),
        actual_pericenter_altitude_km=closest_relative.altitude_km,
        actual_approach_angle_deg=actual_psi,
        pericenter_altitude_deviation_km=(
            closest_relative.altitude_km - config.pericenter_altitude_km
        ),
        approach_angle_deviation_deg=psi_deviation,
        approach_angle_deviation_pct=psi_deviation_pct,
        delta_v_km_s=float(trajectory.final_state[4]) * planet.vu_km_s,
        min_altitude_km=min_altitude_km,
        initial_energy=initial_energy,
        final_energy=final_energy,
        post_passage_energy=post_passage,
        events=event_times,
        samples=samples,
        message=message,
    )


def run_maneuver(config: ManeuverConfig) -> TrajectoryResult:
    """Fly one maneuver end to end.

    Integration failures (and states where the dynamics are undefined) give a
    StepFailure result instead of an exception.

    Raises:
        MissingSoiCrossingError: If the configuration never brings the spacecraft
                                 inside the SOI.
    """
    logger.debug(
        "Running %s at %s: psi=%g deg, h=%g km, L/D=%g",
        config.kind.value,
        config.planet.name,
        config.psi_deg,
        config.pericenter_altitude_km,
        config.signed_ld,
    )
    try:
        approach = backward_leg(config)
        propagation = forward_leg(approach.initial_state, config)
    except (IntegrationError, SingularPositionError, DegenerateLiftError) as e:
        logger.warning(
            "%s at %s, psi=%g deg, h=%g km, L/D=%g failed: %s",
            config.kind.value,
            config.planet.name,
            config.psi_deg,
            config.pericenter_altitude_km,
            config.signed_ld,
            e,
        )
        return TrajectoryResult(TrajectoryStatus.STEP_FAILURE, message=str(e))

    result = extract_metrics(
        propagation.trajectory, propagation.events, approach.initial_energy, config
    )
    logger.debug(
        "%s finished with status %s after %d steps",
        config.kind.value,
        result.status.value,
        len(propagation.trajectory) - 1,
    )
    return result


def _percent_change(value: float | None, baseline: float | None) -> float | None:
    if value is None or baseline is None or abs(baseline) < CONTRIBUTION_BASELINE_MIN:
        return None
    return 100.0 * (value - baseline) / abs(baseline)


def contribution(result: TrajectoryResult, baseline: TrajectoryResult) -> Contribution:
    """Percent change of VOE and turn angle against the GAM flown at the same
    pericenter: 100 (X - X_GAM) / |X_GAM|."""
    if not baseline.status.is_ok:
        return Contribution(None, None)
    return Contribution(
        _percent_change(result.voe_km2_s2, baseline.voe_km2_s2),
        _percent_change(result.turn_angle_deg, baseline.turn_angle_deg),
    )
