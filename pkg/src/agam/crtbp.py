"""Planar circular restricted three-body problem in canonical units.

All functions are pure. Positions are barycentric, in the frame rotating with the
planet (Sun at (-mu, 0), planet at (1 - mu, 0)). The perturbation passed to the
equations of motion is an acceleration already expressed in DU/TU^2.
"""

import math
from enum import Enum, auto
from typing import NamedTuple, Tuple

import numpy as np

from agam.errors import SingularPositionError
from agam.planet import PlanetModel
from agam.rotating_state import RotatingState, StateVector

type Vector2 = Tuple[float, float]

# Distances to a primary below this value (DU) are treated as a collision with
# its centre.
SINGULAR_DISTANCE = 1e-12


class FrameDirection(Enum):
    TO_INERTIAL = auto()
    TO_ROTATING = auto()


class InertialState(NamedTuple):
    """Planar barycentric state in the inertial frame aligned with the rotating
    frame at t = 0."""

    x: float
    y: float
    vx: float
    vy: float
    t: float


class PlanetRelative(NamedTuple):
    """Spacecraft seen from the planet.

    Values:
        r2: Distance to the planet centre, DU.
        altitude_km: Height above the mean radius.
        velocity: Planet-relative velocity in inertial axes, VU.
        energy: Two-body specific energy w.r.t. the planet, canonical.
                Positive means hyperbolic (escape).
    """

    r2: float
    altitude_km: float
    velocity: Vector2
    energy: float


def primary_distances(x: float, y: float, mu: float) -> Tuple[float, float]:
    """Distances (r1, r2) to the Sun and to the planet.

    Raises:
        SingularPositionError: If the point is on one of the primaries.
    """
    r1 = math.hypot(x + mu, y)
    r2 = math.hypot(x - 1.0 + mu, y)
    if r1 < SINGULAR_DISTANCE or r2 < SINGULAR_DISTANCE:
        raise SingularPositionError(
            f"Position ({x}, {y}) is singular for mu={mu}: r1={r1}, r2={r2}."
        )
    return r1, r2


def omega_potential(position: Vector2, mu: float) -> float:
    """Effective potential Omega = (x^2 + y^2)/2 + (1 - mu)/r1 + mu/r2."""
    x, y = position
    r1, r2 = primary_distances(x, y, mu)
    return 0.5 * (x * x + y * y) + (1.0 - mu) / r1 + mu / r2


def omega_gradient(position: Vector2, mu: float) -> Vector2:
    """Analytic partial derivatives (Omega_x, Omega_y)."""
    x, y = position
    r1, r2 = primary_distances(x, y, mu)
    k1 = (1.0 - mu) / r1**3
    k2 = mu / r2**3
    omega_x = x - k1 * (x + mu) - k2 * (x - 1.0 + mu)
    omega_y = y - k1 * y - k2 * y
    return omega_x, omega_y


def crtbp_rates(
    vector: StateVector, mu: float, perturbation: Vector2 = (0.0, 0.0)
) -> StateVector:
    """Time derivative of a (x, y, vx, vy) vector.

    This is the array form of crtbp_derivative, used by the propagator.
    """
    x, y, vx, vy = vector[0], vector[1], vector[2], vector[3]
    omega_x, omega_y = omega_gradient((x, y), mu)
    return np.array(
        [
            vx,
            vy,
            2.0 * vy + omega_x + perturbation[0],
            -2.0 * vx + omega_y + perturbation[1],
        ]
    )


def crtbp_derivative(
    state: RotatingState, mu: float, perturbation: Vector2 = (0.0, 0.0)
) -> StateVector:
    """Equations of motion of the planar CRTBP with a perturbing acceleration.

    Args:
        state: Current rotating-frame state.
        mu: Mass ratio of the system.
        perturbation: Aerodynamic (and thrust) acceleration, DU/TU^2, in rotating
                      axes. Zero for a pure gravity assist.

    Returns:
        (vx, vy, ax, ay) with ax = 2 vy + Omega_x + A_x and
        ay = -2 vx + Omega_y + A_y.

    Raises:
        SingularPositionError: If the state is on one of the primaries.
    """
    return crtbp_rates(state.as_array(), mu, perturbation)


def jacobi_constant(state: RotatingState, mu: float) -> float:
    """C = 2 Omega - (vx^2 + vy^2), conserved by the unperturbed flow."""
    omega = omega_potential((state.x, state.y), mu)
    return 2.0 * omega - (state.vx**2 + state.vy**2)


def _rotate(vector: Vector2, angle: float) -> Vector2:
    c, s = math.cos(angle), math.sin(angle)
    return c * vector[0] - s * vector[1], s * vector[0] + c * vector[1]


def inertial_velocity_rotating_axes(state: RotatingState) -> Vector2:
    """Inertial velocity, still expressed along the rotating axes: v + w x r."""
    return state.vx - state.y, state.vy + state.x


def to_inertial(state: RotatingState) -> InertialState:
    x, y = _rotate((state.x, state.y), state.t)
    vx, vy = _rotate(inertial_velocity_rotating_axes(state), state.t)
    return InertialState(x, y, vx, vy, state.t)


def to_rotating(state: InertialState) -> RotatingState:
    x, y = _rotate((state.x, state.y), -state.t)
    vx, vy = _rotate((state.vx, state.vy), -state.t)
    return RotatingState(x, y, vx + y, vy - x, state.t)


def frame_transform(
    state: RotatingState | InertialState, direction: FrameDirection
) -> RotatingState | InertialState:
    """Move a state between the rotating and the inertial barycentric frames.

    The rotation angle is the canonical time of the state, the frames coincide at
    t = 0.
    """
    match direction:
        case FrameDirection.TO_INERTIAL:
            if not isinstance(state, RotatingState):
                raise TypeError("Only a RotatingState can be sent to inertial.")
            return to_inertial(state)
        case FrameDirection.TO_ROTATING:
            if not isinstance(state, InertialState):
                raise TypeError("Only an InertialState can be sent to rotating.")
            return to_rotating(state)
        case _:
            raise ValueError("Unknown FrameDirection.")


def heliocentric_energy(state: RotatingState, mu: float) -> float:
    """Two-body heliocentric specific energy, v_inertial^2 / 2 - (1 - mu) / r1.

    The planet term is left out: it is evaluated far from the planet (r2 >= 0.5 DU)
    where it is below 2 mu.
    """
    r1 = math.hypot(state.x + mu, state.y)
    if r1 < SINGULAR_DISTANCE:
        raise SingularPositionError(f"State {state} is on the Sun.")
    vx, vy = inertial_velocity_rotating_axes(state)
    return 0.5 * (vx * vx + vy * vy) - (1.0 - mu) / r1


def planet_relative(state: RotatingState, planet: PlanetModel) -> PlanetRelative:
    """Distance, altitude, velocity and two-body energy relative to the planet."""
    mu = planet.mass_ratio
    dx = state.x - (1.0 - mu)
    r2 = math.hypot(dx, state.y)
    altitude_km = r2 * planet.du_km - planet.radius_km

    # The planet moves at (0, 1 - mu) along the rotating axes.
    vx, vy = inertial_velocity_rotating_axes(state)
    relative = _rotate((vx, vy - (1.0 - mu)), state.t)

    if r2 < SINGULAR_DISTANCE:
        energy = -math.inf
    else:
        energy = 0.5 * (relative[0] ** 2 + relative[1] ** 2) - mu / r2
    return PlanetRelative(r2, altitude_km, relative, energy)


def planet_distance(vector: StateVector, mu: float) -> float:
    return math.hypot(vector[0] - 1.0 + mu, vector[1])
