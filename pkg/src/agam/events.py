"""Scalar events monitored along a propagation, and their localization."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Tuple

import numpy as np
from scipy.optimize import brentq

from agam.errors import NoSignChangeError
from agam.rotating_state import StateVector

type EventFunction = Callable[[float, StateVector], float]
type DenseEvaluator = Callable[[float], StateVector]

# Brent gives up after this many refinements, whatever the tolerance.
_MAX_ITERATIONS = 200
# Steps past the Brent root before falling back to the end of the bracket.
_NUDGES = 8
_EPS = float(np.finfo(float).eps)


class EventDirection(Enum):
    """Sign change that triggers an event, in the order the values are traversed
    by the integration (so also for backward propagation)."""

    RISING = "rising"
    FALLING = "falling"
    ANY = "any"

    def triggers(self, before: float, after: float) -> bool:
        rising = before < 0.0 <= after
        falling = before > 0.0 >= after
        match self:
            case EventDirection.RISING:
                return rising
            case EventDirection.FALLING:
                return falling
            case EventDirection.ANY:
                return rising or falling
            case _:
                raise ValueError("Unknown EventDirection.")


@dataclass(frozen=True)
class EventSpec:
    """An event g(t, y) = 0 to watch during a propagation.

    Attributes:
        function: Scalar function of time and state, finite along the trajectory.
        direction: Sign changes that count.
        terminal: Stop the propagation at the first occurrence.
        label: Name reported in the event records.
    """

    function: EventFunction
    direction: EventDirection = EventDirection.ANY
    terminal: bool = False
    label: str = ""


class EventRecord(NamedTuple):
    """A localized event.

    Values:
        label: Label of the EventSpec that fired.
        t: Time of the crossing, within event_time_tol.
        state: State at t.
        direction: RISING or FALLING, the crossing actually observed.
    """

    label: str
    t: float
    state: StateVector
    direction: EventDirection


def locate_event(
    bracket: Tuple[float, float],
    event_function: EventFunction,
    evaluator: DenseEvaluator,
    tol: float,
) -> Tuple[float, StateVector]:
    """Refine a sign change of event_function inside a time bracket.

    The root is found with Brent's method on g(t, y(t)). Brent stops within tol
    of the crossing but on either side of it; the result is then moved toward
    the 'after' end, a few tolerances at a time, until g has changed sign.

    Args:
        bracket: (t_before, t_after) in integration order; may be decreasing.
        event_function: g(t, y).
        evaluator: Continuous solution y(t) over the bracket.
        tol: Absolute time tolerance of the crossing.

    Returns:
        The time and state on the 'after' side of the crossing (or exactly on
        the root when one is hit), so the event has always taken place at the
        returned state.

    Raises:
        NoSignChangeError: If g has the same sign at both ends of the bracket.
    """
    a, b = bracket
    ya, yb = evaluator(a), evaluator(b)
    ga, gb = event_function(a, ya), event_function(b, yb)
    if not (math.isfinite(ga) and math.isfinite(gb)):
        raise NoSignChangeError(f"Event function is not finite on [{a}, {b}].")
    if ga == 0.0:
        return a, ya
    if gb == 0.0:
        return b, yb
    if (ga > 0.0) == (gb > 0.0):
        raise NoSignChangeError(
            f"No sign change on [{a}, {b}]: g(a)={ga}, g(b)={gb}."
        )

    def g(t: float) -> float:
        return event_function(t, evaluator(t))

    root = brentq(g, min(a, b), max(a, b), xtol=tol, maxiter=_MAX_ITERATIONS)
    toward_b = math.copysign(1.0, b - a)
    step = 2.0 * (tol + 4.0 * _EPS * abs(root))
    t = root
    for _ in range(_NUDGES):
        y = evaluator(t)
        gt = event_function(t, y)
        if gt == 0.0 or (gt > 0.0) == (gb > 0.0):
            return t, y
        t = root + toward_b * step
        if (t - b) * toward_b >= 0.0:
            break
        step *= 2.0
    return b, yb
