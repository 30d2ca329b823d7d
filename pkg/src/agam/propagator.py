"""Adaptive RKF7(8) propagation with event detection.

The propagator walks from t0 towards t_limit (forward or backward) with the
embedded pair of agam.rkf78. After each accepted step every event function is
evaluated at the new step point; a sign change is localized on the continuous
extension of the step, which is an RKF7(8) sub-step from the accepted step start,
so event states carry the accuracy of the integration itself.
"""

import logging
import math
from enum import Enum
from typing import List, NamedTuple, Sequence

import numpy as np

from agam.errors import MaxStepsExceededError, StepUnderflowError
from agam.events import EventDirection, EventRecord, EventSpec, locate_event
from agam.integrator_settings import IntegratorSettings
from agam.rkf78 import ORDER, Derivative, rkf78_step
from agam.rotating_state import StateVector

logger = logging.getLogger(__name__)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class TerminationReason(Enum):
    TIME_LIMIT = "time_limit"
    TERMINAL_EVENT = "terminal_event"


class Trajectory:
    """Step points of a propagation with a cubic Hermite dense output.

    Attributes:
        times: Step times, strictly monotone in the integration direction.
        states: One state per step time.
        derivatives: Time derivative of each state.
    """

    def __init__(
        self,
        times: Sequence[float],
        states: Sequence[StateVector],
        derivatives: Sequence[StateVector],
    ):
        self.times = np.asarray(times, dtype=float)
        self.states = np.asarray(states, dtype=float)
        self.derivatives = np.asarray(derivatives, dtype=float)
        self._ascending = len(self.times) < 2 or self.times[-1] > self.times[0]

    def __len__(self) -> int:
        return len(self.times)

    @property
    def initial_state(self) -> StateVector:
        return self.states[0]

    @property
    def final_state(self) -> StateVector:
        return self.states[-1]

    @property
    def final_time(self) -> float:
        return float(self.times[-1])

    def dense(self, t: float) -> StateVector:
        """State at any t of the covered span, by cubic Hermite interpolation of the
        step points and their derivatives.

        Raises:
            ValueError: If t is outside the covered span.
        """
        lower, upper = sorted((self.times[0], self.times[-1]))
        if not lower <= t <= upper:
            raise ValueError(f"t={t} outside the propagated span [{lower}, {upper}].")
        if len(self.times) == 1:
            return self.states[0].copy()

        if self._ascending:
            i = int(np.searchsorted(self.times, t, side="right")) - 1
        else:
            reversed_index = int(np.searchsorted(self.times[::-1], t, side="left"))
            i = len(self.times) - 1 - reversed_index
        i = min(max(i, 0), len(self.times) - 2)

        t0, t1 = self.times[i], self.times[i + 1]
        h = t1 - t0
        s = (t - t0) / h
        s2, s3 = s * s, s * s * s
        return (
            (2 * s3 - 3 * s2 + 1) * self.states[i]
            + (s3 - 2 * s2 + s) * h * self.derivatives[i]
            + (-2 * s3 + 3 * s2) * self.states[i + 1]
            + (s3 - s2) * h * self.derivatives[i + 1]
        )

    def sample(self, n: int) -> np.ndarray:
        """n evenly spaced dense states from the first to the last step time, as
        rows (t, state...)."""
        if n < 2:
            raise ValueError(f"At least two samples are needed, got {n}.")
        times = np.linspace(self.times[0], self.times[-1], n)
        return np.array([np.concatenate(([t], self.dense(t))) for t in times])


class Propagation(NamedTuple):
    trajectory: Trajectory
    events: List[EventRecord]
    reason: TerminationReason


def _step_factor(error: float) -> float:
    if error == 0.0:
        return _MAX_FACTOR
    factor = _SAFETY * error ** (-1.0 / ORDER)
    return min(_MAX_FACTOR, max(_MIN_FACTOR, factor))


def propagate(
    derivative: Derivative,
    initial_state: StateVector,
    t0: float,
    t_limit: float,
    events: Sequence[EventSpec] = (),
    settings: IntegratorSettings = IntegratorSettings(),
) -> Propagation:
    """Integrate y' = derivative(t, y) from t0 up to t_limit or a terminal event.

    Args:
        derivative: f(t, y).
        initial_state: y(t0).
        t0: Start time.
        t_limit: End time; t_limit < t0 integrates backward.
        events: Events to localize. Records are ordered by time of occurrence.
        settings: Tolerances and step bounds.

    Returns:
        The step history, the localized events, and why the propagation stopped.
        A terminal event ends the trajectory exactly at the event state.

    Raises:
        ValueError: If t_limit equals t0.
        StepUnderflowError: If a step smaller than h_min still fails the error
                            test.
        MaxStepsExceededError: If more than max_steps steps are attempted.
    """
    if t_limit == t0:
        raise ValueError(f"Empty propagation span, t0 = t_limit = {t0}.")

    direction = 1.0 if t_limit > t0 else -1.0
    t = float(t0)
    y = np.array(initial_state, dtype=float)
    f = np.asarray(derivative(t, y), dtype=float)

    times, states, derivatives = [t], [y], [f]
    records: List[EventRecord] = []
    values = [spec.function(t, y) for spec in events]

    h = settings.h_init
    attempts = 0
    while True:
        remaining = abs(t_limit - t)
        if remaining == 0.0:
            break
        last_step = h >= remaining
        h_step = remaining if last_step else h

        attempts += 1
        if attempts > settings.max_steps:
            raise MaxStepsExceededError(
                f"More than {settings.max_steps} steps, stopped at t={t}."
            )

        step = rkf78_step(
            derivative,
            y,
            t,
            direction * h_step,
            settings.rel_tol,
            settings.abs_tol,
            first_stage=f,
        )
        if not settings.fixed_step and not step.error <= 1.0:
            if not math.isfinite(step.error):
                h = _MIN_FACTOR * h_step
            else:
                h = _step_factor(step.error) * h_step
            if h < settings.h_min:
                raise StepUnderflowError(
                    f"Step {h} below h_min={settings.h_min} at t={t} "
                    f"(error estimate {step.error})."
                )
            continue

        t_new = t_limit if last_step else t + direction * h_step
        y_new = step.high
        f_new = np.asarray(derivative(t_new, y_new), dtype=float)

        hit = _detect_events(
            events, values, derivative, settings, t, y, f, t_new, y_new
        )
        terminal = next((r for r, spec in hit if spec.terminal), None)
        if terminal is not None:
            records.extend(r for r, _ in hit if _not_after(r.t, terminal.t, direction))
            times.append(terminal.t)
            states.append(terminal.state)
            derivatives.append(
                np.asarray(derivative(terminal.t, terminal.state), dtype=float)
            )
            logger.debug(
                "Terminal event %s at t=%.12g after %d steps",
                terminal.label,
                terminal.t,
                len(times) - 1,
            )
            return Propagation(
                Trajectory(times, states, derivatives),
                records,
                TerminationReason.TERMINAL_EVENT,
            )
        records.extend(r for r, _ in hit)

        t, y, f = t_new, y_new, f_new
        times.append(t)
        states.append(y)
        derivatives.append(f)
        values = [spec.function(t, y) for spec in events]

        if not settings.fixed_step:
            h = min(_step_factor(step.error) * h_step, settings.h_max)
            h = max(h, settings.h_min)

    logger.debug("Time limit %.12g reached after %d steps", t_limit, len(times) - 1)
    return Propagation(
        Trajectory(times, states, derivatives), records, TerminationReason.TIME_LIMIT
    )


def _not_after(t: float, t_stop: float, direction: float) -> bool:
    return direction * (t - t_stop) <= 0.0


def _detect_events(
    events: Sequence[EventSpec],
    values_before: Sequence[float],
    derivative: Derivative,
    settings: IntegratorSettings,
    t: float,
    y: StateVector,
    f: StateVector,
    t_new: float,
    y_new: StateVector,
) -> List[tuple[EventRecord, EventSpec]]:
    """Localize the events firing over one accepted step, sorted by time."""

    def evaluator(s: float) -> StateVector:
        if s == t:
            return y
        if s == t_new:
            return y_new
        return rkf78_step(
            derivative, y, t, s - t, settings.rel_tol, settings.abs_tol, first_stage=f
        ).high

    hit = []
    for spec, before in zip(events, values_before):
        after = spec.function(t_new, y_new)
        if not spec.direction.triggers(before, after):
            continue
        t_event, state = locate_event(
            (t, t_new), spec.function, evaluator, settings.event_time_tol
        )
        crossing = EventDirection.RISING if after > before else EventDirection.FALLING
        hit.append((EventRecord(spec.label, t_event, state, crossing), spec))

    direction = 1.0 if t_new > t else -1.0
    hit.sort(key=lambda item: direction * item[0].t)
    return hit
