import math

import numpy as np
import pytest

from agam.errors import (
    ConfigError,
    MaxStepsExceededError,
    NoSignChangeError,
    StepUnderflowError,
)
from agam.events import EventDirection, EventSpec, locate_event
from agam.integrator_settings import IntegratorSettings
from agam.propagator import TerminationReason, Trajectory, propagate
from agam.rkf78 import A, B7, B8, C, rkf78_step


def _oscillator(t, y):
    return np.array([y[1], -y[0]])


def _kepler(t, y):
    r3 = math.hypot(y[0], y[1]) ** 3
    return np.array([y[2], y[3], -y[0] / r3, -y[1] / r3])


def _oscillator_state(t):
    return np.array([math.cos(t), -math.sin(t)])


def test_tableau_consistency():
    assert B7.sum() == pytest.approx(1.0, abs=1e-15)
    assert B8.sum() == pytest.approx(1.0, abs=1e-15)
    # Row sums of A are the stage nodes.
    assert A.sum(axis=1) == pytest.approx(C, abs=1e-14)


def test_single_step_exponential():
    step = rkf78_step(lambda t, y: y, np.array([1.0]), 0.0, 0.1)
    assert step.high[0] == pytest.approx(math.exp(0.1), abs=1e-14)
    assert step.low[0] == pytest.approx(math.exp(0.1), abs=1e-11)
    assert step.derivative[0] == 1.0


def test_zero_step_is_rejected():
    with pytest.raises(ValueError):
        rkf78_step(lambda t, y: y, np.array([1.0]), 0.0, 0.0)


def test_oscillator_full_period():
    propagation = propagate(_oscillator, np.array([1.0, 0.0]), 0.0, 2 * math.pi)
    assert propagation.reason is TerminationReason.TIME_LIMIT
    assert propagation.trajectory.final_time == 2 * math.pi
    assert propagation.trajectory.final_state == pytest.approx([1.0, 0.0], abs=1e-10)


def test_backward_propagation():
    propagation = propagate(_oscillator, np.array([1.0, 0.0]), 0.0, -1.0)
    trajectory = propagation.trajectory
    assert np.all(np.diff(trajectory.times) < 0.0)
    assert trajectory.final_state == pytest.approx(_oscillator_state(-1.0), abs=1e-11)


def test_kepler_circular_orbit_closes():
    state = np.array([1.0, 0.0, 0.0, 1.0])
    propagation = propagate(_kepler, state, 0.0, 2 * math.pi)
    assert propagation.trajectory.final_state == pytest.approx(state, abs=1e-9)


def _hyperbola_pericenter():
    # r = 1 at speed 1.5, above escape speed sqrt(2).
    return np.array([1.0, 0.0, 0.0, 1.5])


def test_kepler_hyperbola_backward_then_forward():
    pericenter = _hyperbola_pericenter()
    backward = propagate(_kepler, pericenter, 0.0, -0.5 * math.pi)
    start = backward.trajectory.final_state
    assert math.hypot(start[0], start[1]) > 1.5

    forward = propagate(_kepler, start, -0.5 * math.pi, 0.0)
    assert forward.trajectory.final_state == pytest.approx(pericenter, abs=1e-9)


def test_kepler_hyperbola_pericenter_event():
    pericenter = _hyperbola_pericenter()
    start = propagate(_kepler, pericenter, 0.0, -2.0).trajectory.final_state
    events = [
        EventSpec(
            lambda t, y: y[0] * y[2] + y[1] * y[3],
            EventDirection.RISING,
            True,
            "pericenter",
        )
    ]
    propagation = propagate(_kepler, start, -2.0, 2.0, events)

    assert propagation.reason is TerminationReason.TERMINAL_EVENT
    (event,) = propagation.events
    assert event.label == "pericenter"
    assert event.t == pytest.approx(0.0, abs=1e-9)
    assert event.state == pytest.approx(pericenter, abs=1e-9)


def test_steps_respect_h_max():
    settings = IntegratorSettings(h_max=0.05)
    trajectory = propagate(
        _oscillator, np.array([1.0, 0.0]), 0.0, 1.0, settings=settings
    ).trajectory
    assert np.max(np.diff(trajectory.times)) <= 0.05 + 1e-15


def test_fixed_step_convergence_order():
    """Halving a fixed step divides the global error by about 2^8."""

    def error(h):
        settings = IntegratorSettings(h_init=h, h_max=h, fixed_step=True)
        final = propagate(
            _oscillator, np.array([1.0, 0.0]), 0.0, 4.0, settings=settings
        ).trajectory.final_state
        return np.max(np.abs(final - _oscillator_state(4.0)))

    ratio = error(0.5) / error(0.25)
    assert ratio > 100.0


def test_dense_output():
    trajectory = propagate(
        _oscillator, np.array([1.0, 0.0]), 0.0, 3.0
    ).trajectory
    for t in (0.0, 0.123, 1.5, 2.999, 3.0):
        assert trajectory.dense(t) == pytest.approx(_oscillator_state(t), abs=1e-7)
    with pytest.raises(ValueError):
        trajectory.dense(3.5)

    samples = trajectory.sample(7)
    assert samples.shape == (7, 3)
    assert samples[0, 0] == 0.0
    assert samples[-1, 0] == 3.0


def test_dense_output_backward():
    trajectory = propagate(
        _oscillator, np.array([1.0, 0.0]), 0.0, -2.0
    ).trajectory
    assert trajectory.dense(-1.2) == pytest.approx(_oscillator_state(-1.2), abs=1e-7)


def test_trajectory_single_point():
    trajectory = Trajectory([0.0], [np.array([1.0])], [np.array([0.0])])
    assert len(trajectory) == 1
    assert trajectory.dense(0.0) == pytest.approx([1.0])
    with pytest.raises(ValueError):
        trajectory.sample(1)


def test_events_are_localized_in_order():
    events = [
        EventSpec(lambda t, y: y[0], EventDirection.FALLING, label="down"),
        EventSpec(lambda t, y: y[0], EventDirection.RISING, label="up"),
        EventSpec(lambda t, y: y[1], EventDirection.ANY, label="turn"),
    ]
    propagation = propagate(_oscillator, np.array([1.0, 0.0]), 0.0, 5.0, events)

    # y[1] = -sin t is exactly 0 at the start: it does not count.
    labels = [e.label for e in propagation.events]
    assert labels == ["down", "turn", "up"]
    times = [e.t for e in propagation.events]
    assert times == pytest.approx([0.5 * math.pi, math.pi, 1.5 * math.pi], abs=1e-9)
    assert propagation.events[1].direction is EventDirection.RISING
    for event in propagation.events:
        value = next(s.function for s in events if s.label == event.label)(
            event.t, event.state
        )
        assert abs(value) <= 1e-9


def test_terminal_event_ends_the_trajectory():
    events = [
        EventSpec(lambda t, y: y[0], EventDirection.FALLING, True, "stop"),
        EventSpec(lambda t, y: y[0] - 0.5, EventDirection.FALLING, label="half"),
    ]
    propagation = propagate(_oscillator, np.array([1.0, 0.0]), 0.0, 10.0, events)

    assert propagation.reason is TerminationReason.TERMINAL_EVENT
    assert [e.label for e in propagation.events] == ["half", "stop"]
    trajectory = propagation.trajectory
    assert trajectory.final_time == pytest.approx(0.5 * math.pi, abs=1e-9)
    assert trajectory.final_state[0] == pytest.approx(0.0, abs=1e-10)
    assert trajectory.final_state[0] <= 0.0


def test_locate_event_cube_root():
    def evaluator(t):
        return np.array([t])

    t, state = locate_event(
        (0.0, 2.0), lambda t, y: y[0] ** 3 - 2.0, evaluator, tol=1e-14
    )
    assert t == pytest.approx(2.0 ** (1 / 3), abs=1e-12)
    assert state[0] ** 3 - 2.0 >= 0.0


def test_locate_event_lands_after_the_crossing():
    # Loose tolerance: the Brent root may sit on either side of 0.3.
    for bracket in [(0.0, 1.0), (1.0, 0.0)]:
        t, state = locate_event(
            bracket, lambda t, y: y[0] - 0.3, lambda t: np.array([t]), tol=1e-3
        )
        assert t == pytest.approx(0.3, abs=1e-2)
        if bracket[1] > bracket[0]:
            assert state[0] >= 0.3
        else:
            assert state[0] <= 0.3


def test_locate_event_decreasing_bracket():
    t, _ = locate_event(
        (1.0, 0.0), lambda t, y: y[0] - 0.25, lambda t: np.array([t]), tol=1e-13
    )
    assert t == pytest.approx(0.25, abs=1e-12)


def test_locate_event_without_sign_change():
    with pytest.raises(NoSignChangeError):
        locate_event((0.0, 1.0), lambda t, y: 1.0 + t, lambda t: np.array([t]), 1e-10)
    with pytest.raises(NoSignChangeError):
        locate_event(
            (0.0, 1.0), lambda t, y: math.nan, lambda t: np.array([t]), 1e-10
        )


@pytest.mark.parametrize(
    "direction, before, after, expected",
    [
        (EventDirection.RISING, -1.0, 0.0, True),
        (EventDirection.RISING, 0.0, 1.0, False),
        (EventDirection.FALLING, 1.0, 0.0, True),
        (EventDirection.FALLING, 1.0, 2.0, False),
        (EventDirection.ANY, 1.0, -1.0, True),
        (EventDirection.ANY, -1.0, 1.0, True),
        (EventDirection.ANY, 0.0, 0.0, False),
    ],
)
def test_event_direction(direction, before, after, expected):
    assert direction.triggers(before, after) is expected


def test_max_steps():
    settings = IntegratorSettings(max_steps=10)
    with pytest.raises(MaxStepsExceededError):
        propagate(_oscillator, np.array([1.0, 0.0]), 0.0, 100.0, settings=settings)


def test_step_underflow():
    settings = IntegratorSettings(h_init=1e-3, h_min=1e-6)
    with pytest.raises(StepUnderflowError):
        propagate(
            lambda t, y: np.array([math.nan if t > 0.0 else 1.0]),
            np.array([0.0]),
            0.0,
            1.0,
            settings=settings,
        )


def test_empty_span():
    with pytest.raises(ValueError):
        propagate(_oscillator, np.array([1.0, 0.0]), 1.0, 1.0)


@pytest.mark.parametrize(
    "overrides",
    [
        {"rel_tol": 0.0},
        {"h_min": 1.0},
        {"max_steps": 0},
        {"event_time_tol": -1e-9},
    ],
)
def test_invalid_settings(overrides):
    with pytest.raises(ConfigError):
        IntegratorSettings(**overrides)
