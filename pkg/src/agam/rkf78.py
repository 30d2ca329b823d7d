"""Runge-Kutta-Fehlberg 7(8) embedded pair.

Thirteen stages, a 7th order solution and an 8th order one sharing the same
stages. The difference of the two gives the local error estimate; the 8th order
solution is the one propagated (local extrapolation).

Reference: E. Fehlberg (1968), "Classical fifth-, sixth-, seventh-, and
eighth-order Runge-Kutta formulas with stepsize control", NASA TR R-287.
"""

from typing import Callable, NamedTuple

import numpy as np

from agam.rotating_state import StateVector

type Derivative = Callable[[float, StateVector], StateVector]

STAGES = 13
ORDER = 8

# Intermediate evaluation times.
C = np.array(
    [0, 2 / 27, 1 / 9, 1 / 6, 5 / 12, 1 / 2, 5 / 6, 1 / 6, 2 / 3, 1 / 3, 1, 0, 1]
)

# Butcher table, row i holds the weights of stages 0..i-1.
_BT = {
    1: [2 / 27],
    2: [1 / 36, 1 / 12],
    3: [1 / 24, 0, 1 / 8],
    4: [5 / 12, 0, -25 / 16, 25 / 16],
    5: [1 / 20, 0, 0, 1 / 4, 1 / 5],
    6: [-25 / 108, 0, 0, 125 / 108, -65 / 27, 125 / 54],
    7: [31 / 300, 0, 0, 0, 61 / 225, -2 / 9, 13 / 900],
    8: [2, 0, 0, -53 / 6, 704 / 45, -107 / 9, 67 / 90, 3],
    9: [-91 / 108, 0, 0, 23 / 108, -976 / 135, 311 / 54, -19 / 60, 17 / 6, -1 / 12],
    10: [
        2383 / 4100, 0, 0, -341 / 164, 4496 / 1025, -301 / 82, 2133 / 4100,
        45 / 82, 45 / 164, 18 / 41,
    ],
    11: [3 / 205, 0, 0, 0, 0, -6 / 41, -3 / 205, -3 / 41, 3 / 41, 6 / 41, 0],
    12: [
        -1777 / 4100, 0, 0, -341 / 164, 4496 / 1025, -289 / 82, 2193 / 4100,
        51 / 82, 33 / 164, 12 / 41, 0, 1,
    ],
}

A = np.zeros((STAGES, STAGES))
for _row, _weights in _BT.items():
    A[_row, : len(_weights)] = _weights

B7 = np.array(
    [41 / 840, 0, 0, 0, 0, 34 / 105, 9 / 35, 9 / 35, 9 / 280, 9 / 280, 41 / 840, 0, 0]
)
B8 = np.array(
    [0, 0, 0, 0, 0, 34 / 105, 9 / 35, 9 / 35, 9 / 280, 9 / 280, 0, 41 / 840, 41 / 840]
)


class StepResult(NamedTuple):
    """One RKF7(8) step.

    Values:
        low: 7th order solution.
        high: 8th order solution.
        error: Scaled error norm, the step passes the error test when <= 1.
        derivative: Derivative at the start of the step (first stage), reused by
                    the dense output.
    """

    low: StateVector
    high: StateVector
    error: float
    derivative: StateVector


def rkf78_step(
    derivative: Derivative,
    state: StateVector,
    t: float,
    h: float,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-12,
    first_stage: StateVector | None = None,
) -> StepResult:
    """Take one embedded step of size h (negative h steps backward).

    Args:
        derivative: f(t, y).
        state: y(t).
        t: Start time of the step.
        h: Step size, non-zero.
        rel_tol: Relative tolerance of the error scaling.
        abs_tol: Absolute tolerance of the error scaling.
        first_stage: f(t, y) if already known.

    Returns:
        The two solutions and the max-norm of their difference, each component
        scaled by abs_tol + rel_tol * max(|y|, |y_new|).
    """
    if h == 0.0:
        raise ValueError("Step size must be non-zero.")

    k = np.empty((STAGES, state.shape[0]))
    k[0] = derivative(t, state) if first_stage is None else first_stage
    for i in range(1, STAGES):
        stage_state = state + h * (A[i, :i] @ k[:i])
        k[i] = derivative(t + C[i] * h, stage_state)

    low = state + h * (B7 @ k)
    high = state + h * (B8 @ k)

    scale = abs_tol + rel_tol * np.maximum(np.abs(state), np.abs(high))
    error = float(np.max(np.abs(high - low) / scale))
    return StepResult(low, high, error, k[0])
