import math
from dataclasses import dataclass
from typing import Self

import numpy as np

# Planar state vectors are ordered (x, y, vx, vy), optionally followed by
# quadrature components (the accumulated delta-V of a powered maneuver).
type StateVector = np.ndarray


@dataclass(frozen=True)
class RotatingState:
    """Planar state in the rotating barycentric frame, in canonical units.

    The Sun sits at (-mu, 0), the planet at (1 - mu, 0), and the frame turns
    counter-clockwise at unit angular rate.

    Attributes:
        x: Position along the Sun->planet line, DU.
        y: Position orthogonal to it, DU.
        vx: Rotating-frame velocity, VU.
        vy: Rotating-frame velocity, VU.
        t: Canonical time, TU. t = 0 at the projected pericenter.
    """

    x: float
    y: float
    vx: float
    vy: float
    t: float = 0.0

    def __post_init__(self):
        components = (self.x, self.y, self.vx, self.vy, self.t)
        if not all(math.isfinite(v) for v in components):
            raise ValueError(f"Non-finite state: {self}")

    @classmethod
    def from_array(cls, vector: StateVector, t: float = 0.0) -> Self:
        return cls(
            float(vector[0]), float(vector[1]), float(vector[2]), float(vector[3]), t
        )

    def as_array(self) -> StateVector:
        return np.array([self.x, self.y, self.vx, self.vy])

    def mirrored(self) -> Self:
        """Image under (x, y, vx, vy, t) -> (x, -y, -vx, vy, -t), the time-reversal
        symmetry of the unperturbed problem."""
        return type(self)(self.x, -self.y, -self.vx, self.vy, -self.t)
