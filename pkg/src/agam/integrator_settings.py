import math
from dataclasses import asdict, dataclass
from typing import Any, Dict

from agam.errors import ConfigError


@dataclass(frozen=True)
class IntegratorSettings:
    """Error control and step bounds of the RKF7(8) propagator.

    Times are in TU. With fixed_step the propagator takes constant steps of h_init
    and skips the error test.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    h_init: float = 1e-4
    h_min: float = 1e-14
    h_max: float = 1e-2
    max_steps: int = 5_000_000
    event_time_tol: float = 1e-10
    fixed_step: bool = False

    def __post_init__(self):
        positive = ("rel_tol", "abs_tol", "h_init", "h_min", "h_max", "event_time_tol")
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be strictly positive: {value}.", name)
        if not self.h_min <= self.h_init <= self.h_max:
            raise ConfigError(
                f"Step bounds must satisfy h_min <= h_init <= h_max, got "
                f"{self.h_min}, {self.h_init}, {self.h_max}.",
                "h_init",
            )
        if self.max_steps <= 0:
            raise ConfigError(
                f"max_steps must be positive: {self.max_steps}.", "max_steps"
            )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
