from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Dict, List, NamedTuple

import numpy as np


class TrajectoryStatus(Enum):
    """Outcome of a maneuver, by decreasing precedence: a trajectory matching
    several flags carries the first one."""

    STEP_FAILURE = "StepFailure"
    COLLISION = "Collision"
    BELOW_BAND = "BelowBand"
    CAPTURED = "Captured"
    OK = "Ok"

    @property
    def is_ok(self) -> bool:
        return self is TrajectoryStatus.OK


class EventTime(NamedTuple):
    label: str
    t: float


@dataclass(frozen=True)
class TrajectoryResult:
    """Metrics of one maneuver.

    Metrics are None when the trajectory does not define them (a collision has
    no outbound leg, a failed integration has nothing). BelowBand and Captured
    trajectories have their metrics filled; a BelowBand trajectory that sank deep
    into the atmosphere is measured up to where it was stopped.

    Attributes:
        status: Outcome flag.
        voe_km2_s2: Heliocentric energy change across the encounter.
        turn_angle_deg: Angle between the planet-relative inertial velocities at
                        SOI entry and exit, in [0, 180].
        tof_band_s: Time spent inside the analysis band (10^-3 <= Kn <= 10^-2).
        actual_pericenter_altitude_km: Altitude of the refined closest approach.
        actual_approach_angle_deg: Angular position of that point, in [0, 360).
        pericenter_altitude_deviation_km: Actual minus projected altitude.
        approach_angle_deviation_deg: Actual minus projected angle, in (-180, 180].
        approach_angle_deviation_pct: The same deviation in percent of the
                                      projected angle.
        delta_v_km_s: Integral of the thrust acceleration, PAGAM only.
        min_altitude_km: Lowest altitude reached on the forward leg.
        initial_energy: Heliocentric energy at the start of the encounter, canonical.
        final_energy: Heliocentric energy at the end condition, canonical.
        post_passage_energy: Planet-relative two-body energy after the
                             atmospheric passage, canonical; <= 0 means captured.
        events: Labels and times of the forward-leg events.
        samples: Forward-leg step points as rows (t, x, y, vx, vy), if recorded.
        message: Reason of a StepFailure, or of a BelowBand stop.
    """

    status: TrajectoryStatus
    voe_km2_s2: float | None = None
    turn_angle_deg: float | None = None
    tof_band_s: float | None = None
    actual_pericenter_altitude_km: float | None = None
    actual_approach_angle_deg: float | None = None
    pericenter_altitude_deviation_km: float | None = None
    approach_angle_deviation_deg: float | None = None
    approach_angle_deviation_pct: float | None = None
    delta_v_km_s: float | None = None
    min_altitude_km: float | None = None
    initial_energy: float | None = None
    final_energy: float | None = None
    post_passage_energy: float | None = None
    events: List[EventTime] = field(default_factory=list, compare=False)
    samples: np.ndarray | None = field(default=None, compare=False, repr=False)
    message: str = ""

    def metric_names(self) -> List[str]:
        return [
            f.name
            for f in fields(self)
            if f.name not in ("status", "events", "samples", "message")
        ]


def result_to_dict(result: TrajectoryResult) -> Dict[str, Any]:
    """JSON-ready mapping of a result, with the field names of TrajectoryResult."""
    document: Dict[str, Any] = {"status": result.status.value}
    for name in result.metric_names():
        document[name] = getattr(result, name)
    document["events"] = [{"label": e.label, "t": e.t} for e in result.events]
    if result.samples is not None:
        document["samples"] = result.samples.tolist()
    if result.message:
        document["message"] = result.message
    return document
