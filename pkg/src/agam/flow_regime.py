from enum import Enum, auto
from typing import NamedTuple

from agam.errors import DomainError

FREE_MOLECULAR_MIN_KN = 10.0
CONTINUUM_MAX_KN = 0.01

# High-altitude continuum window where the maneuvers are analysed.
ANALYSIS_BAND_MIN_KN = 1e-3
ANALYSIS_BAND_MAX_KN = 1e-2


class FlowRegime(Enum):
    FREE_MOLECULAR = auto()
    TRANSITION = auto()
    CONTINUUM = auto()


class FlowClassification(NamedTuple):
    regime: FlowRegime
    in_analysis_band: bool


def classify_regime(kn: float) -> FlowClassification:
    """Classify the flow by its Knudsen number.

    Free molecular for Kn >= 10, continuum for Kn <= 0.01, transition in between.

    Raises:
        DomainError: If kn is not strictly positive.
    """
    if not kn > 0.0:
        raise DomainError(f"Knudsen number must be positive, got {kn}.")

    if kn >= FREE_MOLECULAR_MIN_KN:
        regime = FlowRegime.FREE_MOLECULAR
    elif kn <= CONTINUUM_MAX_KN:
        regime = FlowRegime.CONTINUUM
    else:
        regime = FlowRegime.TRANSITION

    in_band = ANALYSIS_BAND_MIN_KN <= kn <= ANALYSIS_BAND_MAX_KN
    return FlowClassification(regime, in_band)
