"""PU / PUEA verdict from a position estimate, with suspect-SU matching."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import UsageError
from .scenario import Point, Scenario, distance

DEFAULT_PU_THRESHOLD = 1000.0


class Verdict(str, Enum):
    PU = "PU"
    PUEA = "PUEA"


@dataclass(frozen=True)
class DetectionDecision:
    verdict: Verdict
    estimate: Point
    distance_to_pu: float
    suspect_su: int | None = None
    distance_to_suspect: float | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "x": self.estimate.x,
            "y": self.estimate.y,
            "distance_to_pu": self.distance_to_pu,
            "suspect_su": self.suspect_su,
            "distance_to_suspect": self.distance_to_suspect,
        }

    def to_json(self, **extra) -> str:
        return json.dumps({**extra, **self.to_dict()}, sort_keys=True)


def classify(
    estimate,
    scenario: Scenario,
    pu_threshold: float = DEFAULT_PU_THRESHOLD,
    su_threshold: float | None = None,
) -> DetectionDecision:
    """PU when the estimate lies within ``pu_threshold`` of the tower (inclusive).

    Otherwise PUEA; the nearest SU is named as suspect when it lies within
    ``su_threshold`` (defaults to ``pu_threshold``), lowest index on ties.
    The PU test is applied first.
    """
    if su_threshold is None:
        su_threshold = pu_threshold
    if not (pu_threshold > 0 and su_threshold > 0):
        raise UsageError("detection thresholds must be positive")
    est = Point(float(estimate[0]), float(estimate[1]))
    d_pu = distance(est, scenario.pu)
    if d_pu <= pu_threshold:
        return DetectionDecision(Verdict.PU, est, d_pu)

    if scenario.n_sus:
        d = np.hypot(*(scenario.anchors - np.asarray(est)).T)
        nearest = int(np.argmin(d))  # argmin keeps the first minimum
        if d[nearest] <= su_threshold:
            return DetectionDecision(Verdict.PUEA, est, d_pu, nearest, float(d[nearest]))
    return DetectionDecision(Verdict.PUEA, est, d_pu)
