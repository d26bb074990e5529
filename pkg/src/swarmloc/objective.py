"""Nonlinear least-squares fitness for TDOA localization."""

from __future__ import annotations

import numpy as np

from .errors import UsageError
from .measurement import RangeDifferenceSet
from .scenario import Point, Scenario


class LocalizationObjective:
    """Sum of squared range-difference residuals at a candidate emitter position.

    The residual of SU ``i`` at ``p`` is ``d_hat_i - (|p - a_i| - |p - ref|)``.
    With ``weighted=True`` each squared residual is divided by the SU's noise
    variance; the default is the plain unweighted sum.

    Calling the objective with a ``(2,)`` point returns a float, with a
    ``(K, 2)`` array of candidates a length-``K`` array.
    """

    def __init__(self, anchors, ref, measurements: RangeDifferenceSet, weighted: bool = False):
        anchors = np.array(anchors, dtype=float).reshape(-1, 2)
        if anchors.shape[0] < 1:
            raise UsageError("objective needs at least one anchor")
        if anchors.shape[0] != len(measurements):
            raise UsageError(
                f"{anchors.shape[0]} anchors but {len(measurements)} measurements"
            )
        anchors.flags.writeable = False
        self.anchors = anchors
        self.ref = Point(float(ref[0]), float(ref[1]))
        self.measurements = measurements
        self.weighted = weighted
        self._ref = np.asarray(self.ref)
        self._ax = np.ascontiguousarray(anchors[:, 0])
        self._ay = np.ascontiguousarray(anchors[:, 1])
        self._d_hat = measurements.values
        if weighted:
            var = measurements.variances_m2
            if np.any(var <= 0):
                raise UsageError("weighted objective needs strictly positive variances")
            self._weights = 1.0 / var
        else:
            self._weights = None

    @classmethod
    def from_scenario(cls, scenario: Scenario, measurements: RangeDifferenceSet, weighted=False):
        return cls(scenario.anchors, scenario.bs, measurements, weighted=weighted)

    @property
    def n(self) -> int:
        return self.anchors.shape[0]

    def model(self, p) -> np.ndarray:
        """Predicted range differences ``|p - a_i| - |p - ref|`` for each anchor."""
        p = np.asarray(p, dtype=float)
        px = p[..., 0, None]
        py = p[..., 1, None]
        d_i = np.hypot(px - self._ax, py - self._ay)
        d_0 = np.hypot(px - self._ref[0], py - self._ref[1])
        return d_i - d_0

    def residuals(self, p) -> np.ndarray:
        return self._d_hat - self.model(p)

    def __call__(self, p):
        r = self.residuals(p)
        if self._weights is not None:
            out = np.sum(self._weights * r * r, axis=-1)
        else:
            out = np.einsum("...i,...i->...", r, r)
        return float(out) if np.ndim(out) == 0 else out


def fitness(obj: LocalizationObjective, candidate) -> float:
    return obj(np.asarray(candidate, dtype=float).reshape(2))
