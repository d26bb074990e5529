"""Accuracy statistics over Monte Carlo trials: MSE, bias and empirical CDF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .scenario import Point


@dataclass(frozen=True, eq=False)
class TrialErrorSet:
    estimates: np.ndarray
    truth: Point

    def __post_init__(self):
        est = np.array(self.estimates, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "estimates", est)
        object.__setattr__(self, "truth", Point(float(self.truth[0]), float(self.truth[1])))

    def __len__(self):
        return self.estimates.shape[0]

    def errors(self) -> np.ndarray:
        """Euclidean localization error of every trial."""
        d = self.estimates - np.asarray(self.truth)
        return np.hypot(d[:, 0], d[:, 1])

    def _require(self):
        if len(self) == 0:
            raise UsageError("statistic of an empty trial set")


def mean_position(s: TrialErrorSet) -> Point:
    s._require()
    m = s.estimates.mean(axis=0)
    return Point(float(m[0]), float(m[1]))


def mse(s: TrialErrorSet) -> float:
    """Mean squared distance from the truth, averaged per trial."""
    s._require()
    d = s.estimates - np.asarray(s.truth)
    return float(np.mean(d[:, 0] ** 2 + d[:, 1] ** 2))


def rms(s: TrialErrorSet) -> float:
    return float(np.sqrt(mse(s)))


def bias2(s: TrialErrorSet) -> float:
    """Squared distance of the mean estimate from the truth."""
    m = mean_position(s)
    return (m.x - s.truth.x) ** 2 + (m.y - s.truth.y) ** 2


def cdf_curve(errors) -> tuple[np.ndarray, np.ndarray]:
    """Empirical CDF sampled at the sorted errors: ``F(z) = #{e <= z} / n``.

    Infinite errors (failed estimates) are kept; they sort last.
    """
    e = np.sort(np.asarray(errors, dtype=float).reshape(-1))
    if e.size == 0:
        raise UsageError("CDF of an empty error list")
    if np.any(np.isnan(e)):
        raise UsageError("errors contain NaN")
    F = np.searchsorted(e, e, side="right") / e.size
    return e, F


def cdf_quantile(z: np.ndarray, F: np.ndarray, q: float = 0.5) -> float:
    """Smallest sampled error whose CDF reaches ``q``."""
    return float(z[np.argmax(F >= q)])


def median_error(errors) -> float:
    return cdf_quantile(*cdf_curve(errors), 0.5)
