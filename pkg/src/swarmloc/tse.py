"""Taylor-series estimation: Gauss-Newton on the range-difference residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, DivergenceError, DomainError, UsageError
from .objective import LocalizationObjective
from .scenario import Point

# relative condition-number limit of the normal matrix before the step is refused
MAX_CONDITION = 1e12
# iterates farther than this from the origin (m) are treated as divergent
ESCAPE_RADIUS = 1e9


@dataclass(frozen=True)
class TseConfig:
    initial_guess: Point | None = None  # None -> centroid of the anchors
    max_iterations: int = 20
    step_tolerance: float = 0.01
    weighting: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise UsageError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not self.step_tolerance > 0:
            raise UsageError(f"step_tolerance must be positive, got {self.step_tolerance}")


@dataclass(frozen=True)
class TseResult:
    estimate: Point
    converged: bool
    iterations_used: int


def jacobian(obj: LocalizationObjective, p) -> np.ndarray:
    """Gradient of each predicted range difference ``|p - a_i| - |p - ref|``.

    Row ``i`` is the unit vector from SU ``i`` to ``p`` minus the unit vector
    from the reference to ``p``.  The residual is ``d_hat - model``, so the
    residual Jacobian is the negative of this matrix.
    """
    p = np.asarray(p, dtype=float).reshape(2)
    to_su = p - obj.anchors
    d_i = np.hypot(to_su[:, 0], to_su[:, 1])
    to_ref = p - np.asarray(obj.ref)
    d_0 = float(np.hypot(*to_ref))
    hit = np.flatnonzero(d_i == 0)
    if hit.size:
        raise DomainError(f"point coincides with anchor {int(hit[0])}; gradient undefined")
    if d_0 == 0:
        raise DomainError("point coincides with the reference; gradient undefined")
    return to_su / d_i[:, None] - to_ref / d_0


def tse_solve(obj: LocalizationObjective, cfg: TseConfig = TseConfig()) -> TseResult:
    """Iterate ``p <- p + (J^T W J)^-1 J^T W r`` without damping or line search.

    Raises :class:`DegenerateGeometryError` when the normal matrix is singular
    and :class:`DivergenceError` when an iterate stops being finite or runs
    beyond ``ESCAPE_RADIUS``.
    """
    if obj.n < 2:
        raise UsageError("Taylor-series estimation needs at least two range differences")
    if cfg.initial_guess is None:
        p = obj.anchors.mean(axis=0)
    else:
        p = np.asarray(cfg.initial_guess, dtype=float).reshape(2).copy()

    if cfg.weighting:
        var = obj.measurements.variances_m2
        if np.any(var <= 0):
            raise UsageError("weighted TSE needs strictly positive measurement variances")
        w = 1.0 / var
    else:
        w = np.ones(obj.n)

    for it in range(1, cfg.max_iterations + 1):
        J = jacobian(obj, p)
        r = obj.residuals(p)
        JW = J.T * w
        normal = JW @ J
        if not np.all(np.isfinite(normal)) or np.linalg.cond(normal) > MAX_CONDITION:
            raise DegenerateGeometryError(f"singular normal matrix at iteration {it} (p={p.tolist()})")
        delta = np.linalg.solve(normal, JW @ r)
        p = p + delta
        if not np.all(np.isfinite(p)) or np.hypot(*p) > ESCAPE_RADIUS:
            raise DivergenceError(f"iterate escaped at iteration {it} (p={p.tolist()})")
        if np.hypot(*delta) < cfg.step_tolerance:
            return TseResult(Point(float(p[0]), float(p[1])), True, it)
    return TseResult(Point(float(p[0]), float(p[1])), False, cfg.max_iterations)
