"""Network geometry: base station, secondary users, PU tower and emitter."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, UsageError

PU_DISTANCE_RANGE = (30_000.0, 100_000.0)


class Point(NamedTuple):
    """A planar position in meters (x east, y north)."""

    x: float
    y: float


def distance(a, b) -> float:
    """Euclidean distance between two points."""
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class DeployConfig:
    n_sus: int = 100
    half_width: float = 15_000.0
    pu_distance: float = 60_000.0
    pu_bearing: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if int(self.n_sus) != self.n_sus or self.n_sus < 0:
            raise ConfigError("n_sus", f"must be a non-negative integer, got {self.n_sus!r}")
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise ConfigError("half_width", f"must be positive, got {self.half_width!r}")
        lo, hi = PU_DISTANCE_RANGE
        if not lo <= self.pu_distance <= hi:
            raise ConfigError("pu_distance", f"must lie in [{lo:g}, {hi:g}] m, got {self.pu_distance!r}")
        if not math.isfinite(self.pu_bearing):
            raise ConfigError("pu_bearing", "must be finite")


@dataclass(frozen=True)
class Scenario:
    """Immutable node layout. SU index ``i`` is the position in ``sus``."""

    bs: Point
    sus: tuple[Point, ...]
    pu: Point
    half_width: float
    emitter: Point | None = None

    @cached_property
    def anchors(self) -> np.ndarray:
        """SU positions as a read-only ``(N, 2)`` array."""
        arr = np.array(self.sus, dtype=float).reshape(-1, 2)
        arr.flags.writeable = False
        return arr

    @property
    def n_sus(self) -> int:
        return len(self.sus)

    def with_emitter(self, emitter) -> Scenario:
        return replace(self, emitter=Point(float(emitter[0]), float(emitter[1])))

    def require_emitter(self) -> Point:
        if self.emitter is None:
            raise UsageError("scenario has no emitter assigned; call with_emitter() first")
        return self.emitter


def deploy_network(cfg: DeployConfig) -> Scenario:
    """Drop ``cfg.n_sus`` SUs uniformly over the square around a BS at the origin."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    xy = rng.uniform(-cfg.half_width, cfg.half_width, size=(int(cfg.n_sus), 2))
    pu = Point(cfg.pu_distance * math.cos(cfg.pu_bearing), cfg.pu_distance * math.sin(cfg.pu_bearing))
    return Scenario(
        bs=Point(0.0, 0.0),
        sus=tuple(Point(float(x), float(y)) for x, y in xy),
        pu=pu,
        half_width=float(cfg.half_width),
    )


CSV_HEADER = ("role", "index", "x", "y")


def write_scenario_csv(scenario: Scenario, path) -> None:
    """One row per node: role (bs/su/pu/emitter), index, x, y.

    ``path`` may also be an open text stream.
    """
    if hasattr(path, "write"):
        _write_scenario_rows(scenario, path)
        return
    with open(path, "w", newline="") as fh:
        _write_scenario_rows(scenario, fh)


def _write_scenario_rows(scenario: Scenario, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerow(("bs", 0, repr(scenario.bs.x), repr(scenario.bs.y)))
    for i, p in enumerate(scenario.sus):
        w.writerow(("su", i, repr(p.x), repr(p.y)))
    w.writerow(("pu", 0, repr(scenario.pu.x), repr(scenario.pu.y)))
    if scenario.emitter is not None:
        w.writerow(("emitter", 0, repr(scenario.emitter.x), repr(scenario.emitter.y)))


def read_scenario_csv(path, half_width: float | None = None) -> Scenario:
    """Inverse of :func:`write_scenario_csv`.

    The square half-width is not stored; when omitted it is taken as the
    smallest value that still contains every SU.
    """
    bs = pu = emitter = None
    sus: dict[int, Point] = {}
    with open(Path(path), newline="") as fh:
        for row in csv.DictReader(fh):
            p = Point(float(row["x"]), float(row["y"]))
            role = row["role"]
            if role == "bs":
                bs = p
            elif role == "su":
                sus[int(row["index"])] = p
            elif role == "pu":
                pu = p
            elif role == "emitter":
                emitter = p
            else:
                raise UsageError(f"unknown node role {role!r} in {path}")
    if bs is None or pu is None:
        raise UsageError(f"{path}: scenario CSV needs one bs row and one pu row")
    if sorted(sus) != list(range(len(sus))):
        raise UsageError(f"{path}: SU indices must be 0..N-1")
    ordered = tuple(sus[i] for i in range(len(sus)))
    if half_width is None:
        half_width = max((max(abs(p.x - bs.x), abs(p.y - bs.y)) for p in ordered), default=1.0)
    return Scenario(bs=bs, sus=ordered, pu=pu, half_width=float(half_width), emitter=emitter)


def sus_inside(scenario: Scenario) -> bool:
    """True when every SU lies in the deployment square around the BS."""
    offset = np.abs(scenario.anchors - np.asarray(scenario.bs))
    return bool(np.all(offset <= scenario.half_width))
