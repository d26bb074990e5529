"""Range-difference synthesis with a bandwidth/SNR/Hata noise model.

Every SU ``i`` reports ``d_i - d_0``, the difference between its distance to
the emitter and the base station's distance to the emitter, corrupted by
zero-mean Gaussian noise.  The noise variance of SU ``i`` is the sum of the
TOA variance at the SU and at the base station, each taken as the tight
bound ``1 / (8 pi^2 B^2 SNR)`` and converted to meters^2 with ``c^2``.  The
SU's SNR is the base-station SNR minus the differential Hata path loss
between the emitter-SU and emitter-BS distances.
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, UsageError
from .scenario import Scenario, distance

SPEED_OF_LIGHT = 299_792_458.0
# distances below this are rejected in the path-loss ratio instead of clamped
GUARD_DISTANCE = 1.0


@dataclass(frozen=True)
class NoiseModel:
    bandwidth_hz: float = 6e6
    snr0_db: float = -10.0
    antenna_height_m: float = 1.5
    noise_enabled: bool = True

    def validate(self) -> None:
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0):
            raise ConfigError("bandwidth_hz", f"must be positive, got {self.bandwidth_hz!r}")
        if not (math.isfinite(self.antenna_height_m) and self.antenna_height_m > 0):
            raise ConfigError("antenna_height_m", f"must be positive, got {self.antenna_height_m!r}")
        if not math.isfinite(self.snr0_db):
            raise ConfigError("snr0_db", "must be finite")


@dataclass(frozen=True, eq=False)
class RangeDifferenceSet:
    """Measured range differences (m) and their noise variances (m^2), one per SU."""

    values: np.ndarray
    variances_m2: np.ndarray
    ref: str = "bs"

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        variances = np.array(self.variances_m2, dtype=float).reshape(-1)
        if values.shape != variances.shape:
            raise UsageError(
                f"values ({values.size}) and variances_m2 ({variances.size}) differ in length"
            )
        if np.any(variances < 0):
            raise UsageError("variances_m2 must be non-negative")
        values.flags.writeable = False
        variances.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "variances_m2", variances)

    def __len__(self):
        return self.values.size

    def digest(self) -> str:
        """SHA-256 over the raw float bytes; equal digests mean identical measurements."""
        h = hashlib.sha256()
        h.update(self.values.tobytes())
        h.update(self.variances_m2.tobytes())
        h.update(self.ref.encode())
        return h.hexdigest()

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("su_index", "value_m", "variance_m2"))
            for i, (v, s) in enumerate(zip(self.values, self.variances_m2)):
                w.writerow((i, repr(float(v)), repr(float(s))))

    @classmethod
    def from_csv(cls, path) -> RangeDifferenceSet:
        with open(path, newline="") as fh:
            rows = sorted(csv.DictReader(fh), key=lambda r: int(r["su_index"]))
        return cls(
            values=[float(r["value_m"]) for r in rows],
            variances_m2=[float(r["variance_m2"]) for r in rows],
        )


def true_range_difference(emitter, su, bs) -> float:
    return distance(emitter, su) - distance(emitter, bs)


def path_loss_delta_db(d_i, d_0, h_p):
    """Differential suburban Hata loss of distance ``d_i`` relative to ``d_0``.

    Accepts scalars or arrays.  Negative when ``d_i < d_0``.
    """
    d_i = np.asarray(d_i, dtype=float)
    d_0 = np.asarray(d_0, dtype=float)
    if np.any(d_i <= 0) or np.any(d_0 <= 0):
        raise DomainError("path loss needs strictly positive distances")
    if h_p <= 0:
        raise DomainError(f"antenna height must be positive, got {h_p!r}")
    out = (44.9 - 6.55 * math.log10(h_p)) * np.log10(d_i / d_0)
    return float(out) if out.ndim == 0 else out


def snr_at_su_db(snr0_db, delta_lp_db):
    return snr0_db - delta_lp_db


def toa_variance_s2(bandwidth_hz, snr_linear):
    """TOA variance in s^2 at the bound ``1 / (8 pi^2 B^2 SNR)``."""
    if bandwidth_hz <= 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    snr = np.asarray(snr_linear, dtype=float)
    if np.any(~(snr > 0)):
        raise DomainError("linear SNR must be positive")
    out = 1.0 / (8.0 * math.pi**2 * bandwidth_hz**2 * snr)
    return float(out) if out.ndim == 0 else out


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def range_variances(scenario: Scenario, noise: NoiseModel) -> np.ndarray:
    """Per-SU range-difference noise variance in m^2."""
    noise.validate()
    emitter = np.asarray(scenario.require_emitter(), dtype=float)
    anchors = scenario.anchors
    bs = np.asarray(scenario.bs, dtype=float)

    d_i = np.hypot(*(anchors - emitter).T)
    d_0 = math.hypot(*(emitter - bs))
    if d_0 < GUARD_DISTANCE:
        raise DomainError("emitter coincides with the base station; path-loss ratio undefined")
    close = np.flatnonzero(d_i < GUARD_DISTANCE)
    if close.size:
        raise DomainError(f"SU {int(close[0])} coincides with the emitter; path-loss ratio undefined")
    at_bs = np.flatnonzero(np.hypot(*(anchors - bs).T) < GUARD_DISTANCE)
    if at_bs.size:
        raise DomainError(f"SU {int(at_bs[0])} coincides with the base station")

    delta = np.atleast_1d(path_loss_delta_db(d_i, d_0, noise.antenna_height_m))
    snr_i = db_to_linear(snr_at_su_db(noise.snr0_db, delta))
    var_su = toa_variance_s2(noise.bandwidth_hz, snr_i)
    var_bs = toa_variance_s2(noise.bandwidth_hz, float(db_to_linear(noise.snr0_db)))
    return SPEED_OF_LIGHT**2 * (np.atleast_1d(var_su) + var_bs)


def synthesize(scenario: Scenario, noise: NoiseModel, rng: np.random.Generator) -> RangeDifferenceSet:
    """Noisy range differences for every SU of ``scenario``.

    With ``noise.noise_enabled`` false the values are exact, but the declared
    model variances are still reported so that weighted solvers keep working.
    """
    emitter = scenario.require_emitter()
    if scenario.n_sus < 1:
        raise UsageError("synthesize needs at least one SU")
    variances = range_variances(scenario, noise)

    anchors = scenario.anchors
    e = np.asarray(emitter, dtype=float)
    truth = np.hypot(*(anchors - e).T) - math.hypot(*(e - np.asarray(scenario.bs)))
    if noise.noise_enabled:
        values = truth + rng.standard_normal(truth.size) * np.sqrt(variances)
    else:
        values = truth
    return RangeDifferenceSet(values=values, variances_m2=variances)
