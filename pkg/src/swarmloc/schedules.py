"""Inertia-weight and acceleration-coefficient schedules and the variant registry.

Inertia labels W0..W12 and acceleration labels A1..A3 combine into 39 named
variants: the prefix selects the acceleration schedule (``PSO`` -> A1,
``MPSO`` -> A2, ``IPSO`` -> A3) and the numeric suffix ``k`` selects ``Wk``
(no suffix means W0).

Time ``t`` is 0-based and runs up to the iteration budget ``T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError

W_MAX = 0.9
W_MIN = 0.4

INERTIA_LABELS = tuple(f"W{k}" for k in range(13))
ACCEL_LABELS = ("A1", "A2", "A3")
ACCEL_PREFIX = {"A1": "PSO", "A2": "MPSO", "A3": "IPSO"}

DEFAULT_PARAMS = {
    "W0": {"w": 0.9},
    "W1": {"w_max": W_MAX, "w_min": W_MIN},
    "W2": {},
    "W3": {"w_max": W_MAX, "w_min": W_MIN, "decay": 0.95},
    "W4": {"w_max": W_MAX, "w_min": W_MIN, "alpha": 1.0},
    "W5": {"w_max": W_MAX, "w_min": W_MIN},
    "W6": {"w_max": W_MAX, "w_min": W_MIN},
    "W7": {"w_max": W_MAX, "w_min": W_MIN, "c0": 0.3},
    "W8": {"w_max": W_MAX, "w_min": W_MIN, "n": 0.7},
    "W9": {"s": -0.7},
    "W10": {"w_initial": 0.1, "u": 1.00002},
    "W11": {"w_initial": 0.4, "a": 2.0, "b": 1.5},
    "W12": {"c0": 0.3},
}

CHAOTIC = frozenset({"W7", "W12"})
RANDOM = frozenset({"W2", "W12"})


@dataclass(frozen=True)
class InertiaSchedule:
    label: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.label not in DEFAULT_PARAMS:
            raise UsageError(f"unknown inertia schedule {self.label!r}")
        merged = {**DEFAULT_PARAMS[self.label], **self.params}
        object.__setattr__(self, "params", merged)
        if "w_max" in merged and not merged["w_max"] > merged["w_min"] > 0:
            raise UsageError(f"{self.label}: need w_max > w_min > 0")

    def __hash__(self):
        return hash((self.label, tuple(sorted(self.params.items()))))


@dataclass
class ChaosState:
    """Logistic-map state ``c <- 4 c (1 - c)`` carried across one run."""

    c: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.c < 1.0:
            raise UsageError(f"chaotic state must lie in (0, 1), got {self.c!r}")

    def advance(self) -> float:
        self.c = 4.0 * self.c * (1.0 - self.c)
        return self.c


def _as_schedule(s) -> InertiaSchedule:
    return s if isinstance(s, InertiaSchedule) else InertiaSchedule(str(s))


def inertia_weight(schedule, t, T, chaos: ChaosState | None = None, rng=None) -> float:
    """Inertia weight ``w(t)`` for the given schedule (label or :class:`InertiaSchedule`).

    W7 and W12 advance ``chaos`` once per call and W2/W12 draw one uniform
    sample from ``rng``; the other schedules ignore both.
    """
    s = _as_schedule(schedule)
    if T < 1 or not 0 <= t <= T:
        raise UsageError(f"need 0 <= t <= T and T >= 1, got t={t}, T={T}")
    p = s.params
    tau = t / T
    label = s.label

    if label in RANDOM and rng is None:
        raise UsageError(f"{label} needs a random generator")
    if label in CHAOTIC and chaos is None:
        raise UsageError(f"{label} needs a ChaosState")

    if label == "W0":
        return p["w"]
    if label == "W1":
        return p["w_max"] - (p["w_max"] - p["w_min"]) * tau
    if label == "W2":
        return 0.5 + rng.random() / 2.0
    if label == "W3":
        # exponent clipped at 0 so the first iteration never exceeds w_max
        return p["w_min"] + (p["w_max"] - p["w_min"]) * p["decay"] ** max(t - 1, 0)
    if label == "W4":
        return p["w_max"] + (p["w_min"] - p["w_max"]) * math.log10(p["alpha"] + 10.0 * tau)
    if label == "W5":
        mid = (p["w_min"] + p["w_max"]) / 2.0
        half = (p["w_min"] - p["w_max"]) / 2.0
        return mid + half * math.cos(2.0 * math.pi * tau)
    if label == "W6":
        return p["w_min"] + (p["w_max"] - p["w_min"]) * math.exp(-10.0 * tau)
    if label == "W7":
        c = chaos.advance()
        return (p["w_max"] - p["w_min"]) * (1.0 - tau) + p["w_min"] * c
    if label == "W8":
        return (1.0 - tau) ** p["n"] * (p["w_max"] - p["w_min"]) + p["w_min"]
    if label == "W9":
        return (1.0 - tau) / (1.0 - p["s"] * tau)
    if label == "W10":
        return p["w_initial"] * p["u"] ** t
    if label == "W11":
        return p["w_initial"] * math.exp(-p["a"] * tau ** p["b"])
    # W12
    c = chaos.advance()
    return rng.random() / 2.0 + c / 2.0


def accel_coeffs(label: str, t, T) -> tuple[float, float]:
    """Cognitive and social coefficients ``(c1, c2)`` at iteration ``t``."""
    if T < 1 or not 0 <= t <= T:
        raise UsageError(f"need 0 <= t <= T and T >= 1, got t={t}, T={T}")
    tau = t / T
    if label == "A1":
        return 2.0, 2.0
    if label == "A2":
        return -2.05 * tau + 2.55, tau + 1.25
    if label == "A3":
        return 2.5 + 2.0 * tau**2 - 4.0 * tau, 0.5 - 2.0 * tau**2 + 4.0 * tau
    raise UsageError(f"unknown acceleration schedule {label!r}")


@dataclass(frozen=True)
class VariantSpec:
    name: str
    inertia: str
    accel: str

    def inertia_schedule(self) -> InertiaSchedule:
        return InertiaSchedule(self.inertia)


def variant_name(inertia: str, accel: str) -> str:
    k = int(inertia[1:])
    return ACCEL_PREFIX[accel] + ("" if k == 0 else str(k))


def variant_table() -> list[VariantSpec]:
    """All 39 variants, grouped by acceleration schedule then inertia label."""
    return [
        VariantSpec(variant_name(w, a), w, a)
        for a in ACCEL_LABELS
        for w in INERTIA_LABELS
    ]


_BY_NAME = {v.name: v for v in variant_table()}


def get_variant(name) -> VariantSpec:
    if isinstance(name, VariantSpec):
        return name
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UsageError(f"unknown PSO variant {name!r}; see variant_table()") from None


def resolve_variants(names) -> list[VariantSpec]:
    """Map ``"all"`` or an iterable of names to specs, rejecting unknown names."""
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    if list(names) == ["all"]:
        return variant_table()
    return [get_variant(n) for n in names]


def weight_sequence(schedule, T, rng=None, chaos: ChaosState | None = None) -> np.ndarray:
    """``w(0) .. w(T-1)`` as one run would see them (convenience for plots)."""
    s = _as_schedule(schedule)
    if chaos is None and s.label in CHAOTIC:
        chaos = ChaosState(s.params["c0"])
    return np.array([inertia_weight(s, t, T, chaos, rng) for t in range(T)])
