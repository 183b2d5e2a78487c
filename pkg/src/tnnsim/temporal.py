"""Two-clock time base and the spike-time signal algebra.

Spike times are integer aclk tick offsets inside one gamma cycle. ``INF``
stands for "no spike" and compares greater than every finite time, so the
usual ``min``/``<=`` operations already give race-logic semantics.

Binary traces are ``uint8`` numpy arrays with one level per aclk tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

INF = math.inf

# An int tick in [0, gamma_period_ticks) or INF.
TemporalValue = Union[int, float]

DEFAULT_ACLK_HZ = 1.0e5
DEFAULT_GAMMA_TICKS = 64


@dataclass(frozen=True)
class ClockConfig:
    aclk_freq_hz: float = DEFAULT_ACLK_HZ
    gamma_period_ticks: int = DEFAULT_GAMMA_TICKS
    weight_bits: int = 3

    def __post_init__(self):
        if not self.aclk_freq_hz > 0:
            raise ValueError(f"aclk_freq_hz must be > 0, got {self.aclk_freq_hz}")
        if self.weight_bits < 1:
            raise ValueError(f"weight_bits must be >= 1, got {self.weight_bits}")
        if self.gamma_period_ticks < 2**self.weight_bits:
            raise ValueError(
                f"gamma_period_ticks ({self.gamma_period_ticks}) must hold a full "
                f"{2**self.weight_bits}-tick ramp"
            )

    @property
    def tick_seconds(self) -> float:
        return 1.0 / self.aclk_freq_hz

    @property
    def gamma_seconds(self) -> float:
        return self.gamma_period_ticks / self.aclk_freq_hz


def is_spike(v: TemporalValue) -> bool:
    return v != INF


def check_temporal(v: TemporalValue, gamma_period_ticks: int) -> TemporalValue:
    """Validate ``v`` and normalise finite values to ``int``."""
    if v == INF:
        return INF
    if isinstance(v, float):
        if not v.is_integer():
            raise ValueError(f"spike time must be an integer tick, got {v}")
        v = int(v)
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
        raise TypeError(f"spike time must be int or INF, got {v!r}")
    if not 0 <= v < gamma_period_ticks:
        raise ValueError(f"spike time {v} outside [0, {gamma_period_ticks})")
    return int(v)


def check_trace(trace, gamma_period_ticks: int | None = None) -> np.ndarray:
    arr = np.asarray(trace, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("trace must be one-dimensional")
    if np.any(arr > 1):
        raise ValueError("trace levels must be 0 or 1")
    if gamma_period_ticks is not None and arr.size != gamma_period_ticks:
        raise ValueError(f"trace length {arr.size} != gamma period {gamma_period_ticks}")
    return arr


def zeros_trace(gamma_period_ticks: int) -> np.ndarray:
    return np.zeros(gamma_period_ticks, dtype=np.uint8)


def first_edge(trace) -> TemporalValue:
    """Tick of the first rising edge; a trace that starts high counts as tick 0."""
    arr = check_trace(trace)
    hits = np.flatnonzero(arr)
    return int(hits[0]) if hits.size else INF


def temporal_to_edge_trace(v: TemporalValue, gamma_period_ticks: int) -> np.ndarray:
    v = check_temporal(v, gamma_period_ticks)
    out = zeros_trace(gamma_period_ticks)
    if v != INF:
        out[v:] = 1
    return out


def pulse_trace(start: TemporalValue, width: int, gamma_period_ticks: int) -> np.ndarray:
    """A pulse of ``width`` ticks beginning at ``start``, clipped at the cycle end."""
    out = zeros_trace(gamma_period_ticks)
    if start != INF and width > 0:
        start = check_temporal(start, gamma_period_ticks)
        out[start : start + width] = 1
    return out


def tmin(*values: TemporalValue) -> TemporalValue:
    """Earliest of the given times; INF when none spike."""
    return min(values, default=INF)
