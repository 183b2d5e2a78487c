"""Functional models of the nine TNN column macros.

Scalar functions model one macro instance tick by tick. The ``*_array``
variants apply the same truth tables elementwise over numpy arrays and are
what :mod:`tnnsim.column` uses on its fast path; the test-suite checks both
against each other exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Optional, Sequence

import numpy as np

from tnnsim.temporal import INF, TemporalValue, check_trace, zeros_trace


class ContractViolation(ValueError):
    """A macro was driven with inputs its hardware contract forbids."""


# ---------------------------------------------------------------------------
# synapse: syn_readout / syn_weight_update
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SynapseState:
    weight: int
    weight_bits: int = 3
    shadow_weight: int = 0
    readout_active: bool = False

    def __post_init__(self):
        if not 0 <= self.weight <= self.max_weight:
            raise ValueError(f"weight {self.weight} outside [0, {self.max_weight}]")

    @property
    def max_weight(self) -> int:
        return 2**self.weight_bits - 1


def start_readout(state: SynapseState) -> SynapseState:
    """Latch the weight and begin the decrement loop (input spike arrived)."""
    return replace(state, shadow_weight=state.weight, readout_active=True)


def syn_readout_step(state: SynapseState) -> tuple[int, SynapseState]:
    """One aclk tick of the readout loop.

    The weight register counts down modulo ``2**weight_bits``. The output is
    high while the counter is in ``(0, shadow]``, i.e. before it first hits
    zero; after the wrap the counter climbs back above ``shadow`` and the loop
    ends when it equals ``shadow`` again.
    """
    if not state.readout_active:
        return 0, state
    w = state.weight
    out = int(0 < w <= state.shadow_weight)
    w = (w - 1) % (state.max_weight + 1)
    return out, replace(state, weight=w, readout_active=w != state.shadow_weight)


def syn_readout(state: SynapseState) -> tuple[list[int], SynapseState]:
    """Run a full readout; returns the unary response bits and the final state."""
    state = start_readout(state)
    bits = []
    while state.readout_active:
        bit, state = syn_readout_step(state)
        bits.append(bit)
    return bits, state


def syn_weight_update(state: SynapseState, wt_inc: int, wt_dec: int) -> SynapseState:
    if wt_inc and wt_dec:
        raise ContractViolation("WT_INC and WT_DEC asserted together")
    w = state.weight
    if wt_inc:
        w = min(w + 1, state.max_weight)
    elif wt_dec:
        w = max(w - 1, 0)
    return replace(state, weight=w)


# ---------------------------------------------------------------------------
# WTA: less_equal
# ---------------------------------------------------------------------------


def less_equal(data_in: TemporalValue, inhibit: TemporalValue) -> TemporalValue:
    return data_in if data_in <= inhibit else INF


def less_equal_array(data_in: np.ndarray, inhibit: np.ndarray) -> np.ndarray:
    data_in = np.asarray(data_in, dtype=float)
    return np.where(data_in <= inhibit, data_in, np.inf)


# ---------------------------------------------------------------------------
# STDP: stdp_case_gen / incdec / stabilize_func
# ---------------------------------------------------------------------------


class StdpCase(IntEnum):
    CAUSAL = 0  # both spikes, input not later than output: potentiate
    ACAUSAL = 1  # both spikes, input after output: depress
    INPUT_ONLY = 2  # search: potentiate
    OUTPUT_ONLY = 3  # backoff: depress


INC_CASES = frozenset({StdpCase.CAUSAL, StdpCase.INPUT_ONLY})
DEC_CASES = frozenset({StdpCase.ACAUSAL, StdpCase.OUTPUT_ONLY})

# Array encoding of the NONE case.
NO_CASE = -1


def one_hot(case: Optional[StdpCase]) -> tuple[int, int, int, int]:
    bits = [0, 0, 0, 0]
    if case is not None:
        bits[case] = 1
    return tuple(bits)


def stdp_case_gen(ein: TemporalValue, eout: TemporalValue) -> Optional[StdpCase]:
    has_in = ein != INF
    has_out = eout != INF
    # GREATER is the negated presence of less_equal(ein, eout)
    greater = less_equal(ein, eout) == INF
    if has_in and has_out:
        return StdpCase.ACAUSAL if greater else StdpCase.CAUSAL
    if has_in:
        return StdpCase.INPUT_ONLY
    if has_out:
        return StdpCase.OUTPUT_ONLY
    return None


def stdp_case_gen_array(ein: np.ndarray, eout: np.ndarray) -> np.ndarray:
    ein, eout = np.broadcast_arrays(np.asarray(ein, float), np.asarray(eout, float))
    has_in = np.isfinite(ein)
    has_out = np.isfinite(eout)
    greater = ~np.isfinite(less_equal_array(ein, eout))
    case = np.full(ein.shape, NO_CASE, dtype=np.int8)
    case[has_in & has_out] = StdpCase.CAUSAL
    case[has_in & has_out & greater] = StdpCase.ACAUSAL
    case[has_in & ~has_out] = StdpCase.INPUT_ONLY
    case[~has_in & has_out] = StdpCase.OUTPUT_ONLY
    return case


@dataclass(frozen=True)
class Brv:
    value: int
    probability: float

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"BRV value must be 0 or 1, got {self.value}")
        if not 0.0 <= self.probability <= 1.0:
            raise ValueError(f"BRV probability must be in [0, 1], got {self.probability}")

    @classmethod
    def draw(cls, probability: float, rng: np.random.Generator) -> "Brv":
        return cls(int(rng.random() < probability), probability)


def _bit(x) -> int:
    return int(x.value if isinstance(x, Brv) else x)


def incdec(case: Optional[StdpCase], brv) -> tuple[int, int]:
    if case is None or not _bit(brv):
        return 0, 0
    if case in INC_CASES:
        return 1, 0
    return 0, 1


def incdec_array(case: np.ndarray, brv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    brv = np.asarray(brv, dtype=bool)
    inc = brv & ((case == StdpCase.CAUSAL) | (case == StdpCase.INPUT_ONLY))
    dec = brv & ((case == StdpCase.ACAUSAL) | (case == StdpCase.OUTPUT_ONLY))
    return inc, dec


def stabilize_func(weight: int, brv_lines: Sequence):
    """8:1 mux: the synapse's weight selects which BRV line gates its update."""
    if not 0 <= weight < len(brv_lines):
        raise ValueError(f"weight {weight} does not select one of {len(brv_lines)} lines")
    return brv_lines[weight]


def stabilize_func_array(weights: np.ndarray, lines: np.ndarray) -> np.ndarray:
    """``lines[..., w]`` picked per element; ``lines`` has a trailing line axis."""
    w = np.asarray(weights)[..., None]
    return np.take_along_axis(lines, w.astype(np.intp), axis=-1)[..., 0]


# ---------------------------------------------------------------------------
# utility cells: spike_gen / pulse2edge / edge2pulse
# ---------------------------------------------------------------------------


def spike_gen_trace(trace, weight_bits: int = 3) -> np.ndarray:
    """Counter model: each rising input edge starts a ``2**weight_bits``-tick pulse.

    Rising edges that arrive while the counter runs are ignored.
    """
    arr = check_trace(trace)
    out = zeros_trace(arr.size)
    width = 2**weight_bits
    count = 0
    prev = 0
    for t, level in enumerate(arr):
        if count == 0 and level and not prev:
            count = width
        if count:
            out[t] = 1
            count -= 1
        prev = level
    return out


def spike_gen(input_pulse_width: int, weight_bits: int = 3, length: Optional[int] = None) -> np.ndarray:
    """Feed a pulse of ``input_pulse_width`` ticks starting at tick 0 through spike_gen."""
    if input_pulse_width < 0:
        raise ValueError("input_pulse_width must be >= 0")
    if length is None:
        length = max(input_pulse_width, 2**weight_bits) + 2**weight_bits
    inp = zeros_trace(length)
    inp[:input_pulse_width] = 1
    return spike_gen_trace(inp, weight_bits)


def pulse2edge(trace) -> np.ndarray:
    arr = check_trace(trace)
    return np.maximum.accumulate(arr) if arr.size else arr


def edge2pulse(trace) -> np.ndarray:
    """One-tick pulse at every 0->1 transition (tick 0 counts if high)."""
    arr = check_trace(trace)
    prev = np.concatenate(([0], arr[:-1])).astype(np.uint8)
    return (arr & (1 - prev)).astype(np.uint8)
