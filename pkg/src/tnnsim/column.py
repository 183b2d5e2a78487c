"""A p x q TNN column: RNL synapses, adder-tree bodies, 1-WTA, STDP.

Two evaluations of the same gamma cycle are provided. ``column_gamma_cycle``
is the vectorised path used everywhere; ``column_gamma_cycle_ticks`` steps the
scalar macro models one aclk tick at a time and exists to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from tnnsim import macros, rng
from tnnsim.errors import DimensionError
from tnnsim.macros import SynapseState
from tnnsim.temporal import INF, TemporalValue, check_temporal, pulse_trace, first_edge

DEFAULT_STABILIZATION = (1.0, 0.875, 0.75, 0.625, 0.625, 0.75, 0.875, 1.0)
# per-case BRV probability, indexed by StdpCase
DEFAULT_CASE_PROBS = (1.0, 1.0, 0.125, 1.0)


def default_stabilization(weight_bits: int) -> tuple[float, ...]:
    if weight_bits == 3:
        return DEFAULT_STABILIZATION
    if weight_bits < 1:
        return ()
    x = np.linspace(0.0, 7.0, 2**weight_bits)
    return tuple(float(v) for v in np.interp(x, np.arange(8), DEFAULT_STABILIZATION))


@dataclass(frozen=True)
class ColumnConfig:
    p: int
    q: int
    threshold: int
    weight_bits: int = 3
    gamma_period_ticks: int = 64
    stabilization_probs: Optional[tuple[float, ...]] = None
    case_probs: tuple[float, float, float, float] = DEFAULT_CASE_PROBS
    seed: int = 0
    learning_enabled: bool = True
    initial_weight: Optional[int] = None  # None: uniform random per synapse

    def __post_init__(self):
        if self.stabilization_probs is None:
            object.__setattr__(self, "stabilization_probs", default_stabilization(self.weight_bits))
        object.__setattr__(self, "stabilization_probs", tuple(map(float, self.stabilization_probs)))
        object.__setattr__(self, "case_probs", tuple(map(float, self.case_probs)))
        for problem in self.problems():
            raise ValueError(problem)

    def problems(self) -> list[str]:
        """Invariant violations as ``"field: message"`` strings."""
        out = []
        if self.p < 1:
            out.append("p: p ≥ 1 required")
        if self.q < 1:
            out.append("q: q ≥ 1 required")
        if self.threshold < 1:
            out.append("threshold: threshold ≥ 1 required")
        if self.weight_bits < 1:
            out.append("weight_bits: weight_bits ≥ 1 required")
        elif self.gamma_period_ticks < 2 * 2**self.weight_bits:
            out.append(
                f"gamma_period_ticks: must be >= 2*2^weight_bits = {2 * 2**self.weight_bits}"
            )
        if len(self.stabilization_probs) != 2**self.weight_bits:
            out.append(f"stabilization_probs: need {2**self.weight_bits} entries")
        if any(not 0.0 <= x <= 1.0 for x in self.stabilization_probs):
            out.append("stabilization_probs: probabilities must lie in [0, 1]")
        if len(self.case_probs) != 4 or any(not 0.0 <= x <= 1.0 for x in self.case_probs):
            out.append("case_probs: need 4 probabilities in [0, 1]")
        if self.initial_weight is not None and not 0 <= self.initial_weight <= self.max_weight:
            out.append(f"initial_weight: must lie in [0, {self.max_weight}]")
        return out

    @property
    def max_weight(self) -> int:
        return 2**self.weight_bits - 1

    @property
    def synapses(self) -> int:
        return self.p * self.q


@dataclass
class ColumnState:
    weights: np.ndarray  # (p, q) int
    gamma_index: int = 0

    def copy(self) -> "ColumnState":
        return ColumnState(self.weights.copy(), self.gamma_index)


@dataclass
class ColumnOutput:
    winner: Optional[int]
    spike_times: tuple[TemporalValue, ...]  # post-WTA
    pre_wta_times: tuple[TemporalValue, ...] = ()
    body_potentials: Optional[np.ndarray] = field(default=None, repr=False)  # (ticks, q)


def initial_state(config: ColumnConfig, key: Sequence[int] = ()) -> ColumnState:
    shape = (config.p, config.q)
    if config.initial_weight is not None:
        w = np.full(shape, config.initial_weight, dtype=np.int64)
    else:
        w = rng.stream(config.seed, rng.INIT, *key).integers(0, config.max_weight + 1, size=shape)
    return ColumnState(w.astype(np.int64), 0)


def draw_brvs(config: ColumnConfig, gamma_index: int, key: Sequence[int] = ()):
    """Stabilisation lines ``(p, q, 2**bits)`` and case BRVs ``(p, q)`` for one cycle."""
    g = rng.stream(config.seed, rng.BRV, *key, gamma_index)
    n_lines = 2**config.weight_bits
    lines = g.random((config.p, config.q, n_lines)) < np.asarray(config.stabilization_probs)
    case_u = g.random((config.p, config.q))
    return lines, case_u


def neuron_body_step(response_bits, accumulator: int, threshold: int, already_fired: bool = False):
    acc = accumulator + int(np.sum(response_bits))
    return acc, (acc >= threshold) and not already_fired


def wta_inhibit(spike_times: Sequence[TemporalValue]) -> ColumnOutput:
    """1-WTA: earliest spike wins, lowest index on ties."""
    if len(spike_times) < 1:
        raise DimensionError("wta_inhibit needs at least one neuron")
    inhibit = min(spike_times)
    passed = [macros.less_equal(t, inhibit) for t in spike_times]
    winner = next((j for j, t in enumerate(passed) if t != INF), None)
    out = tuple(t if j == winner else INF for j, t in enumerate(passed))
    return ColumnOutput(winner, out, tuple(spike_times))


def _as_times(inputs, config: ColumnConfig) -> np.ndarray:
    if len(inputs) != config.p:
        raise DimensionError(f"got {len(inputs)} input spikes for p={config.p}")
    return np.array([check_temporal(v, config.gamma_period_ticks) for v in inputs], dtype=float)


def body_potentials(weights: np.ndarray, times: np.ndarray, gamma_period_ticks: int) -> np.ndarray:
    """Accumulator value of every neuron after each tick, shape ``(ticks, q)``.

    Synapse ``i`` contributes ``clip(k - t_i + 1, 0, w_ij)`` by tick ``k``:
    the running count of its RNL response bits.
    """
    k = np.arange(gamma_period_ticks, dtype=float)[:, None, None]
    ramp = np.clip(k - times[None, :, None] + 1.0, 0.0, weights[None, :, :])
    return ramp.sum(axis=1).astype(np.int64)


def fire_times(potentials: np.ndarray, threshold: int) -> np.ndarray:
    crossed = potentials >= threshold
    first = crossed.argmax(axis=0).astype(float)
    first[~crossed.any(axis=0)] = np.inf
    return first


def stdp_update(config: ColumnConfig, weights, ein, eout, lines, case_u) -> np.ndarray:
    case = macros.stdp_case_gen_array(np.asarray(ein, float)[:, None], np.asarray(eout, float)[None, :])
    stab = macros.stabilize_func_array(weights, lines)
    case_probs = np.asarray(config.case_probs)
    gate = case_u < case_probs[np.clip(case, 0, 3)]
    inc, dec = macros.incdec_array(case, stab & gate & (case != macros.NO_CASE))
    return np.clip(weights + inc.astype(np.int64) - dec.astype(np.int64), 0, config.max_weight)


def column_gamma_cycle(
    config: ColumnConfig,
    state: ColumnState,
    inputs: Sequence[TemporalValue],
    key: Sequence[int] = (),
    learn: Optional[bool] = None,
) -> tuple[ColumnState, ColumnOutput]:
    times = _as_times(inputs, config)
    pot = body_potentials(state.weights, times, config.gamma_period_ticks)
    pre = fire_times(pot, config.threshold)
    out = wta_inhibit([int(t) if np.isfinite(t) else INF for t in pre])
    out.body_potentials = pot

    weights = state.weights
    if config.learning_enabled if learn is None else learn:
        lines, case_u = draw_brvs(config, state.gamma_index, key)
        eout = np.array(out.spike_times, dtype=float)
        weights = stdp_update(config, weights, times, eout, lines, case_u)
    return ColumnState(weights, state.gamma_index + 1), out


def column_gamma_cycle_ticks(
    config: ColumnConfig,
    state: ColumnState,
    inputs: Sequence[TemporalValue],
    key: Sequence[int] = (),
    learn: Optional[bool] = None,
) -> tuple[ColumnState, ColumnOutput]:
    """Reference evaluation built from the scalar macro models, tick by tick."""
    G = config.gamma_period_ticks
    times = [check_temporal(v, G) for v in inputs]
    if len(times) != config.p:
        raise DimensionError(f"got {len(times)} input spikes for p={config.p}")

    pulses = [pulse_trace(t, 1, G) for t in times]
    enables = [macros.spike_gen_trace(pl, config.weight_bits) for pl in pulses]
    syn = [
        [SynapseState(int(state.weights[i, j]), config.weight_bits) for j in range(config.q)]
        for i in range(config.p)
    ]
    acc = [0] * config.q
    fired = [INF] * config.q
    pot = np.zeros((G, config.q), dtype=np.int64)
    for k in range(G):
        bits = np.zeros((config.p, config.q), dtype=np.uint8)
        for i in range(config.p):
            if pulses[i][k]:
                syn[i] = [macros.start_readout(s) for s in syn[i]]
            if enables[i][k]:
                for j in range(config.q):
                    bits[i, j], syn[i][j] = macros.syn_readout_step(syn[i][j])
        for j in range(config.q):
            acc[j], spike = neuron_body_step(bits[:, j], acc[j], config.threshold, fired[j] != INF)
            if spike:
                fired[j] = k
        pot[k] = acc
    out = wta_inhibit(fired)
    out.body_potentials = pot

    # gclk reset: any readout cut short by the cycle end restores its weight
    syn = [[replace(s, weight=s.shadow_weight) if s.readout_active else s for s in row] for row in syn]
    if config.learning_enabled if learn is None else learn:
        lines, case_u = draw_brvs(config, state.gamma_index, key)
        ein = [first_edge(macros.pulse2edge(pl)) for pl in pulses]
        for i in range(config.p):
            for j in range(config.q):
                s = syn[i][j]
                case = macros.stdp_case_gen(ein[i], out.spike_times[j])
                stab = macros.stabilize_func(s.weight, list(lines[i, j]))
                gate = case is not None and case_u[i, j] < config.case_probs[case]
                inc, dec = macros.incdec(case, int(stab and gate))
                syn[i][j] = macros.syn_weight_update(s, inc, dec)
    weights = np.array([[s.weight for s in row] for row in syn], dtype=np.int64)
    return ColumnState(weights, state.gamma_index + 1), out


class Column:
    """Stateful convenience wrapper around :func:`column_gamma_cycle`."""

    def __init__(self, config: ColumnConfig, state: Optional[ColumnState] = None, key: Sequence[int] = ()):
        self.config = config
        self.key = tuple(key)
        self.state = state if state is not None else initial_state(config, self.key)

    @property
    def weights(self) -> np.ndarray:
        return self.state.weights

    def step(self, inputs, learn: Optional[bool] = None) -> ColumnOutput:
        self.state, out = column_gamma_cycle(self.config, self.state, inputs, self.key, learn)
        return out
