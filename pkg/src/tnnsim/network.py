"""Feedforward stacks of columns.

Layer ``l`` reads the concatenated post-WTA outputs of layer ``l-1`` (layer 0
reads the external input vector). All layers run inside one logical gamma
frame, so a downstream column sees upstream spike times as its own inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from tnnsim.column import (
    ColumnConfig,
    ColumnOutput,
    ColumnState,
    column_gamma_cycle,
    initial_state,
)
from tnnsim.errors import DimensionError
from tnnsim.temporal import TemporalValue


@dataclass(frozen=True)
class LayerSpec:
    columns: int
    column_config: ColumnConfig
    # fanin_map[c][k]: upstream output feeding input k of column c.
    # None selects the default rule in ``resolve_fanin``.
    fanin_map: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def outputs(self) -> int:
        return self.columns * self.column_config.q

    @property
    def synapses(self) -> int:
        return self.columns * self.column_config.p * self.column_config.q

    def resolve_fanin(self, upstream: int) -> list[list[int]]:
        """Explicit map, or by default consecutive windows of p outputs that wrap around."""
        p = self.column_config.p
        if self.fanin_map is None:
            return [[(c * p + k) % upstream for k in range(p)] for c in range(self.columns)]
        if len(self.fanin_map) != self.columns:
            raise DimensionError(f"fanin_map has {len(self.fanin_map)} rows for {self.columns} columns")
        for c, row in enumerate(self.fanin_map):
            if len(row) != p:
                raise DimensionError(f"fanin_map[{c}] has {len(row)} entries, expected p={p}")
            bad = [i for i in row if not 0 <= i < upstream]
            if bad:
                raise DimensionError(f"fanin_map[{c}] references missing upstream outputs {bad}")
        return [list(row) for row in self.fanin_map]


@dataclass(frozen=True)
class NetworkSpec:
    input_dim: int
    layers: tuple[LayerSpec, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if self.input_dim < 1:
            raise ValueError("input_dim: input_dim ≥ 1 required")

    @property
    def total_synapses(self) -> int:
        return count_synapses(self)

    def upstream_sizes(self) -> list[int]:
        sizes = [self.input_dim]
        for layer in self.layers[:-1]:
            sizes.append(layer.outputs)
        return sizes

    def validate(self) -> None:
        for layer, upstream in zip(self.layers, self.upstream_sizes()):
            layer.resolve_fanin(upstream)


def count_synapses(spec: NetworkSpec) -> int:
    return sum(layer.synapses for layer in spec.layers)


@dataclass
class NetworkState:
    columns: list[list[ColumnState]]

    @property
    def gamma_index(self) -> int:
        return self.columns[0][0].gamma_index if self.columns else 0


def initial_network_state(spec: NetworkSpec) -> NetworkState:
    return NetworkState(
        [
            [initial_state(layer.column_config, (li, c)) for c in range(layer.columns)]
            for li, layer in enumerate(spec.layers)
        ]
    )


def network_gamma_cycle(
    spec: NetworkSpec,
    state: NetworkState,
    inputs: Sequence[TemporalValue],
    learn: Optional[bool] = None,
) -> tuple[NetworkState, list[list[ColumnOutput]]]:
    if len(inputs) != spec.input_dim:
        raise DimensionError(f"got {len(inputs)} inputs for input_dim={spec.input_dim}")
    signal = list(inputs)
    new_cols: list[list[ColumnState]] = []
    outputs: list[list[ColumnOutput]] = []
    for li, layer in enumerate(spec.layers):
        fanin = layer.resolve_fanin(len(signal))
        layer_states, layer_outs = [], []
        for c in range(layer.columns):
            x = [signal[i] for i in fanin[c]]
            st, out = column_gamma_cycle(layer.column_config, state.columns[li][c], x, (li, c), learn)
            layer_states.append(st)
            layer_outs.append(out)
        new_cols.append(layer_states)
        outputs.append(layer_outs)
        signal = [t for out in layer_outs for t in out.spike_times]
    return NetworkState(new_cols), outputs


def layer_output_vector(outputs: list[ColumnOutput]) -> list[TemporalValue]:
    return [t for out in outputs for t in out.spike_times]


class Network:
    def __init__(self, spec: NetworkSpec, state: Optional[NetworkState] = None):
        spec.validate()
        self.spec = spec
        self.state = state if state is not None else initial_network_state(spec)

    def step(self, inputs, learn: Optional[bool] = None) -> list[list[ColumnOutput]]:
        self.state, outs = network_gamma_cycle(self.spec, self.state, inputs, learn)
        return outs


def single_column_network(config: ColumnConfig) -> NetworkSpec:
    return NetworkSpec(config.p, (LayerSpec(1, config),))
