"""Temporal neural network column simulator and PPA estimator."""

from tnnsim.column import Column, ColumnConfig, ColumnOutput, ColumnState, column_gamma_cycle
from tnnsim.config import parse_config
from tnnsim.network import LayerSpec, Network, NetworkSpec, count_synapses
from tnnsim.ppa import estimate_column, estimate_network, macro_table
from tnnsim.temporal import INF

__all__ = [
    "INF",
    "Column",
    "ColumnConfig",
    "ColumnOutput",
    "ColumnState",
    "LayerSpec",
    "Network",
    "NetworkSpec",
    "column_gamma_cycle",
    "count_synapses",
    "estimate_column",
    "estimate_network",
    "macro_table",
    "parse_config",
]
