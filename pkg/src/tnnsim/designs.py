"""Reference designs used for PPA calibration and as shipped configs.

Per-layer shapes of the MNIST prototypes are not public; the layer shapes
below are surrogates chosen so that total synapse counts match the
published 389K / 1,310K / 3,096K exactly. All layers are full columns.
"""

from __future__ import annotations

from dataclasses import dataclass

from tnnsim.column import ColumnConfig
from tnnsim.network import LayerSpec, NetworkSpec

MNIST_INPUTS = 28 * 28


@dataclass(frozen=True)
class ReferenceRow:
    """Published post-layout figures for one design (cell library TNN7)."""

    design: str
    synapses: int
    power_mw: float
    computation_time_ns: float
    area_mm2: float


TNN7_ROWS = (
    ReferenceRow("2-layer", 389_000, 2.25, 41.38, 3.09),
    ReferenceRow("3-layer", 1_310_000, 7.57, 66.16, 10.42),
    ReferenceRow("4-layer", 3_096_000, 17.89, 91.58, 24.63),
)
# largest single clustering column: 39 uW, 0.054 mm^2
LARGEST_COLUMN_SYNAPSES = 6750
LARGEST_COLUMN_POWER_UW = 39.0
LARGEST_COLUMN_AREA_MM2 = 0.054

# (columns, p, q) per layer
MNIST_LAYERS = {
    "2-layer": [(500, 32, 24), (5, 100, 10)],
    "3-layer": [(1000, 32, 24), (500, 48, 20), (62, 100, 10)],
    "4-layer": [(2000, 32, 24), (1000, 48, 20), (500, 56, 20), (40, 100, 10)],
}


def _layer(columns: int, p: int, q: int, seed: int) -> LayerSpec:
    threshold = max(1, p * 7 // 4)
    return LayerSpec(columns, ColumnConfig(p=p, q=q, threshold=threshold, seed=seed))


def mnist_network(name: str, seed: int = 0) -> NetworkSpec:
    layers = tuple(_layer(c, p, q, seed) for c, p, q in MNIST_LAYERS[name])
    return NetworkSpec(MNIST_INPUTS, layers)


def twoleadecg_column(seed: int = 0) -> ColumnConfig:
    """The 82x2 column used for the TwoLeadECG clustering task."""
    return ColumnConfig(p=82, q=2, threshold=82 * 7 // 4, seed=seed)
