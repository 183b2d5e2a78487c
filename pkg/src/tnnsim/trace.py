"""Drive columns/networks for N gamma cycles and write spike traces."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from tnnsim import rng
from tnnsim.bench import Dataset, EncoderConfig, encode_sample
from tnnsim.column import ColumnConfig
from tnnsim.errors import DimensionError, OutputError
from tnnsim.network import Network, NetworkSpec, layer_output_vector, single_column_network
from tnnsim.temporal import INF

SPIKE_COLUMNS = ("gamma_index", "neuron", "spike_time")
WEIGHT_COLUMNS = ("gamma_index", "layer", "column", "synapse", "neuron", "weight")


@dataclass
class Snapshot:
    gamma_index: int
    layer: int
    column: int
    weights: np.ndarray


@dataclass
class RunRecord:
    spikes: list[tuple[int, int, int]] = field(default_factory=list)
    snapshots: list[Snapshot] = field(default_factory=list)
    cycles: int = 0


def random_inputs(n: int, weight_bits: int, seed: int, cycles: int) -> Iterator[list]:
    """Every input spikes once per cycle at a uniform tick in ``[0, 2**weight_bits)``."""
    for c in range(cycles):
        yield [int(t) for t in rng.stream(seed, rng.DATA, c).integers(0, 2**weight_bits, size=n)]


def dataset_inputs(ds: Dataset, enc: EncoderConfig, cycles: int) -> Iterator[list]:
    encoded = [encode_sample(x, enc) for x in ds.X]
    for c in range(cycles):
        yield encoded[c % len(encoded)]


def run(
    model: Union[ColumnConfig, NetworkSpec],
    cycles: int,
    learn: bool,
    inputs: Optional[Iterator[Sequence]] = None,
    snapshot_every: int = 0,
) -> RunRecord:
    """The trace records post-WTA spikes of the last layer, indexed across its columns."""
    spec = single_column_network(model) if isinstance(model, ColumnConfig) else model
    net = Network(spec)
    first = spec.layers[0].column_config
    if inputs is None:
        inputs = random_inputs(spec.input_dim, first.weight_bits, first.seed, cycles)
    rec = RunRecord()

    def snap(g):
        for li, layer in enumerate(net.state.columns):
            for c, st in enumerate(layer):
                rec.snapshots.append(Snapshot(g, li, c, st.weights.copy()))

    for g, x in zip(range(cycles), inputs):
        if len(x) != spec.input_dim:
            raise DimensionError(f"input vector of {len(x)} for input_dim={spec.input_dim}")
        outs = net.step(x, learn=learn)
        for j, t in enumerate(layer_output_vector(outs[-1])):
            if t != INF:
                rec.spikes.append((g, j, int(t)))
        rec.cycles = g + 1
        if snapshot_every and (g + 1) % snapshot_every == 0:
            snap(g + 1)
    return rec


def _spike_rows(rec: RunRecord):
    return [dict(zip(SPIKE_COLUMNS, s)) for s in rec.spikes]


def _weight_rows(rec: RunRecord):
    for s in rec.snapshots:
        for i, row in enumerate(s.weights):
            for j, w in enumerate(row):
                yield (s.gamma_index, s.layer, s.column, i, j, int(w))


def weights_path(path) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".weights.csv")


def emit_trace(rec: RunRecord, path, fmt: str = "csv") -> list[Path]:
    """Write the trace; CSV snapshots go to a sibling ``*.weights.csv``. Returns written paths."""
    path = Path(path)
    written = [path]
    try:
        if fmt == "json":
            doc = {
                "cycles": rec.cycles,
                "spikes": _spike_rows(rec),
                "snapshots": [
                    {"gamma_index": s.gamma_index, "layer": s.layer, "column": s.column, "weights": s.weights.tolist()}
                    for s in rec.snapshots
                ],
            }
            path.write_text(json.dumps(doc, indent=1) + "\n")
        elif fmt == "csv":
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(SPIKE_COLUMNS)
                w.writerows(rec.spikes)
            if rec.snapshots:
                wp = weights_path(path)
                with open(wp, "w", newline="") as fh:
                    w = csv.writer(fh, lineterminator="\n")
                    w.writerow(WEIGHT_COLUMNS)
                    w.writerows(_weight_rows(rec))
                written.append(wp)
        else:
            raise ValueError(f"unknown trace format {fmt!r}")
    except OSError as exc:
        raise OutputError(f"{path}: cannot write trace: {exc.strerror}") from None
    return written
