"""Spike encoders, synthetic datasets and desk-scale learning benchmarks."""

from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Hashable, Optional, Sequence

import numpy as np

from tnnsim import rng
from tnnsim.column import Column, ColumnConfig
from tnnsim.network import Network, NetworkSpec, layer_output_vector
from tnnsim.errors import DimensionError
from tnnsim.temporal import INF, TemporalValue


@dataclass(frozen=True)
class EncoderConfig:
    input_dim: int
    scheme: str = "latency"  # "latency" (intensity-to-latency) or "onset"
    time_range_ticks: int = 8
    gamma_period_ticks: int = 64
    floor: float = 0.0
    # fixed full-scale value; None normalises each sample by its own maximum
    full_scale: Optional[float] = None

    def __post_init__(self):
        if self.scheme not in ("latency", "onset"):
            raise ValueError(f"unknown encoding scheme {self.scheme!r}")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if not 0 <= self.time_range_ticks < self.gamma_period_ticks:
            raise ValueError("time_range_ticks must lie in [0, gamma_period_ticks)")


def encode_sample(values: Sequence[float], cfg: EncoderConfig) -> list[TemporalValue]:
    """Larger values spike earlier; values at or below ``cfg.floor`` never spike.

    ``t = floor((top - v) / (top - floor) * range + 1/2)`` clipped to
    ``[0, time_range_ticks]``, where ``top`` is the sample max or ``full_scale``.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("cannot encode an empty vector")
    if v.size != cfg.input_dim:
        raise DimensionError(f"sample has {v.size} values, encoder expects {cfg.input_dim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("sample values must be finite")
    above = v > cfg.floor
    if cfg.scheme == "onset":
        return [0 if a else INF for a in above]
    top = cfg.full_scale if cfg.full_scale is not None else v.max()
    if top <= cfg.floor:
        return [INF] * v.size
    t = np.floor((top - v) / (top - cfg.floor) * cfg.time_range_ticks + 0.5)
    t = np.clip(t, 0, cfg.time_range_ticks)
    return [int(ti) if a else INF for ti, a in zip(t, above)]


# ---------------------------------------------------------------------------
# datasets
# ---------------------------------------------------------------------------


@dataclass
class Dataset:
    X: np.ndarray  # (n, d) float
    y: np.ndarray  # (n,) int

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=int)
        if len(self.X) != len(self.y):
            raise DimensionError("X and y disagree on sample count")

    def __len__(self):
        return len(self.y)

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    @property
    def n_labels(self) -> int:
        return len(np.unique(self.y))


def make_prototypes(
    n_classes: int,
    dim: int,
    samples_per_class: int,
    jitter: float = 0.05,
    density: float = 0.5,
    seed: int = 0,
    draw: int = 0,
) -> Dataset:
    """Sparse random prototypes plus Gaussian jitter.

    Each prototype drives a random ``density`` fraction of the inputs with a
    random intensity; the rest stay silent. ``seed`` fixes the prototypes and
    ``draw`` the jitter, so draws of one seed share their prototypes.
    """
    g = rng.stream(seed, rng.DATA, n_classes, dim)
    protos = g.random((n_classes, dim)) * (g.random((n_classes, dim)) < density)
    X = np.repeat(protos, samples_per_class, axis=0)
    noise = rng.stream(seed, rng.DATA, n_classes, dim, 2, draw).normal(0.0, jitter, X.shape)
    X = np.clip(X + noise, 0.0, None) * (X > 0)
    y = np.repeat(np.arange(n_classes), samples_per_class)
    return Dataset(X, y)


def make_random(n_classes: int, dim: int, samples_per_class: int, seed: int = 0) -> Dataset:
    """Features independent of labels: the chance-level control."""
    g = rng.stream(seed, rng.DATA, n_classes, dim, 1)
    X = g.random((n_classes * samples_per_class, dim))
    y = np.repeat(np.arange(n_classes), samples_per_class)
    return Dataset(X, y)


def load_csv(path) -> Dataset:
    """One sample per row: label first, features after. No header."""
    X, y = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            y.append(int(float(row[0])))
            X.append([float(x) for x in row[1:]])
    if not y:
        raise ValueError(f"{path}: no samples")
    if len({len(r) for r in X}) != 1:
        raise DimensionError(f"{path}: rows have differing feature counts")
    return Dataset(np.array(X), np.array(y))


def save_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for label, row in zip(ds.y, ds.X):
            w.writerow([int(label), *(repr(float(x)) for x in row)])


# ---------------------------------------------------------------------------
# metrics and runs
# ---------------------------------------------------------------------------


@dataclass
class RunMetrics:
    purity: float
    accuracy: float
    spikes_per_gamma: float
    weight_histogram: list[int]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def purity(assignments: Sequence[Hashable], labels: Sequence[int]) -> float:
    """Fraction of samples that carry their cluster's majority label.

    Samples with no winner (``None``) form one cluster of their own.
    """
    if len(assignments) != len(labels) or not len(labels):
        raise ValueError("need equally many assignments and labels")
    groups: dict = {}
    for a, y in zip(assignments, labels):
        groups.setdefault(a, Counter())[int(y)] += 1
    return sum(max(c.values()) for c in groups.values()) / len(labels)


def majority_map(assignments, labels) -> dict:
    groups: dict = {}
    for a, y in zip(assignments, labels):
        groups.setdefault(a, Counter())[int(y)] += 1
    # ties resolved by lowest label for determinism
    return {a: min(c, key=lambda k: (-c[k], k)) for a, c in groups.items()}


def _winner(times: Sequence[TemporalValue]) -> Optional[int]:
    best = min(times, default=INF)
    return None if best == INF else list(times).index(best)


def _encoder_for(ds: Dataset, gamma: int, encoder: Optional[EncoderConfig]) -> EncoderConfig:
    enc = encoder or EncoderConfig(ds.dim, gamma_period_ticks=gamma)
    if enc.input_dim != ds.dim:
        raise DimensionError(f"dataset has {ds.dim} features, encoder expects {enc.input_dim}")
    return enc


def _training_order(seed: int, n: int, cycles: int) -> np.ndarray:
    return rng.stream(seed, rng.SHUFFLE, n).integers(0, n, size=cycles)


def run_clustering(
    column_cfg: ColumnConfig,
    dataset: Dataset,
    cycles: int,
    encoder: Optional[EncoderConfig] = None,
) -> RunMetrics:
    """Online STDP for ``cycles`` gamma cycles, then a frozen pass scored by purity."""
    if dataset.dim != column_cfg.p:
        raise DimensionError(f"dataset has {dataset.dim} features but column p={column_cfg.p}")
    if dataset.n_labels > column_cfg.q:
        raise ValueError(f"{dataset.n_labels} labels exceed q={column_cfg.q} neurons")
    enc = _encoder_for(dataset, column_cfg.gamma_period_ticks, encoder)
    encoded = [encode_sample(x, enc) for x in dataset.X]

    col = Column(column_cfg)
    if column_cfg.learning_enabled:
        for i in _training_order(column_cfg.seed, len(dataset), cycles):
            col.step(encoded[i])

    winners = []
    spikes = 0
    for e in encoded:
        out = col.step(e, learn=False)
        winners.append(out.winner)
        spikes += out.winner is not None
    pur = purity(winners, dataset.y)
    hist = np.bincount(col.weights.ravel(), minlength=column_cfg.max_weight + 1)
    return RunMetrics(pur, pur, spikes / len(dataset), hist.tolist())


def run_classification(
    network_spec: NetworkSpec,
    dataset: Dataset,
    cycles: int,
    test: Optional[Dataset] = None,
    encoder: Optional[EncoderConfig] = None,
) -> RunMetrics:
    """Unsupervised training, then a winner-to-label majority readout.

    The readout winner is the earliest spike across the last layer's outputs.
    ``accuracy`` is measured on ``test`` when given, else on the training set.
    """
    if dataset.dim != network_spec.input_dim:
        raise DimensionError(f"dataset has {dataset.dim} features, network expects {network_spec.input_dim}")
    first = network_spec.layers[0].column_config
    enc = _encoder_for(dataset, first.gamma_period_ticks, encoder)
    net = Network(network_spec)
    encoded = [encode_sample(x, enc) for x in dataset.X]
    if first.learning_enabled:
        for i in _training_order(first.seed, len(dataset), cycles):
            net.step(encoded[i])

    def readout(samples):
        winners, spikes = [], 0
        for e in samples:
            outs = net.step(e, learn=False)
            winners.append(_winner(layer_output_vector(outs[-1])))
            spikes += sum(o.winner is not None for layer in outs for o in layer)
        return winners, spikes / max(len(samples), 1)

    train_w, spg = readout(encoded)
    mapping = majority_map(train_w, dataset.y)
    fallback = majority_map([0] * len(dataset), dataset.y)[0]
    eval_ds = test if test is not None else dataset
    eval_w = train_w if test is None else readout([encode_sample(x, enc) for x in test.X])[0]
    predicted = [mapping.get(w, fallback) for w in eval_w]
    acc = float(np.mean(np.asarray(predicted) == eval_ds.y))

    max_w = max(l.column_config.max_weight for l in network_spec.layers)
    hist = np.zeros(max_w + 1, dtype=np.int64)
    for layer_states in net.state.columns:
        for st in layer_states:
            hist += np.bincount(st.weights.ravel(), minlength=max_w + 1)
    return RunMetrics(purity(train_w, dataset.y), acc, spg, hist.tolist())


# ---------------------------------------------------------------------------
# standard suites
# ---------------------------------------------------------------------------

CLUSTER_DIM = 16


def clustering_column(seed: int = 0, p: int = CLUSTER_DIM, q: int = 3, learning: bool = True) -> ColumnConfig:
    return ColumnConfig(p=p, q=q, threshold=p, seed=seed, learning_enabled=learning)


def clustering_suite(seed: int = 0, cycles: int = 1500) -> dict:
    """3 sparse prototypes; learned purity next to an untrained chance control."""
    ds = make_prototypes(3, CLUSTER_DIM, 50, seed=seed)
    learned = run_clustering(clustering_column(seed), ds, cycles)
    control = run_clustering(clustering_column(seed, learning=False), make_random(3, CLUSTER_DIM, 100, seed=seed), 0)
    return {"suite": "clustering", "seed": seed, "learned": asdict(learned), "chance": asdict(control)}


def classification_network(seed: int = 0, dim: int = CLUSTER_DIM, learning: bool = True) -> NetworkSpec:
    from tnnsim.network import LayerSpec

    return NetworkSpec(
        dim,
        (
            LayerSpec(2, ColumnConfig(p=dim, q=4, threshold=dim, seed=seed, learning_enabled=learning)),
            LayerSpec(1, ColumnConfig(p=8, q=2, threshold=4, seed=seed, learning_enabled=learning)),
        ),
    )


def classification_suite(seed: int = 0, cycles: int = 1500) -> dict:
    """Two-class toy through a 2-layer network, scored on a held-out draw."""
    train = make_prototypes(2, CLUSTER_DIM, 60, seed=seed)
    test = make_prototypes(2, CLUSTER_DIM, 60, seed=seed, draw=1)
    learned = run_classification(classification_network(seed), train, cycles, test=test)
    control = run_classification(
        classification_network(seed, learning=False),
        make_random(2, CLUSTER_DIM, 100, seed=seed),
        0,
        test=make_random(2, CLUSTER_DIM, 100, seed=seed + 1),
    )
    return {"suite": "classification", "seed": seed, "learned": asdict(learned), "chance": asdict(control)}


SUITES = {"clustering": clustering_suite, "classification": classification_suite}
