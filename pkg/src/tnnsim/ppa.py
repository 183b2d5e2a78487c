"""Analytical power / computation-time / area estimates.

Power and area are linear in the synapse count. The per-synapse constants are
calibrated once on the 389K-synapse design; computation time is a per-layer
critical path of ``ceil(log2 p)`` adder stages plus a fitted per-layer
overhead.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from tnnsim.column import ColumnConfig
from tnnsim.designs import MNIST_LAYERS, TNN7_ROWS
from tnnsim.network import NetworkSpec


@dataclass(frozen=True)
class MacroPpa:
    name: str
    leakage_nw: float
    delay_ps: float
    area_um2: float


# 7nm characterisation of the nine macros
MACROS = (
    MacroPpa("syn_readout", 0.43, 32.0, 0.50),
    MacroPpa("syn_weight_update", 1.22, 190.0, 1.24),
    MacroPpa("less_equal", 0.17, 30.0, 0.17),
    MacroPpa("stdp_case_gen", 0.34, 66.0, 0.60),
    MacroPpa("incdec", 0.26, 56.0, 0.34),
    MacroPpa("stabilize_func", 0.12, 158.0, 0.36),
    MacroPpa("spike_gen", 1.46, 28.0, 1.55),
    MacroPpa("pulse2edge", 0.44, 22.0, 0.44),
    MacroPpa("edge2pulse", 0.49, 58.0, 0.61),
)

SYNAPSE_MACROS = ("syn_readout", "syn_weight_update", "stdp_case_gen", "incdec", "stabilize_func")
# input encode -> RNL readout -> (adder tree) -> WTA compare
CRITICAL_PATH_MACROS = ("spike_gen", "syn_readout", "less_equal")

REFERENCE_FREQ_HZ = 1.0e5


def macro_table() -> tuple[MacroPpa, ...]:
    return MACROS


def macro(name: str) -> MacroPpa:
    for m in MACROS:
        if m.name == name:
            return m
    raise KeyError(name)


def _sum(names: Iterable[str], attr: str) -> float:
    return sum(getattr(macro(n), attr) for n in names)


@dataclass(frozen=True)
class CalibrationConstants:
    power_per_synapse_nw: float
    area_per_synapse_um2: float
    glue_area_factor: float
    adder_stage_delay_ps: float
    per_layer_overhead_ns: float
    leakage_per_synapse_nw: float = field(default_factory=lambda: _sum(SYNAPSE_MACROS, "leakage_nw"))
    base_path_ps: float = field(default_factory=lambda: _sum(CRITICAL_PATH_MACROS, "delay_ps"))
    power_per_neuron_nw: float = 0.0
    reference_freq_hz: float = REFERENCE_FREQ_HZ

    def __post_init__(self):
        for k, v in asdict(self).items():
            if v < 0 or (k != "power_per_neuron_nw" and v == 0):
                raise ValueError(f"{k} must be positive, got {v}")

    @property
    def dynamic_per_synapse_nw(self) -> float:
        return self.power_per_synapse_nw - self.leakage_per_synapse_nw


@dataclass(frozen=True)
class PpaReport:
    design: str
    synapses: int
    leakage_mw: float
    dynamic_mw: float
    computation_time_ns: float
    area_mm2: float
    freq_hz: float = REFERENCE_FREQ_HZ

    @property
    def power_mw(self) -> float:
        return self.leakage_mw + self.dynamic_mw

    def row(self) -> dict:
        return {
            "design": self.design,
            "synapse_count": self.synapses,
            "power_mw": self.power_mw,
            "computation_time_ns": self.computation_time_ns,
            "area_mm2": self.area_mm2,
        }

    def to_dict(self) -> dict:
        return {**self.row(), "leakage_mw": self.leakage_mw, "dynamic_mw": self.dynamic_mw, "freq_hz": self.freq_hz}


def adder_stages(p: int) -> int:
    return math.ceil(math.log2(p)) if p > 1 else 0


def layer_time_ns(p: int, cal: CalibrationConstants) -> float:
    return (cal.base_path_ps + adder_stages(p) * cal.adder_stage_delay_ps) / 1000.0 + cal.per_layer_overhead_ns


def _power_area(synapses: int, neurons: int, cal: CalibrationConstants, freq_hz: float):
    k = freq_hz / cal.reference_freq_hz
    leak_nw = synapses * cal.leakage_per_synapse_nw
    dyn_nw = (synapses * cal.dynamic_per_synapse_nw + neurons * cal.power_per_neuron_nw) * k
    area_um2 = synapses * cal.area_per_synapse_um2 * cal.glue_area_factor
    return leak_nw * 1e-6, dyn_nw * 1e-6, area_um2 * 1e-6


def estimate_column(
    config: ColumnConfig,
    cal: Optional[CalibrationConstants] = None,
    design: str = "",
    freq_hz: Optional[float] = None,
) -> PpaReport:
    cal = cal or DEFAULT_CALIBRATION
    freq_hz = freq_hz or cal.reference_freq_hz
    leak, dyn, area = _power_area(config.synapses, config.q, cal, freq_hz)
    return PpaReport(
        design or f"{config.p}x{config.q}", config.synapses, leak, dyn, layer_time_ns(config.p, cal), area, freq_hz
    )


def estimate_network(
    spec: NetworkSpec,
    cal: Optional[CalibrationConstants] = None,
    design: str = "",
    freq_hz: Optional[float] = None,
) -> PpaReport:
    cal = cal or DEFAULT_CALIBRATION
    freq_hz = freq_hz or cal.reference_freq_hz
    synapses = sum(l.synapses for l in spec.layers)
    neurons = sum(l.outputs for l in spec.layers)
    leak, dyn, area = _power_area(synapses, neurons, cal, freq_hz)
    t = sum(layer_time_ns(l.column_config.p, cal) for l in spec.layers)
    return PpaReport(design or f"{len(spec.layers)}-layer", synapses, leak, dyn, t, area, freq_hz)


def scale_power_with_frequency(report: PpaReport, new_freq_hz: float) -> PpaReport:
    """Dynamic power scales linearly with the aclk frequency; leakage does not."""
    if not new_freq_hz > 0:
        raise ValueError("new_freq_hz must be > 0")
    k = new_freq_hz / report.freq_hz
    return replace(report, dynamic_mw=report.dynamic_mw * k, freq_hz=new_freq_hz)


def fit_layer_overhead(layer_ps: Sequence[Sequence[int]], times_ns: Sequence[float], base_path_ps, adder_stage_delay_ps):
    """Least-squares per-layer overhead given each design's per-layer p values."""
    n_layers = np.array([len(ps) for ps in layer_ps], dtype=float)
    fixed = np.array(
        [sum(base_path_ps + adder_stages(p) * adder_stage_delay_ps for p in ps) / 1000.0 for ps in layer_ps]
    )
    resid = np.asarray(times_ns, dtype=float) - fixed
    (overhead,), *_ = np.linalg.lstsq(n_layers[:, None], resid, rcond=None)
    return float(overhead)


DEFAULT_ADDER_STAGE_PS = 100.0


def calibrate(
    anchor_synapses: int = TNN7_ROWS[0].synapses,
    anchor_power_mw: float = TNN7_ROWS[0].power_mw,
    anchor_area_mm2: float = TNN7_ROWS[0].area_mm2,
    adder_stage_delay_ps: float = DEFAULT_ADDER_STAGE_PS,
) -> CalibrationConstants:
    """Per-synapse constants from one anchor design; layer overhead from all three MNIST rows."""
    macro_area = _sum(SYNAPSE_MACROS, "area_um2")
    base = _sum(CRITICAL_PATH_MACROS, "delay_ps")
    layer_ps = [[p for _, p, _ in MNIST_LAYERS[r.design]] for r in TNN7_ROWS]
    overhead = fit_layer_overhead(layer_ps, [r.computation_time_ns for r in TNN7_ROWS], base, adder_stage_delay_ps)
    return CalibrationConstants(
        power_per_synapse_nw=anchor_power_mw * 1e6 / anchor_synapses,
        area_per_synapse_um2=macro_area,
        glue_area_factor=anchor_area_mm2 * 1e6 / anchor_synapses / macro_area,
        adder_stage_delay_ps=adder_stage_delay_ps,
        per_layer_overhead_ns=overhead,
    )


DEFAULT_CALIBRATION = calibrate()


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

REPORT_COLUMNS = ("design", "synapse_count", "power_mw", "computation_time_ns", "area_mm2")
MACRO_COLUMNS = ("name", "leakage_nw", "delay_ps", "area_um2")


def _csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def reports_to_csv(reports: Iterable[PpaReport]) -> str:
    return _csv((r.row() for r in reports), REPORT_COLUMNS)


def reports_to_json(reports: Iterable[PpaReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def report_from_dict(d: dict) -> PpaReport:
    return PpaReport(
        d["design"], int(d["synapse_count"]), float(d["leakage_mw"]), float(d["dynamic_mw"]),
        float(d["computation_time_ns"]), float(d["area_mm2"]), float(d["freq_hz"]),
    )


def macros_to_csv(table: Iterable[MacroPpa] = MACROS) -> str:
    return _csv((asdict(m) for m in table), MACRO_COLUMNS)


def macros_to_json(table: Iterable[MacroPpa] = MACROS) -> str:
    return json.dumps([asdict(m) for m in table], indent=2)


def macros_from_json(text: str) -> tuple[MacroPpa, ...]:
    return tuple(MacroPpa(**d) for d in json.loads(text))


def macros_from_csv(text: str) -> tuple[MacroPpa, ...]:
    rows = csv.DictReader(io.StringIO(text))
    return tuple(MacroPpa(r["name"], float(r["leakage_nw"]), float(r["delay_ps"]), float(r["area_um2"])) for r in rows)
