import json
import math

import pytest
from hypothesis import given, strategies as st

from tnnsim import designs, ppa
from tnnsim.column import ColumnConfig
from tnnsim.network import LayerSpec, NetworkSpec

TABLE = {
    "syn_readout": (0.43, 32, 0.50),
    "syn_weight_update": (1.22, 190, 1.24),
    "less_equal": (0.17, 30, 0.17),
    "stdp_case_gen": (0.34, 66, 0.60),
    "incdec": (0.26, 56, 0.34),
    "stabilize_func": (0.12, 158, 0.36),
    "spike_gen": (1.46, 28, 1.55),
    "pulse2edge": (0.44, 22, 0.44),
    "edge2pulse": (0.49, 58, 0.61),
}


def col(p, q):
    return ColumnConfig(p=p, q=q, threshold=1)


def test_macro_table_exact():
    table = ppa.macro_table()
    assert len(table) == 9
    for m in table:
        assert (m.leakage_nw, m.delay_ps, m.area_um2) == TABLE[m.name]


def test_macro_serialisers_round_trip():
    assert ppa.macros_from_json(ppa.macros_to_json()) == ppa.MACROS
    assert ppa.macros_from_csv(ppa.macros_to_csv()) == ppa.MACROS


def test_default_constants():
    cal = ppa.DEFAULT_CALIBRATION
    assert cal.power_per_synapse_nw == pytest.approx(39_000 / 6750, rel=0.01)
    assert cal.power_per_synapse_nw == pytest.approx(2.25e6 / 389_000, rel=1e-12)
    assert cal.area_per_synapse_um2 * cal.glue_area_factor == pytest.approx(0.054e6 / 6750, rel=0.01)
    assert cal.area_per_synapse_um2 == pytest.approx(3.04)
    assert cal.leakage_per_synapse_nw == pytest.approx(2.37)


def test_largest_column_anchor():
    r = ppa.estimate_column(col(675, 10))
    assert r.power_mw * 1000 == pytest.approx(39.0, rel=0.05)
    assert r.area_mm2 == pytest.approx(0.054, rel=0.05)


@pytest.mark.parametrize("row", designs.TNN7_ROWS, ids=lambda r: r.design)
def test_table_rows(row):
    r = ppa.estimate_network(designs.mnist_network(row.design))
    assert r.synapses == row.synapses
    assert r.power_mw == pytest.approx(row.power_mw, rel=0.03)
    assert r.area_mm2 == pytest.approx(row.area_mm2, rel=0.03)


def test_time_fit_is_least_squares():
    cal = ppa.DEFAULT_CALIBRATION
    rows = designs.TNN7_ROWS

    def sse(overhead):
        c = ppa.CalibrationConstants(**{**cal.__dict__, "per_layer_overhead_ns": overhead})
        return sum(
            (ppa.estimate_network(designs.mnist_network(r.design), c).computation_time_ns - r.computation_time_ns) ** 2
            for r in rows
        )

    best = sse(cal.per_layer_overhead_ns)
    assert best <= sse(cal.per_layer_overhead_ns + 0.01) and best <= sse(cal.per_layer_overhead_ns - 0.01)


@given(st.integers(1, 500), st.integers(1, 50))
def test_power_area_linear(p, q):
    a = ppa.estimate_column(col(p, q))
    b = ppa.estimate_column(col(2 * p, q))
    assert b.power_mw == pytest.approx(2 * a.power_mw, rel=1e-12)
    assert b.area_mm2 == pytest.approx(2 * a.area_mm2, rel=1e-12)


def test_time_logarithmic_in_p():
    stage = ppa.DEFAULT_CALIBRATION.adder_stage_delay_ps / 1000
    for k in (1, 2, 4, 8, 16, 32, 64, 128):
        t1 = ppa.estimate_column(col(k, 4)).computation_time_ns
        t2 = ppa.estimate_column(col(2 * k, 4)).computation_time_ns
        assert t2 - t1 == pytest.approx(stage, abs=1e-12)
    assert ppa.adder_stages(1) == 0 and ppa.adder_stages(3) == 2


def test_network_time_sums_layers():
    spec = NetworkSpec(16, (LayerSpec(2, col(8, 4)), LayerSpec(1, col(8, 2))))
    r = ppa.estimate_network(spec)
    assert r.computation_time_ns == pytest.approx(2 * ppa.estimate_column(col(8, 4)).computation_time_ns)


def test_frequency_scaling():
    pure = ppa.PpaReport("d", 1, 0.0, 3.0, 1.0, 1.0)
    assert ppa.scale_power_with_frequency(pure, 2e5).power_mw == pytest.approx(6.0)
    r = ppa.estimate_column(col(64, 8))
    same = ppa.scale_power_with_frequency(r, r.freq_hz)
    assert same.power_mw == pytest.approx(r.power_mw)
    k = 3.5
    s = ppa.scale_power_with_frequency(r, k * r.freq_hz)
    assert s.power_mw == pytest.approx(r.leakage_mw + k * r.dynamic_mw)
    assert ppa.estimate_column(col(64, 8), freq_hz=k * 1e5).power_mw == pytest.approx(s.power_mw)
    with pytest.raises(ValueError):
        ppa.scale_power_with_frequency(r, 0)


def test_report_serialisation():
    reports = [ppa.estimate_network(designs.mnist_network(r.design), design=r.design) for r in designs.TNN7_ROWS]
    csv_text = ppa.reports_to_csv(reports)
    assert csv_text.splitlines()[0] == "design,synapse_count,power_mw,computation_time_ns,area_mm2"
    assert len(csv_text.splitlines()) == 4
    back = [ppa.report_from_dict(d) for d in json.loads(ppa.reports_to_json(reports))]
    assert back == reports


def test_calibration_rejects_nonpositive():
    with pytest.raises(ValueError):
        ppa.CalibrationConstants(0, 1, 1, 1, 1)
    assert math.isfinite(ppa.calibrate(adder_stage_delay_ps=50).per_layer_overhead_ns)
