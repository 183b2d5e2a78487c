import json
from pathlib import Path

import pytest

from tnnsim import bench, cli, ppa
from tnnsim.trace import RunRecord, emit_trace

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def column_cfg(tmp_path):
    p = tmp_path / "col.json"
    p.write_text(json.dumps({"p": 4, "q": 2, "threshold": 1, "seed": 3}))
    return p


def read_rows(path):
    return path.read_text().splitlines()


def test_empty_run_header_only(tmp_path, column_cfg):
    out = tmp_path / "t.csv"
    assert cli.main(["simulate", "--config", str(column_cfg), "--cycles", "0", "--out", str(out)]) == 0
    assert read_rows(out) == ["gamma_index,neuron,spike_time"]
    emit_trace(RunRecord(), tmp_path / "e.csv")
    assert read_rows(tmp_path / "e.csv") == ["gamma_index,neuron,spike_time"]


def test_one_cycle_one_row(tmp_path, column_cfg):
    out = tmp_path / "t.csv"
    assert cli.main(["simulate", "--config", str(column_cfg), "--cycles", "1", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert len(rows) == 2
    g, neuron, t = map(int, rows[1].split(","))
    assert g == 0 and neuron in (0, 1) and 0 <= t < 64


def test_fixed_seed_byte_identical(tmp_path, column_cfg):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        args = ["learn", "--config", str(column_cfg), "--cycles", "200", "--out", str(out), "--snapshot-every", "50"]
        assert cli.main(args) == 0
    assert a.read_bytes() == b.read_bytes()
    wa, wb = tmp_path / "a.weights.csv", tmp_path / "b.weights.csv"
    assert wa.read_bytes() == wb.read_bytes()
    # 4 snapshots x 8 synapses + header
    assert len(read_rows(wa)) == 33


def test_seed_changes_trace(tmp_path, column_cfg, monkeypatch):
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    cli.main(["learn", "--config", str(column_cfg), "--cycles", "100", "--out", str(a)])
    cli.main(["learn", "--config", str(column_cfg), "--cycles", "100", "--out", str(b), "--seed", "77"])
    monkeypatch.setenv(cli.SEED_ENV, "77")
    cli.main(["learn", "--config", str(column_cfg), "--cycles", "100", "--out", str(c)])
    assert a.read_bytes() != b.read_bytes()
    assert b.read_bytes() == c.read_bytes()


def test_json_trace(tmp_path, column_cfg):
    out = tmp_path / "t.json"
    args = ["learn", "--config", str(column_cfg), "--cycles", "10", "--out", str(out), "--format", "json",
            "--snapshot-every", "5"]
    assert cli.main(args) == 0
    doc = json.loads(out.read_text())
    assert doc["cycles"] == 10
    assert len(doc["snapshots"]) == 2
    assert {"gamma_index", "neuron", "spike_time"} == set(doc["spikes"][0])


def test_network_trace_from_dataset(tmp_path):
    ds = bench.make_prototypes(2, 16, 5, seed=1)
    data = tmp_path / "d.csv"
    bench.save_csv(ds, data)
    out = tmp_path / "n.csv"
    cfgp = tmp_path / "net.json"
    from tnnsim import config

    config.save_config(bench.classification_network(0), cfgp)
    args = ["simulate", "--config", str(cfgp), "--cycles", "10", "--out", str(out), "--data", str(data)]
    assert cli.main(args) == 0
    assert len(read_rows(out)) >= 2


def test_exit_codes(tmp_path, column_cfg, capsys):
    out = str(tmp_path / "t.csv")
    assert cli.main(["simulate", "--config", str(tmp_path / "missing.json"), "--cycles", "1", "--out", out]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 0, "q": 1, "threshold": 1}')
    assert cli.main(["simulate", "--config", str(bad), "--cycles", "1", "--out", out]) == 3
    assert "p ≥ 1" in capsys.readouterr().err

    data = tmp_path / "d.csv"
    data.write_text("0,1.0,0.5\n")
    assert cli.main(["simulate", "--config", str(column_cfg), "--cycles", "1", "--out", out, "--data", str(data)]) == 4

    unwritable = str(tmp_path / "no" / "such" / "dir" / "t.csv")
    assert cli.main(["simulate", "--config", str(column_cfg), "--cycles", "1", "--out", unwritable]) == 5

    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate"])
    assert exc.value.code == 2


def test_ppa_prints_macro_table(capsys):
    assert cli.main(["ppa"]) == 0
    lines = capsys.readouterr().out.splitlines()
    rows = [l.split(",") for l in lines if l and not l.startswith("#")]
    assert rows[0] == ["name", "leakage_nw", "delay_ps", "area_um2"]
    got = {r[0]: tuple(map(float, r[1:])) for r in rows[1:]}
    assert got == {m.name: (m.leakage_nw, m.delay_ps, m.area_um2) for m in ppa.MACROS}


def test_ppa_designs(capsys, tmp_path):
    args = ["ppa", "--format", "json"]
    for n in (2, 3, 4):
        args += ["--config", str(ROOT / "configs" / f"mnist_{n}layer.json")]
    assert cli.main(args) == 0
    text = capsys.readouterr().out
    reports = json.loads(text[text.index("# estimates") + len("# estimates"):])
    assert [r["synapse_count"] for r in reports] == [389_000, 1_310_000, 3_096_000]

    args = ["ppa", "--config", str(ROOT / "configs" / "twoleadecg_82x2.json"), "--freq", "2e5", "--format", "json"]
    assert cli.main(args) == 0
    text = capsys.readouterr().out
    (r,) = json.loads(text[text.index("# estimates") + len("# estimates"):])
    assert r["freq_hz"] == 2e5


def test_bench_command(tmp_path):
    out = tmp_path / "m.json"
    assert cli.main(["bench", "--suite", "clustering", "--cycles", "200", "--out", str(out)]) == 0
    (res,) = json.loads(out.read_text())
    assert 0 <= res["learned"]["purity"] <= 1


def test_schema_command(tmp_path):
    out = tmp_path / "s.json"
    assert cli.main(["schema", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["oneOf"]
