import json
import math

import numpy as np
import pandas as pd
import pytest

from qcbounds.report_store import CSV_COLUMNS, ReportStore, config_hash, round_floats


@pytest.fixture
def store(tmp_path):
    return ReportStore(str(tmp_path / "results"))


def test_round_floats():
    data = {"x": 1.0 / 3.0, "nested": [math.pi, {"y": 2}], "flag": True, "missing": None}
    rounded = round_floats(data)
    assert rounded["x"] == 0.333333333333
    assert rounded["nested"][0] == 3.14159265359
    assert rounded["nested"][1] == {"y": 2}
    assert rounded["flag"] is True
    assert rounded["missing"] is None


def test_round_floats_non_finite_and_numpy():
    assert round_floats([math.nan, math.inf]) == [None, None]
    assert round_floats(np.float64(2.0 / 3.0)) == 0.666666666667
    assert round_floats((1, 2)) == [1, 2]


def test_config_hash_ignores_output_block():
    config = {"domain": {"kind": "disc"}, "bounds": ["rfk"]}
    with_output = dict(config, output={"path": "elsewhere.json"})
    reordered = {"bounds": ["rfk"], "domain": {"kind": "disc"}}
    assert config_hash(config) == config_hash(with_output) == config_hash(reordered)
    assert config_hash(config) != config_hash({"domain": {"kind": "disc"}, "bounds": ["monotonicity"]})
    assert len(config_hash(config)) == 64


def test_write_json_is_byte_deterministic(store):
    report = {"case_id": "c", "value": 1.0 / 7.0, "items": [1, 2.5]}
    assert store.write_json("a.json", report)
    assert store.write_json("b.json", dict(report))
    first = store.resolve("a.json").read_bytes()
    assert first == store.resolve("b.json").read_bytes()
    assert first.endswith(b"\n")
    assert list(json.loads(first)) == ["case_id", "value", "items"]


def test_write_json_converts_non_finite(store):
    assert store.write_json("nan.json", {"x": math.nan})
    assert json.loads(store.resolve("nan.json").read_text()) == {"x": None}


def test_write_csv_header(store):
    rows = [
        {"case_id": "c", "row_type": "bound", "name": "rfk", "value": 5.783185962946784},
        {"case_id": "c", "row_type": "bound", "name": "quasidisc", "log10_value": 310.5},
    ]
    assert store.write_csv("c.csv", rows)
    text = store.resolve("c.csv").read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    frame = pd.read_csv(store.resolve("c.csv"))
    assert len(frame) == 2
    assert frame.loc[0, "value"] == pytest.approx(5.78318596295, rel=1e-11)
    assert math.isnan(frame.loc[0, "log10_value"])


def test_resolve_keeps_absolute_paths(store, tmp_path):
    absolute = tmp_path / "report.json"
    assert store.resolve(absolute) == absolute
    assert store.resolve("report.json") == store.output_dir / "report.json"


def test_read_config(store, tmp_path):
    good = tmp_path / "good.json"
    good.write_text('{"domain": {"kind": "disc"}}')
    assert store.read_config(good) == {"domain": {"kind": "disc"}}

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert store.read_config(bad) is None

    array = tmp_path / "array.json"
    array.write_text("[1, 2]")
    assert store.read_config(array) is None

    assert store.read_config(tmp_path / "missing.json") is None


def test_list_configs(store, tmp_path):
    configs = tmp_path / "configs"
    configs.mkdir()
    for name in ("b.json", "a.json", "notes.txt"):
        (configs / name).write_text("{}")
    assert [p.name for p in store.list_configs(configs)] == ["a.json", "b.json"]
    assert store.list_configs(tmp_path / "nowhere") == []


def test_exists_and_delete(store):
    assert store.write_text("notes.txt", "hello")
    assert store.exists("notes.txt")
    assert store.delete("notes.txt")
    assert not store.exists("notes.txt")
    assert not store.delete("notes.txt")
