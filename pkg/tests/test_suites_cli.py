import csv
import json
import math

import numpy as np
import pytest

from orlab import cli
from orlab import suites as S
from orlab.cli import ConfigError, ExperimentConfig, main
from orlab.grid import Grid1D
from orlab.svg import loglog_svg
from orlab.young import PhiRho


def write_config(tmp_path, **overrides):
    cfg = {"suite": "sawyer", "grid": {"lo": -1, "hi": 1, "n_list": [128, 256]}, "output_dir": str(tmp_path / "out"), "seed": 0}
    cfg.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def test_list_suites(capsys):
    assert len(S.list_suites()) == 9
    assert main(["list-suites"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 9 and out[0].startswith("rescaling")


def test_unknown_suite_is_config_error(tmp_path, capsys):
    assert main(["run", str(write_config(tmp_path, suite="nope"))]) == 2
    assert "registered" in capsys.readouterr().err
    with pytest.raises(KeyError, match="registered"):
        S.get_suite("nope")


@pytest.mark.parametrize(
    "override",
    [{"grid": {"n_list": []}}, {"grid": {"n_list": [256, 128]}}, {"grid": {}}, {"growth": {"kind": "bogus", "params": {}}}],
)
def test_invalid_configs_exit_2(tmp_path, override):
    assert main(["run", str(write_config(tmp_path, **override))]) == 2


def test_malformed_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_unknown_corpus_entry(tmp_path):
    assert main(["run", str(write_config(tmp_path, corpus_names=["indicator", "nope"]))]) == 2


def test_config_round_trip():
    cfg = ExperimentConfig("rewrite", -1.0, 1.0, (128, 256), "out", ("indicator",), PhiRho(1.0), None, 4)
    again = ExperimentConfig.from_json(json.loads(json.dumps(cfg.to_json())))
    assert again == cfg


def test_run_writes_report_csv_and_plots(tmp_path, capsys):
    assert main(["run", str(write_config(tmp_path))]) == 0
    out = tmp_path / "out"
    report = json.loads((out / "report.json").read_text())
    assert set(report) == {"header", "body"}
    body = report["body"]
    assert body["summary"]["pass"] and body["summary"]["failed"] == 0
    for r in body["rows"]:
        assert set(cli.ROW_KEYS) <= set(r)
    with open(out / "summary.csv") as fh:
        lines = list(csv.DictReader(fh))
    assert len(lines) == len(body["rows"])
    assert (out / "sawyer-constant.svg").exists()
    assert list(out.glob("level_curve_*.svg"))
    assert "0 failed" in capsys.readouterr().out


def test_output_dir_override(tmp_path):
    other = tmp_path / "elsewhere"
    assert main(["run", str(write_config(tmp_path)), "--output-dir", str(other)]) == 0
    assert (other / "report.json").exists()


def test_refinement_rows_present_for_stability_suites():
    cfg = ExperimentConfig("sawyer", -1.0, 1.0, (128, 256), "unused", ("triangle",))
    rows = cli.execute(cfg, threads=1)
    drift = [r for r in rows if r["quantity"].endswith("refinement-drift")]
    assert len(drift) == len(S.SAWYER_PAIRS)
    assert all(r["n"] == 256 for r in drift)
    assert rows == sorted(rows, key=cli._sort_key)


def test_failing_row_gives_exit_1(tmp_path, monkeypatch):
    def entry(ctx, name):
        return [S.at_most(name, "always-fails", 2.0, 1.0)]

    fake = S.Suite("fake", "always fails", "none", entry, lambda ctx: ["x"])
    monkeypatch.setitem(S.SUITES, "fake", fake)
    assert main(["run", str(write_config(tmp_path, suite="fake", grid={"n_list": [8]}))]) == 1


def test_counterexample_becomes_failing_row(tmp_path, monkeypatch):
    from orlab.extrap import CounterexampleCandidate

    def entry(ctx, name):
        raise CounterexampleCandidate("g vanishes where f does not")

    fake = S.Suite("fake", "raises", "none", entry, lambda ctx: ["x"])
    monkeypatch.setitem(S.SUITES, "fake", fake)
    cfg = ExperimentConfig("fake", -1.0, 1.0, (8,), str(tmp_path))
    bundle = cli.run(cfg, threads=1)
    assert bundle.exit_code == 1
    assert bundle.body["summary"]["counterexamples"] == 1


def test_threads_do_not_change_rows():
    cfg = ExperimentConfig("rescaling", -1.0, 1.0, (128, 256), "unused")
    assert cli.execute(cfg, threads=1) == cli.execute(cfg, threads=4)


def test_norm_subcommand(capsys):
    args = ["norm", "--fn", "indicator", "--growth", '{"kind": "power", "params": {"p": 2}}', "--measure", "unit", "--n", "256"]
    assert main(args) == 0
    out = json.loads(capsys.readouterr().out)
    # indicator of [0.2, 0.5] under Lebesgue measure
    mass = 0.3
    assert out["luxemburg"]["value"] == pytest.approx(mass**0.5, rel=0.05)
    assert out["orlicz_lorentz_1"]["value"] == pytest.approx(2 * mass**0.5, rel=0.05)
    assert main(["norm", "--fn", "nope", "--growth", '{"kind": "power", "params": {"p": 2}}']) == 2
    assert main(["norm", "--fn", "indicator", "--growth", "[]"]) == 2


def test_weight_constant_subcommand(capsys):
    assert main(["weight-constant", "--weight", "unit", "--p", "2", "--n", "128"]) == 0
    assert json.loads(capsys.readouterr().out)["constant"] == pytest.approx(1.0, rel=1e-12)
    assert main(["weight-constant", "--weight", "pow-0.5", "--p", "1", "--n", "128"]) == 0
    assert main(["weight-constant", "--weight", "nope", "--p", "2"]) == 2


def test_non_finite_values_serialise(tmp_path, monkeypatch):
    def entry(ctx, name):
        return [S.row(name, "blow-up", math.inf, None, False)]

    monkeypatch.setitem(S.SUITES, "fake", S.Suite("fake", "inf", "none", entry, lambda ctx: ["x"]))
    cli.run(ExperimentConfig("fake", -1.0, 1.0, (8,), str(tmp_path)), threads=1)
    body = json.loads((tmp_path / "report.json").read_text())["body"]
    assert body["rows"][0]["constant"] == "inf"


def test_svg_drops_unplottable():
    assert loglog_svg({"a": ([0.0, -1.0], [1.0, 2.0])}, "t", "x", "y") is None
    svg = loglog_svg({"a": ([1.0, 10.0], [1.0, 100.0]), "b": ([2.0], [3.0])}, "t<1>", "x", "y")
    assert svg.startswith("<svg") and "t&lt;1&gt;" in svg and "<polyline" in svg and "<circle" in svg


def test_resolve_functions():
    g = Grid1D.symmetric(64)
    fs = S.resolve_functions(g, ["spike", "rand-02"], seed=1)
    assert list(fs) == ["spike", "rand-02"] and np.any(fs["rand-02"].values)
    with pytest.raises(KeyError):
        S.resolve_functions(g, ["missing"], seed=0)


def test_rescaling_suite_all_rows_pass(tmp_path):
    bundle = cli.run(ExperimentConfig("rescaling", -1.0, 1.0, (256,), str(tmp_path)), threads=2)
    assert bundle.rows and all(r["pass"] for r in bundle.rows)
    assert max(r["constant"] for r in bundle.rows) <= 1e-9


def test_sawyer_summary_one_constant_per_entry_and_n(tmp_path):
    cli.run(ExperimentConfig("sawyer", -1.0, 1.0, (512, 1024), str(tmp_path)), threads=2)
    with open(tmp_path / "summary.csv") as fh:
        rows = [r for r in csv.DictReader(fh) if r["quantity"] == "sawyer-constant"]
    keys = [(r["entry"], r["n"]) for r in rows]
    assert len(keys) == len(set(keys)) == 5 * len(S.SAWYER_PAIRS) * 2
    assert all(math.isfinite(float(r["constant"])) for r in rows)
