"""
LTC Prune - Command Line Tests
Exit codes and artifacts of every subcommand on a small configuration.
"""

import json
import xml.etree.ElementTree as ET

import pytest

from ltc_prune.__main__ import main
from ltc_prune.ltc import ObserverModel, init_params
from ltc_prune.utils import load_dataset, save_model

SMALL_CONFIG = """
[mechanical]
duration = 20.0

[train]
hidden_size = 3
max_epochs = 2
n_seeds = 1
warmup_steps = 10
window_len = 40
window_stride = 40

[prune]
max_iters = 2
"""


def run_cli(*argv: str) -> int:
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    return exc.value.code


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL_CONFIG)
    return path


@pytest.fixture
def dataset_path(tmp_path, config_path):
    out = tmp_path / "data"
    assert run_cli("generate", "--testbed", "mechanical", "--config", str(config_path), "--out", str(out)) == 0
    return out / "mechanical.csv"


class TestGenerate:
    """ltc-prune generate."""

    def test_writes_dataset_and_manifest(self, dataset_path):
        """Should write the CSV, its metadata and a manifest listing both."""
        header = dataset_path.read_text().splitlines()[0]
        assert header == "t,F,x,F_x_interaction,noise1,noise2,noise3,xdot"
        manifest = json.loads((dataset_path.parent / "manifest.json").read_text())
        assert manifest["artifacts"]["dataset"] == "mechanical.csv"
        assert manifest["testbed"] == "mechanical"
        assert manifest["schema_version"] == 1

    def test_unknown_testbed(self, tmp_path):
        """Should exit 2 for an unknown testbed."""
        assert run_cli("generate", "--testbed", "pendulum", "--out", str(tmp_path)) == 2

    def test_invalid_config(self, tmp_path):
        """Should exit 2 for an invalid config field."""
        path = tmp_path / "bad.toml"
        path.write_text("[train]\nlr = -1.0\n")
        assert run_cli("generate", "--testbed", "mechanical", "--config", str(path), "--out", str(tmp_path)) == 2

    def test_rerun_from_manifest_is_byte_identical(self, tmp_path, dataset_path):
        """Should reproduce the dataset CSV byte for byte from the manifest."""
        manifest = dataset_path.parent / "manifest.json"
        out = tmp_path / "again"
        assert run_cli("generate", "--testbed", "mechanical", "--config", str(manifest), "--out", str(out)) == 0
        assert (out / "mechanical.csv").read_bytes() == dataset_path.read_bytes()

    def test_seed_override(self, tmp_path, config_path, dataset_path):
        """Should change the noise when --seed changes."""
        out = tmp_path / "seeded"
        assert run_cli("generate", "--testbed", "mechanical", "--config", str(config_path), "--seed", "7", "--out", str(out)) == 0
        assert (out / "mechanical.csv").read_bytes() != dataset_path.read_bytes()


class TestTrainAnalyzeEvaluate:
    """ltc-prune train, analyze and evaluate."""

    def test_train_outputs(self, tmp_path, config_path, dataset_path):
        """Should write the model, loss history and its chart."""
        out = tmp_path / "train"
        code = run_cli("train", "--dataset", str(dataset_path), "--config", str(config_path), "--channels", "F,x", "--out", str(out))
        assert code == 0
        assert (out / "model.json").exists()
        assert (out / "loss_seed0.csv").exists()
        ET.parse(out / "loss_seed0.svg")

    def test_analyze_bar_chart(self, tmp_path, config_path, dataset_path):
        """Should chart one bar per channel in rank order."""
        model_dir = tmp_path / "train"
        run_cli("train", "--dataset", str(dataset_path), "--config", str(config_path), "--out", str(model_dir))
        out = tmp_path / "analyze"
        code = run_cli("analyze", "--model", str(model_dir / "model.json"), "--dataset", str(dataset_path), "--config", str(config_path), "--out", str(out))
        assert code == 0
        rows = (out / "causality.csv").read_text().splitlines()[1:]
        assert len(rows) == 6
        root = ET.parse(out / "causality.svg").getroot()
        bars = [r for r in root.iter("{http://www.w3.org/2000/svg}rect") if r.get("class") == "bar"]
        assert len(bars) == 6

    def test_evaluate_outputs(self, tmp_path, config_path, dataset_path):
        """Should write metrics after warm-up and one prediction row per segment sample."""
        dataset = load_dataset(dataset_path)
        model = ObserverModel(params=init_params(3, 2, seed=0), channel_names=("F", "x"))
        model_path = save_model(model, tmp_path / "m.json")
        out = tmp_path / "eval"
        code = run_cli("evaluate", "--model", str(model_path), "--dataset", str(dataset_path), "--config", str(config_path), "--segment", "test", "--out", str(out))
        assert code == 0
        start, stop = dataset.bounds("test")
        rows = (out / "predictions_test.csv").read_text().splitlines()[1:]
        assert len(rows) == stop - start
        metrics = json.loads((out / "metrics_test.json").read_text())
        assert metrics["n_evaluated"] == stop - start - 10
        assert metrics["rmse_raw"] == pytest.approx(metrics["rmse"] * dataset.target.meta.sigma)

    def test_evaluate_channel_mismatch(self, tmp_path, dataset_path):
        """Should exit 4 when the model needs a channel the dataset lacks."""
        model = ObserverModel(params=init_params(2, 1, seed=0), channel_names=("V",))
        model_path = save_model(model, tmp_path / "m.json")
        assert run_cli("evaluate", "--model", str(model_path), "--dataset", str(dataset_path), "--out", str(tmp_path / "e")) == 4


class TestPrune:
    """ltc-prune prune and report."""

    def test_missing_dataset(self, tmp_path):
        """Should exit 3 for a missing dataset file."""
        assert run_cli("prune", "--dataset", str(tmp_path / "absent.csv"), "--out", str(tmp_path)) == 3

    def test_single_iteration(self, tmp_path, config_path, dataset_path):
        """Should record exactly iteration 0 with --max-iters 1."""
        out = tmp_path / "prune"
        code = run_cli("prune", "--dataset", str(dataset_path), "--config", str(config_path), "--max-iters", "1", "--out", str(out))
        assert code == 0
        trace = json.loads((out / "trace.json").read_text())
        assert len(trace["iterations"]) == 1
        assert trace["stop_reason"] == "max_iters"
        assert (out / "final_model.json").exists()
        assert (out / "iter_0" / "causality.csv").exists()
        assert "Final set" in (out / "summary.md").read_text()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["config"]["prune"]["max_iters"] == 1

    def test_report_rerenders(self, tmp_path, config_path, dataset_path):
        """Should rebuild summary and charts from a finished run and leave its manifest alone."""
        out = tmp_path / "prune"
        run_cli("prune", "--dataset", str(dataset_path), "--config", str(config_path), "--out", str(out))
        (out / "summary.md").unlink()
        before = (out / "manifest.json").read_bytes()
        assert run_cli("report", "--out", str(out)) == 0
        assert (out / "summary.md").exists()
        assert (out / "manifest.json").read_bytes() == before
        report = json.loads((out / "report_manifest.json").read_text())
        assert report["command"] == "report"
        assert report["artifacts"]["summary"] == "summary.md"
        assert report["config"]["prune"]["max_iters"] == 2

    def test_report_skips_empty_loss(self, tmp_path):
        """Should skip an empty loss CSV and record the warning in the report manifest."""
        (tmp_path / "loss_seed0.csv").write_text("epoch,train_loss,val_loss\n")
        assert run_cli("report", "--out", str(tmp_path)) == 0
        assert not (tmp_path / "loss_seed0.svg").exists()
        report = json.loads((tmp_path / "report_manifest.json").read_text())
        assert report["warning_count"] == 1
        assert "loss_seed0.csv" in report["warnings"][0]

    def test_report_on_empty_directory(self, tmp_path):
        """Should exit 3 when there is nothing to report."""
        assert run_cli("report", "--out", str(tmp_path)) == 3
