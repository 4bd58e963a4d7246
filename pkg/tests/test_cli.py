"""End-to-end tests of the command line."""

import json

import numpy as np
import pandas as pd
import pytest

from main import reproduction_command, run_cli
from models.factor import pairwise_factor_model
from models.io import MgmSampling
from models.variables import VariableSpec

FAST = ["--lambda-sel", "ebic", "--n-lambda", "20"]


@pytest.fixture
def workspace(tmp_path, settings):
    """A sampled dataset with its schema, written through the ``sample`` command."""
    model = pairwise_factor_model(
        [VariableSpec.gaussian(), VariableSpec.gaussian(), VariableSpec.categorical(2)],
        {(0, 1): [[0.5]], (0, 2): [[0.0, 0.9]]},
    )
    spec = tmp_path / "spec.json"
    spec.write_text(MgmSampling(names=["x", "y", "b"], model=model).model_dump_json(), encoding="utf-8")
    data = tmp_path / "data.csv"
    code = run_cli(
        ["sample", "--model", str(spec), "--n", "300", "--seed", "3", "--out", str(data)], settings
    )
    assert code == 0
    return tmp_path


def _data_args(root):
    return ["--data", str(root / "data.csv"), "--schema", str(root / "data.schema.json")]


class TestSample:
    """Tests for the sample command."""

    def test_writes_data_and_schema(self, workspace):
        frame = pd.read_csv(workspace / "data.csv", comment="#")
        assert list(frame.columns) == ["x", "y", "b"]
        assert len(frame) == 300
        assert set(frame["b"]) <= {0, 1}
        schema = json.loads((workspace / "data.schema.json").read_text())
        assert [v["kind"] for v in schema["variables"]] == ["gaussian", "gaussian", "categorical"]
        first = (workspace / "data.csv").read_text().splitlines()[0]
        assert first.startswith("# command: mixgraph sample")

    def test_stationary_needs_n(self, tmp_path, mgm_reference_model, settings):
        spec = tmp_path / "spec.json"
        spec.write_text(MgmSampling(model=mgm_reference_model).model_dump_json(), encoding="utf-8")
        assert run_cli(["sample", "--model", str(spec), "--out", str(tmp_path / "d.csv")], settings) == 2


class TestFit:
    """Tests for the fit commands."""

    def test_fit_mgm(self, workspace, settings):
        out = workspace / "fit.json"
        assert run_cli(["fit-mgm", *_data_args(workspace), "--out", str(out), *FAST], settings) == 0
        document = json.loads(out.read_text())
        assert document["model_type"] == "mgm"
        assert document["command"].startswith("mixgraph fit-mgm --data")
        wadj = np.array(document["fit"]["wadj"])
        assert wadj[0, 1] > 0 and wadj[0, 2] > 0

    def test_reruns_are_byte_identical(self, workspace, settings):
        out = workspace / "fit.json"
        args = ["fit-mgm", *_data_args(workspace), "--out", str(out), "--n-lambda", "10", "--lambda-folds", "5"]
        assert run_cli([*args, "--threads", "1"], settings) == 0
        first = out.read_bytes()
        assert run_cli([*args, "--threads", "3"], settings) == 0
        assert out.read_bytes() == first

    def test_flag_of_other_subcommand(self, workspace, settings):
        args = ["fit-mgm", *_data_args(workspace), "--out", str(workspace / "f.json"), "--lags", "1"]
        assert run_cli(args, settings) == 2

    def test_mvar_requires_lags(self, workspace, settings):
        args = ["fit-mvar", *_data_args(workspace), "--out", str(workspace / "f.json"), *FAST]
        assert run_cli(args, settings) == 2

    def test_fit_tvmvar(self, workspace, settings):
        out = workspace / "tv.json"
        args = ["fit-tvmvar", *_data_args(workspace), "--out", str(out), "--lags", "1,2"]
        args += ["--bandwidth", "0.5", "--estpoints", "0.2,0.8", *FAST]
        assert run_cli(args, settings) == 0
        document = json.loads(out.read_text())
        assert document["fit"]["estpoints"] == [0.2, 0.8]
        assert document["fit"]["fits"][0]["lags"] == [1, 2]

    def test_missing_data_file(self, tmp_path, settings):
        args = ["fit-mgm", "--data", str(tmp_path / "none.csv"), "--schema", str(tmp_path / "none.json")]
        assert run_cli([*args, "--out", str(tmp_path / "f.json")], settings) == 1

    def test_help(self, settings):
        assert run_cli(["--help"], settings) == 0


class TestDownstream:
    """Tests for predict, export-graph and bwselect."""

    @pytest.fixture
    def fitted(self, workspace, settings):
        out = workspace / "fit.json"
        assert run_cli(["fit-mgm", *_data_args(workspace), "--out", str(out), *FAST], settings) == 0
        return out

    def test_predict(self, workspace, fitted, settings):
        out = workspace / "pred.csv"
        assert run_cli(["predict", "--model", str(fitted), *_data_args(workspace), "--out", str(out)], settings) == 0
        predictions = pd.read_csv(out, comment="#")
        assert list(predictions.columns) == ["row", "x", "y", "b", "b:p0", "b:p1"]
        np.testing.assert_allclose(predictions["b:p0"] + predictions["b:p1"], 1.0)
        errors = pd.read_csv(workspace / "pred.errors.csv", comment="#")
        assert errors["variable"].tolist() == ["x", "y", "b"]
        assert errors.loc[0, "r2"] > 0.1
        assert errors.loc[2, "cc"] > 0.5

    def test_tv_predict_errors_per_point(self, workspace, settings):
        fit = workspace / "tv.json"
        args = ["fit-tvmgm", *_data_args(workspace), "--out", str(fit), "--bandwidth", "0.5", "--estpoints", "3"]
        assert run_cli([*args, *FAST], settings) == 0
        out = workspace / "pred.csv"
        args = ["predict", "--model", str(fit), *_data_args(workspace), "--out", str(out), "--tv-method", "closest"]
        assert run_cli(args, settings) == 0
        errors = pd.read_csv(workspace / "pred.errors.csv", comment="#")
        assert len(errors) == 3 * 4
        assert errors["estpoint"].isna().sum() == 3

    def test_export_edges(self, workspace, fitted, settings):
        out = workspace / "edges.csv"
        assert run_cli(["export-graph", "--model", str(fitted), "--out", str(out)], settings) == 0
        edges = pd.read_csv(out, comment="#")
        wadj = np.array(json.loads(fitted.read_text())["fit"]["wadj"])
        assert len(edges) == int(np.count_nonzero(np.triu(wadj, 1)))

    def test_export_factor_graph(self, workspace, fitted, settings):
        out = workspace / "graph.json"
        assert run_cli(["export-graph", "--model", str(fitted), "--factor-graph", "--out", str(out)], settings) == 0
        document = json.loads(out.read_text())
        assert {"id": "x", "type": "variable"} in document["nodes"]
        assert document["command"].startswith("mixgraph export-graph --model")

    def test_export_estpoint_out_of_range(self, workspace, settings):
        fit = workspace / "tv.json"
        args = ["fit-tvmgm", *_data_args(workspace), "--out", str(fit), "--bandwidth", "0.5", "--estpoints", "2"]
        assert run_cli([*args, *FAST], settings) == 0
        export = ["export-graph", "--model", str(fit), "--out", str(workspace / "e.csv")]
        assert run_cli([*export, "--estpoint-index", "1"], settings) == 0
        assert run_cli([*export, "--estpoint-index", "2"], settings) == 2

    def test_bwselect(self, workspace, settings):
        out = workspace / "bw.json"
        args = ["bwselect", *_data_args(workspace), "--model-type", "mgm", "--bw-seq", "0.3,1"]
        args += ["--bw-folds", "2", "--bw-foldsize", "5", "--out", str(out), *FAST]
        assert run_cli(args, settings) == 0
        selection = json.loads(out.read_text())["selection"]
        assert selection["selected"] in (0.3, 1.0)

    def test_bwselect_lags_only_for_mvar(self, workspace, settings):
        args = ["bwselect", *_data_args(workspace), "--model-type", "mgm", "--bw-seq", "0.3"]
        args += ["--lags", "1", "--out", str(workspace / "bw.json")]
        assert run_cli(args, settings) == 2

    def test_bwselect_order_flags_only_for_mgm(self, workspace, settings):
        args = ["bwselect", *_data_args(workspace), "--model-type", "mvar", "--lags", "1", "--bw-seq", "0.3"]
        args += ["--out", str(workspace / "bw.json")]
        assert run_cli([*args, "--k", "3"], settings) == 2
        assert run_cli([*args, "--rule-reg", "or"], settings) == 2
        assert not (workspace / "bw.json").exists()


class TestReproductionCommand:
    """Tests for the echoed command line."""

    def test_threads_left_out(self):
        command = reproduction_command(["fit-mgm", "--data", "a b.csv", "--threads", "4", "--threads=2"])
        assert command == "mixgraph fit-mgm --data 'a b.csv'"
