"""Tests for CSV datasets, fit documents and graph export."""

import json

import numpy as np
import pandas as pd
import pytest

from core.exceptions import SchemaVersionError, SerializationError, UsageError, ValidationError
from dataio import (
    dump_fit,
    edge_frame,
    export_edges,
    export_factor_graph,
    load_dataset,
    load_fit,
    load_sampling_spec,
    parse_fit,
    save_fit,
    write_dataset,
)
from estimation.mgm import fit_mgm
from estimation.mvar import fit_mvar
from models.io import MgmSampling
from models.variables import Dataset, VariableSpec
from timevarying.estimator import fit_tvmgm

SCHEMA = {
    "variables": [
        {"name": "g", "kind": "gaussian"},
        {"name": "b", "kind": "categorical", "levels": 2},
    ]
}


def _write(tmp_path, rows, schema=SCHEMA, header="g,b"):
    data_path = tmp_path / "data.csv"
    data_path.write_text(header + "\n" + "\n".join(rows) + "\n", encoding="utf-8")
    schema_path = tmp_path / "data.schema.json"
    schema_path.write_text(json.dumps(schema), encoding="utf-8")
    return data_path, schema_path


class TestLoadDataset:
    """Tests for reading CSV datasets."""

    def test_one_based_codes_shifted(self, tmp_path):
        data = load_dataset(*_write(tmp_path, ["0.5,1", "-1.0,2", "0.1,2"]))
        np.testing.assert_array_equal(data.values[:, 1], [0, 1, 1])
        assert data.labels(1) == ["1", "2"]
        assert data.names == ["g", "b"]

    def test_zero_based_codes_kept(self, tmp_path):
        data = load_dataset(*_write(tmp_path, ["0.5,0", "-1.0,1"]))
        np.testing.assert_array_equal(data.values[:, 1], [0, 1])
        assert data.labels(1) == ["0", "1"]

    def test_comment_lines_ignored(self, tmp_path):
        data = load_dataset(*_write(tmp_path, ["# command: mixgraph sample", "0.5,0", "-1.0,1"]))
        assert data.n == 2

    def test_too_many_categories(self, tmp_path):
        with pytest.raises(ValidationError, match="exceed"):
            load_dataset(*_write(tmp_path, ["0.5,0", "0.1,1", "0.2,2"]))

    def test_non_integer_code(self, tmp_path):
        with pytest.raises(ValidationError, match="non-integer"):
            load_dataset(*_write(tmp_path, ["0.5,0.5", "0.1,1"]))

    def test_code_out_of_range(self, tmp_path):
        with pytest.raises(ValidationError, match="out of range"):
            load_dataset(*_write(tmp_path, ["0.5,0", "0.1,5"]))

    def test_missing_cell(self, tmp_path):
        with pytest.raises(ValidationError, match="missing or non-numeric"):
            load_dataset(*_write(tmp_path, ["0.5,0", ",1"]))

    def test_missing_column(self, tmp_path):
        with pytest.raises(ValidationError, match="missing column"):
            load_dataset(*_write(tmp_path, ["0.5", "0.1"], header="g"))

    def test_invalid_schema(self, tmp_path):
        schema = {"variables": [{"name": "g", "kind": "gaussian"}, {"name": "g", "kind": "gaussian"}]}
        with pytest.raises(ValidationError, match="invalid schema"):
            load_dataset(*_write(tmp_path, ["0.5,0.1"], schema=schema, header="g,g2"))

    def test_timepoints_must_increase(self, tmp_path):
        schema = dict(SCHEMA, timepoints="t")
        with pytest.raises(ValidationError, match="invalid dataset"):
            load_dataset(*_write(tmp_path, ["0.5,0,2.0", "0.1,1,1.0"], schema=schema, header="g,b,t"))

    def test_written_dataset_reads_back(self, tmp_path, mixed_data):
        path = tmp_path / "out.csv"
        schema_path = write_dataset(mixed_data, path, command="mixgraph sample")
        assert schema_path.name == "out.schema.json"
        assert path.read_text(encoding="utf-8").startswith("# command: mixgraph sample\n")
        again = load_dataset(path, schema_path)
        np.testing.assert_array_equal(again.values, mixed_data.values)
        assert again.names == mixed_data.names


class TestFitDocuments:
    """Tests for saving and loading fits."""

    def test_mgm_round_trip(self, tmp_path, mixed_data, mgm_options, settings):
        fit = fit_mgm(mixed_data, mgm_options, settings=settings)
        path = tmp_path / "fit.json"
        save_fit(fit, path, command="mixgraph fit-mgm", settings=settings)
        loaded = load_fit(path, settings=settings)
        assert loaded.model_dump_json() == fit.model_dump_json()
        assert json.loads(path.read_text())["command"] == "mixgraph fit-mgm"

    def test_tv_round_trip(self, gaussian_pair_data, mgm_options, settings):
        fit = fit_tvmgm(gaussian_pair_data, mgm_options, 2, 0.5, settings=settings)
        document = parse_fit(dump_fit(fit, settings=settings), settings=settings)
        assert document.model_type == "tvmgm"
        assert document.fit.model_dump_json() == fit.model_dump_json()

    def test_undefined_signs_written_as_u(self, mixed_data, mgm_options, settings):
        fit = fit_mgm(mixed_data, mgm_options, settings=settings)
        raw = json.loads(dump_fit(fit, settings=settings))
        assert raw["fit"]["signs"][0][0] == "u"

    def test_truncated_document(self, mixed_data, mgm_options, settings):
        text = dump_fit(fit_mgm(mixed_data, mgm_options, settings=settings), settings=settings)
        with pytest.raises(SerializationError, match="parse error at byte") as err:
            parse_fit(text[:200], settings=settings)
        assert 0 <= err.value.byte_offset <= 200

    def test_parse_error_offset_counts_bytes(self, settings):
        with pytest.raises(SerializationError) as err:
            parse_fit('{"command": "ü", x}', settings=settings)
        assert err.value.byte_offset == 18

    def test_schema_version_mismatch(self, mixed_data, mgm_options, settings):
        raw = json.loads(dump_fit(fit_mgm(mixed_data, mgm_options, settings=settings), settings=settings))
        raw["schema_version"] = "0.9"
        with pytest.raises(SchemaVersionError) as err:
            parse_fit(json.dumps(raw), settings=settings)
        assert err.value.found == "0.9"

    def test_invalid_content(self, settings):
        with pytest.raises(SerializationError, match="invalid fit document"):
            parse_fit(json.dumps({"schema_version": settings.schema_version, "model_type": "mgm"}), settings=settings)

    def test_sampling_spec(self, tmp_path, mgm_reference_model):
        path = tmp_path / "spec.json"
        path.write_text(MgmSampling(model=mgm_reference_model, thin=5).model_dump_json(), encoding="utf-8")
        spec = load_sampling_spec(path)
        assert spec.model_type == "mgm"
        assert spec.thin == 5
        assert spec.model.factors == mgm_reference_model.factors

    def test_sampling_spec_needs_one_model(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"model_type": "mgm"}), encoding="utf-8")
        with pytest.raises(SerializationError, match="invalid sampling specification"):
            load_sampling_spec(path)


class TestExport:
    """Tests for edge-list and factor-graph export."""

    def test_edge_count_matches_adjacency(self, tmp_path, gaussian_pair_data, mgm_options, settings):
        fit = fit_mgm(gaussian_pair_data, mgm_options, settings=settings)
        path = tmp_path / "edges.csv"
        count = export_edges(fit, path)
        assert count == int(np.count_nonzero(np.triu(fit.wadj, 1)))
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["source", "target", "lag", "weight", "sign"]
        assert frame.loc[0, "source"] == "x" and frame.loc[0, "target"] == "y"
        assert frame["lag"].isna().all()

    def test_mvar_edges_directed(self, mvar_options, settings):
        rng = np.random.default_rng(3)
        n = 300
        x = np.zeros(n)
        y = rng.standard_normal(n)
        for t in range(1, n):
            x[t] = 0.7 * y[t - 1] + 0.5 * rng.standard_normal()
        data = Dataset(values=np.column_stack([x, y]), specs=[VariableSpec.gaussian()] * 2, names=["x", "y"])
        fit = fit_mvar(data, [1], mvar_options, settings=settings)
        frame = edge_frame(fit)
        assert len(frame) == int(np.count_nonzero(fit.wadj))
        edge = frame[(frame.source == "y") & (frame.target == "x")]
        assert len(edge) == 1
        assert edge.iloc[0]["lag"] == 1
        assert edge.iloc[0]["sign"] == "1"

    def test_estpoint_index_range(self, gaussian_pair_data, mgm_options, settings):
        fit = fit_tvmgm(gaussian_pair_data, mgm_options, 2, 0.5, settings=settings)
        assert len(edge_frame(fit, 1)) == int(np.count_nonzero(np.triu(fit.fits[1].wadj, 1)))
        with pytest.raises(UsageError):
            edge_frame(fit, 2)

    def test_factor_graph_json(self, tmp_path, gaussian_pair_data, mgm_options, settings):
        fit = fit_mgm(gaussian_pair_data, mgm_options, settings=settings)
        path = tmp_path / "graph.json"
        graph = export_factor_graph(fit, path, command="mixgraph export-graph")
        document = json.loads(path.read_text())
        assert document["command"] == "mixgraph export-graph"
        variables = [node for node in document["nodes"] if node["type"] == "variable"]
        factors = [node for node in document["nodes"] if node["type"] == "factor"]
        assert [node["id"] for node in variables] == ["x", "y", "z"]
        assert len(factors) == len(graph.factors)
        assert {"factor": "factor0", "variable": "x", "weight": graph.edges[0].weight} in document["edges"]

    def test_factor_graph_requires_mgm(self, tmp_path, mvar_options, settings):
        rng = np.random.default_rng(1)
        data = Dataset(values=rng.standard_normal((60, 2)), specs=[VariableSpec.gaussian()] * 2)
        fit = fit_mvar(data, [1], mvar_options, settings=settings)
        with pytest.raises(UsageError):
            export_factor_graph(fit, tmp_path / "graph.json")
