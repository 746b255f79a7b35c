"""Tests for linkx_core.dataset_io module."""

import json

import numpy as np
import pytest

from linkx_core.dataset_io import dataset_checksum, load_dataset, read_meta, save_dataset
from linkx_core.errors import DatasetFormatError, LinkxError
from linkx_core.graph import Dataset, Labels, build_graph


def _write(directory, edges="0\t1\n1\t2\n", labels="0\n1\n0\n", features="0.5\n1.5\n-2\n", meta=None):
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "edges.tsv").write_text(edges)
    (directory / "labels.tsv").write_text(labels)
    (directory / "features.tsv").write_text(features)
    meta = meta or {"n": 3, "directed": False, "num_classes": 2, "feature_dim": 1}
    (directory / "meta.json").write_text(json.dumps(meta))
    return directory


class TestRoundTrip:
    """Tests for save_dataset / load_dataset."""

    def test_roundtrip(self, tmp_path, separable_dataset):
        """Saved datasets load back exactly."""
        save_dataset(separable_dataset, tmp_path / "d")
        loaded = load_dataset(tmp_path / "d")
        assert loaded.graph.same_structure(separable_dataset.graph)
        assert np.array_equal(loaded.features, separable_dataset.features)
        assert np.array_equal(loaded.labels.values, separable_dataset.labels.values)

    def test_provenance(self, tmp_path, pattern_pure_homophily):
        """Provenance is stored in meta.json."""
        save_dataset(pattern_pure_homophily, tmp_path, provenance={"kind": "pure_homophily"})
        assert read_meta(tmp_path)["provenance"] == {"kind": "pure_homophily"}

    def test_no_features(self, tmp_path):
        """D = 0 datasets load with an empty feature matrix."""
        graph = build_graph([(0, 1), (2, 3)], 4)
        dataset = Dataset(graph=graph, features=np.zeros((0, 4)), labels=Labels(np.array([0, 0, 1, 1]), 2))
        save_dataset(dataset, tmp_path)
        loaded = load_dataset(tmp_path)
        assert loaded.features.shape == (0, 4)

    def test_symmetrize(self, tmp_path):
        """Directed data can be loaded as undirected."""
        _write(tmp_path, meta={"n": 3, "directed": True, "num_classes": 2, "feature_dim": 1})
        assert load_dataset(tmp_path).graph.directed
        assert not load_dataset(tmp_path, symmetrize=True).graph.directed


class TestValidation:
    """Malformed dataset directories name the file and line."""

    def test_short_labels(self, tmp_path):
        """Too few labels."""
        _write(tmp_path, labels="0\n1\n")
        with pytest.raises(DatasetFormatError, match="labels.tsv.*expected 3 labels, found 2"):
            load_dataset(tmp_path)

    def test_bad_token(self, tmp_path):
        """Unparseable tokens report their line."""
        _write(tmp_path, edges="0\t1\n1\tx\n")
        with pytest.raises(DatasetFormatError, match=r"edges.tsv:2") as exc:
            load_dataset(tmp_path)
        assert exc.value.line == 2

    def test_edge_out_of_range(self, tmp_path):
        """Edges must reference existing nodes."""
        _write(tmp_path, edges="0\t1\n1\t3\n")
        with pytest.raises(DatasetFormatError, match="out of range"):
            load_dataset(tmp_path)

    def test_label_out_of_range(self, tmp_path):
        """Labels must lie in [0, C)."""
        _write(tmp_path, labels="0\n2\n0\n")
        with pytest.raises(DatasetFormatError, match=r"labels.tsv:2"):
            load_dataset(tmp_path)

    def test_non_finite_feature(self, tmp_path):
        """NaN features are rejected."""
        _write(tmp_path, features="0.5\nnan\n1\n")
        with pytest.raises(DatasetFormatError, match="non-finite"):
            load_dataset(tmp_path)

    def test_wrong_feature_width(self, tmp_path):
        """Rows must have feature_dim values."""
        _write(tmp_path, features="0.5\t1\n1\n1\n")
        with pytest.raises(DatasetFormatError, match="features.tsv:1"):
            load_dataset(tmp_path)

    def test_missing_meta_field(self, tmp_path):
        """meta.json must declare every field."""
        _write(tmp_path, meta={"n": 3, "directed": False, "num_classes": 2})
        with pytest.raises(DatasetFormatError, match="feature_dim"):
            load_dataset(tmp_path)

    def test_non_integer_meta_count(self, tmp_path):
        """Counts in meta.json must be integers; the error names meta.json."""
        _write(tmp_path, meta={"n": "abc", "directed": False, "num_classes": 2, "feature_dim": 1})
        with pytest.raises(DatasetFormatError, match=r"meta\.json.*'n'"):
            load_dataset(tmp_path)

    def test_negative_meta_count(self, tmp_path):
        """Negative counts are rejected."""
        _write(tmp_path, meta={"n": 3, "directed": False, "num_classes": -2, "feature_dim": 1})
        with pytest.raises(DatasetFormatError, match="num_classes"):
            load_dataset(tmp_path)

    def test_string_directed_flag(self, tmp_path):
        """A quoted "false" is not silently read as directed."""
        _write(tmp_path, meta={"n": 3, "directed": "false", "num_classes": 2, "feature_dim": 1})
        with pytest.raises(DatasetFormatError, match=r"meta\.json.*directed"):
            load_dataset(tmp_path)

    def test_format_error_hierarchy(self, tmp_path):
        """Format errors are LinkxErrors and ValueErrors that carry path and line."""
        _write(tmp_path, labels="0\nx\n0\n")
        with pytest.raises(ValueError) as info:
            load_dataset(tmp_path)
        assert isinstance(info.value, LinkxError)
        assert isinstance(info.value, DatasetFormatError)
        assert (info.value.path.name, info.value.line) == ("labels.tsv", 2)

    def test_missing_file(self, tmp_path):
        """Missing files raise FileNotFoundError."""
        _write(tmp_path)
        (tmp_path / "edges.tsv").unlink()
        with pytest.raises(FileNotFoundError, match="edges.tsv"):
            load_dataset(tmp_path)


class TestChecksum:
    """Tests for dataset_checksum."""

    def test_stable(self, tmp_path, pattern_pure_homophily):
        """Same contents, same checksum."""
        save_dataset(pattern_pure_homophily, tmp_path / "a")
        save_dataset(pattern_pure_homophily, tmp_path / "b")
        assert dataset_checksum(tmp_path / "a") == dataset_checksum(tmp_path / "b")

    def test_changes_with_contents(self, tmp_path):
        """Editing one byte changes the checksum."""
        _write(tmp_path)
        before = dataset_checksum(tmp_path)
        (tmp_path / "labels.tsv").write_text("0\n1\n1\n")
        assert dataset_checksum(tmp_path) != before
