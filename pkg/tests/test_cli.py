import json
import os

import numpy as np
import pandas as pd
import pytest
from sklearn.cluster import KMeans
from sklearn.metrics import adjusted_rand_score

from src.cli import main
from src.cli.config import resolve_config
from src.data.synthetic import activity_series, var1_groups
from src.errors import ValidationError
from tests.helpers import make_dataset, write_long_csv

SCHEMA_FLAGS = ["--id-column", "id", "--label-column", "label", "--time-column", "t"]


def run(command, csv_path, out, *extra):
    return main([command, "--input", str(csv_path), *SCHEMA_FLAGS, "--out", str(out), "--quiet", *extra])


@pytest.fixture
def offset_blobs_csv(tmp_path):
    """Two groups of noisy 2-variable series, one around 0 and one around 5."""
    rng = np.random.default_rng(21)
    arrays = [rng.normal(0.0, 0.3, (16, 2)) + (5.0 if i >= 10 else 0.0) for i in range(20)]
    labels = ["low"] * 10 + ["high"] * 10
    return write_long_csv(make_dataset(arrays, labels), tmp_path / "blobs.csv")


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["embed", "--help"])
    assert excinfo.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--input", "--schema", "--window", "--method", "--dim", "--perplexity", "--iterations",
                 "--learning-rate", "--seed", "--aggregator", "--affinity-from", "--flatten", "--out"):
        assert flag in out


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["embed", "--no-such-flag"])
    assert excinfo.value.code == 2


def test_empty_csv_exits_with_2(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run("preprocess", empty, tmp_path / "out") == 2
    assert "empty input" in capsys.readouterr().err


def test_invalid_window_exits_with_2(two_groups_csv, tmp_path):
    assert run("preprocess", two_groups_csv, tmp_path / "out", "--window", "0") == 2


def test_preprocess_cuts_activity_days(tmp_path):
    dataset, _ = activity_series(days=51, seed=1)
    csv_path = write_long_csv(dataset, tmp_path / "activity.csv", id_column="id", time_column="t")
    out = tmp_path / "out"

    assert run("preprocess", csv_path, out, "--window", "24") == 0

    assert len(os.listdir(out / "items")) == 51
    report = json.loads((out / "preprocess_report.json").read_text())
    assert report["window"] == 24
    assert report["dropped_rows"] == 0
    frame = pd.read_csv(out / "preprocessed.csv")
    assert len(frame) == 1224
    np.testing.assert_allclose(frame[["steps", "calories"]].mean(), 0.0, atol=1e-9)


def test_embed_is_reproducible(two_groups_csv, tmp_path):
    flags = ("--method", "mtsne", "--dim", "3", "--seed", "7", "--iterations", "300")
    assert run("embed", two_groups_csv, tmp_path / "a", *flags) == 0
    assert run("embed", two_groups_csv, tmp_path / "b", *flags) == 0

    first = (tmp_path / "a" / "mtsne_embedding.csv").read_bytes()
    assert first == (tmp_path / "b" / "mtsne_embedding.csv").read_bytes()
    assert first.decode().splitlines()[0] == "id,label,y1,y2,y3"
    assert (tmp_path / "a" / "mtsne.svg").exists()
    assert os.listdir(tmp_path / "a" / "cache")

    sidecar = json.loads((tmp_path / "a" / "mtsne_embedding.json").read_text())
    assert sidecar["seed"] == 7
    assert len(sidecar["cost_trace"]) == 300
    assert sidecar["run_config"]["method"] == "mtsne"


def test_cached_matrix_is_reused(two_groups_csv, tmp_path):
    flags = ("--method", "mtsne", "--iterations", "250")
    assert run("embed", two_groups_csv, tmp_path / "out", *flags) == 0
    first = (tmp_path / "out" / "mtsne_embedding.csv").read_bytes()
    assert run("embed", two_groups_csv, tmp_path / "out", *flags) == 0
    assert (tmp_path / "out" / "mtsne_embedding.csv").read_bytes() == first
    assert len(os.listdir(tmp_path / "out" / "cache")) == 1


def test_changed_input_hits_a_stale_cache(two_groups, tmp_path, capsys):
    first = write_long_csv(two_groups, tmp_path / "first.csv")
    second = write_long_csv(var1_groups(n_groups=2, per_group=10, m=64, n=3, seed=4), tmp_path / "second.csv")
    out = tmp_path / "out"
    flags = ("--method", "mtsne", "--iterations", "250")

    assert run("embed", first, out, *flags) == 0
    capsys.readouterr()
    assert run("embed", second, out, *flags) == 1
    assert "does not match the current dataset" in capsys.readouterr().err
    assert run("embed", second, out, *flags, "--no-cache") == 0


def test_pca_on_rank_one_data(tmp_path):
    rng = np.random.default_rng(3)
    direction, wiggle = np.array([1.0, -2.0, 0.5]), np.array([0.3, 0.1, -0.2])
    signs = np.array([1.0, -1.0, 1.0, -1.0])[:, None]
    arrays = [c * direction + signs * wiggle for c in rng.normal(size=8)]
    csv_path = write_long_csv(make_dataset(arrays, ["a"] * 8), tmp_path / "rank1.csv")

    assert run("embed", csv_path, tmp_path / "out", "--method", "pca", "--dim", "2") == 0

    frame = pd.read_csv(tmp_path / "out" / "pca_embedding.csv")
    assert np.all(np.abs(frame["y2"]) <= 1e-8)


def test_dtw_embedding_separates_offset_groups(offset_blobs_csv, tmp_path):
    assert run("embed", offset_blobs_csv, tmp_path / "out", "--method", "tsne-dtw", "--seed", "2") == 0

    frame = pd.read_csv(tmp_path / "out" / "tsne-dtw_embedding.csv")
    found = KMeans(n_clusters=2, n_init=10, random_state=0).fit_predict(frame[["y1", "y2"]].to_numpy())
    assert adjusted_rand_score(frame["label"], found) >= 0.9


def test_compare_reports_every_method(two_groups_csv, tmp_path, capsys):
    out = tmp_path / "out"
    assert run("compare", two_groups_csv, out, "--k-neighbors", "5", "--seed", "1") == 0

    reports = json.loads((out / "compare.json").read_text())
    assert [r["method"] for r in reports] == ["mtsne", "tsne-euclidean", "tsne-dtw", "pca"]
    for report in reports:
        assert report["error"] is None
        assert 0.0 <= report["knn_agreement"] <= 1.0
        assert 0.0 <= report["trustworthiness"] <= 1.0
        assert report["k_neighbors"] == 5
        assert (out / f"{report['method']}.svg").exists()
    assert reports[0]["knn_agreement"] >= 0.9
    assert json.loads(capsys.readouterr().out) == reports


def test_compare_without_labels_fails_per_method(tmp_path):
    rng = np.random.default_rng(0)
    csv_path = write_long_csv(make_dataset([rng.normal(size=(12, 2)) for _ in range(8)]), tmp_path / "x.csv")
    out = tmp_path / "out"

    assert run("compare", csv_path, out, "--k-neighbors", "2") == 2

    reports = json.loads((out / "compare.json").read_text())
    assert len(reports) == 4
    assert all("no label" in r["error"] for r in reports)


def test_config_file_sits_below_flags(two_groups_csv, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"method": "pca", "dim": 3, "aggregate": "max"}))
    out = tmp_path / "out"

    assert run("embed", two_groups_csv, out, "--config", str(config), "--dim", "2") == 0

    sidecar = json.loads((out / "pca_embedding.json").read_text())
    assert sidecar["run_config"]["dim"] == 2
    assert sidecar["run_config"]["aggregate"] == "max"
    assert sidecar["run_config"]["schema"]["id_column"] == "id"


def test_unknown_config_key(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"methd": "pca"}))
    with pytest.raises(ValidationError):
        resolve_config({}, str(config))


def test_render_annotates_from_the_sidecar(tmp_path):
    dataset, _ = activity_series(days=6, seed=5)
    csv_path = write_long_csv(dataset, tmp_path / "activity.csv")
    out = tmp_path / "out"
    assert run("embed", csv_path, out, "--window", "24", "--method", "pca", "--aggregate", "sum,sum,mean,max,min") == 0

    target = tmp_path / "plots" / "days.svg"
    code = main(["render", "--input", str(out / "pca_embedding.csv"), "--out", str(target),
                 "--annotate", "{id}_{agg0}", "--quiet"])

    assert code == 0
    document = target.read_text()
    fields = json.loads((out / "pca_embedding.json").read_text())["annotation_fields"]
    for item_id, values in fields.items():
        assert f">{item_id}_{values['agg0']}</text>" in document
