"""Desk-scale end-to-end runs on the synthetic generators."""
import json
import time

import numpy as np
import pytest
from sklearn.cluster import KMeans
from sklearn.metrics import adjusted_rand_score

from src.cli import main
from src.data import aggregate_matrix, preprocess
from src.data.synthetic import eeg_surrogate, var1_groups
from src.embedding import TsneConfig, direct_affinities, pca_project, tsne_embed
from src.evaluation import trustworthiness
from src.similarity import eros_matrix, euclidean_matrix, similarity_to_distance
from tests.helpers import write_long_csv

pytestmark = pytest.mark.slow

SEEDS = range(20)


def cluster_score(embedding, labels, n_clusters=3):
    found = KMeans(n_clusters=n_clusters, n_init=10, random_state=0).fit_predict(embedding.Y)
    return adjusted_rand_score(labels, found)


def grouped(seed):
    dataset, _ = preprocess(var1_groups(n_groups=3, per_group=20, m=128, n=4, seed=seed))
    return dataset


def test_covariance_structure_is_recovered():
    eros_scores, euclidean_scores = [], []
    for seed in SEEDS:
        dataset = grouped(seed)
        config = TsneConfig.for_size(dataset.k, seed=seed)
        distances = similarity_to_distance(eros_matrix(dataset, progress=False))
        eros_scores.append(cluster_score(tsne_embed(distances, config, progress=False), dataset.labels))

        vectors = euclidean_matrix(aggregate_matrix(dataset, "mean"), ids=dataset.ids)
        euclidean_scores.append(cluster_score(tsne_embed(vectors, config, progress=False), dataset.labels))

    assert sum(score >= 0.9 for score in eros_scores) >= 18
    assert np.mean(euclidean_scores) < np.mean(eros_scores)


def test_direct_affinities_also_separate_groups():
    dataset = grouped(0)
    similarity = eros_matrix(dataset, progress=False)
    embedding = tsne_embed(
        similarity_to_distance(similarity),
        TsneConfig.for_size(dataset.k, seed=0),
        affinities=direct_affinities(similarity),
        labels=dataset.labels,
        progress=False,
    )
    assert cluster_score(embedding, dataset.labels) >= 0.8


EEG_NEIGHBORS = 10


@pytest.fixture(scope="module")
def eeg_trials():
    """Control and alcoholic trials of 256 samples by 64 electrodes."""
    return eeg_surrogate(k=60, m=256, n=64, seed=2)


def test_compare_on_eeg_trials(tmp_path, eeg_trials):
    csv_path = write_long_csv(eeg_trials, tmp_path / "eeg.csv")
    out = tmp_path / "out"

    started = time.perf_counter()
    code = main([
        "compare", "--input", str(csv_path), "--id-column", "id", "--label-column", "label",
        "--time-column", "t", "--out", str(out), "--k-neighbors", str(EEG_NEIGHBORS), "--band", "16",
        "--seed", "0", "--quiet",
    ])
    elapsed = time.perf_counter() - started

    assert code == 0
    assert elapsed < 300
    reports = {r["method"]: r for r in json.loads((out / "compare.json").read_text())}
    assert set(reports) == {"mtsne", "tsne-euclidean", "tsne-dtw", "pca"}
    assert all(r["error"] is None for r in reports.values())
    assert all((out / f"{method}.svg").exists() for method in reports)
    assert reports["mtsne"]["knn_agreement"] >= 0.85
    assert reports["mtsne"]["knn_agreement"] > reports["tsne-euclidean"]["knn_agreement"]


def test_mtsne_is_more_trustworthy_than_pca_across_seeds(eeg_trials):
    dataset, _ = preprocess(eeg_trials)
    distances = similarity_to_distance(eros_matrix(dataset, progress=False))

    vectors = aggregate_matrix(dataset, "mean")
    pca = pca_project(vectors, d=2, ids=dataset.ids, labels=dataset.labels)
    pca_score = trustworthiness(euclidean_matrix(vectors, ids=dataset.ids), pca, EEG_NEIGHBORS)

    wins = 0
    for seed in SEEDS:
        embedding = tsne_embed(distances, TsneConfig.for_size(dataset.k, seed=seed), progress=False)
        wins += trustworthiness(distances, embedding, EEG_NEIGHBORS) >= pca_score
    assert wins >= 15
