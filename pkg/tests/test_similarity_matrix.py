import os

import numpy as np
import pytest

from src.errors import ContractViolationError, StaleCacheError
from src.similarity import (
    DISTANCE,
    SIMILARITY,
    PairwiseMatrix,
    cache_key,
    cached_matrix,
    euclidean_matrix,
    similarity_to_distance,
)
from src.utils import read_json, write_json
from tests.helpers import make_dataset


def test_euclidean_matrix_examples():
    distances = euclidean_matrix([[0.0, 0.0], [3.0, 4.0], [0.0, 0.0]], ids=("a", "b", "c"))
    assert distances.data[0, 1] == 5.0
    assert distances.data[0, 2] == 0.0
    assert distances.ids == ("a", "b", "c")


def test_euclidean_matrix_matches_double_loop():
    vectors = np.random.default_rng(0).normal(size=(4, 3))
    distances = euclidean_matrix(vectors)
    for i in range(4):
        for j in range(4):
            assert distances.data[i, j] == pytest.approx(np.sqrt(np.sum((vectors[i] - vectors[j]) ** 2)), abs=1e-12)


@pytest.mark.parametrize("s, d", [(1.0, 0.0), (0.0, np.sqrt(2.0)), (0.5, 1.0)])
def test_similarity_to_distance(s, d):
    similarity = PairwiseMatrix(kind=SIMILARITY, data=[[1.0, s], [s, 1.0]])
    distances = similarity_to_distance(similarity)
    assert distances.kind == DISTANCE
    assert distances.data[0, 1] == pytest.approx(d)
    assert distances.data[0, 0] == 0.0


def test_similarity_to_distance_range_check():
    with pytest.raises(ContractViolationError):
        similarity_to_distance(PairwiseMatrix(kind=SIMILARITY, data=[[1.0, 1.5], [1.5, 1.0]]))
    with pytest.raises(ContractViolationError):
        similarity_to_distance(PairwiseMatrix(kind=DISTANCE, data=[[0.0, 1.0], [1.0, 0.0]]))


@pytest.mark.parametrize(
    "kind, data",
    [
        (DISTANCE, [[0.0, 1.0], [2.0, 0.0]]),
        (DISTANCE, [[0.0, -1.0], [-1.0, 0.0]]),
        (DISTANCE, [[1.0, 1.0], [1.0, 0.0]]),
        (SIMILARITY, [[1.0, np.nan], [np.nan, 1.0]]),
        (SIMILARITY, [[1.0, 0.5, 0.5], [0.5, 1.0, 0.5]]),
        ("kernel", [[1.0]]),
    ],
)
def test_pairwise_matrix_validation(kind, data):
    with pytest.raises(ContractViolationError):
        PairwiseMatrix(kind=kind, data=data)


def test_pairwise_matrix_is_read_only_and_serializes(tmp_path):
    matrix = PairwiseMatrix(kind=DISTANCE, data=[[0.0, 2.0], [2.0, 0.0]], ids=("x", "y"))
    with pytest.raises(ValueError):
        matrix.data[0, 1] = 3.0

    matrix.to_json(str(tmp_path / "m.json"))
    again = PairwiseMatrix.from_json(str(tmp_path / "m.json"))
    assert again.ids == ("x", "y")
    np.testing.assert_array_equal(again.data, matrix.data)

    matrix.to_csv(str(tmp_path / "m.csv"))
    assert (tmp_path / "m.csv").read_text().splitlines()[0] == "x,y"


def test_cache_builds_once_then_loads(tmp_path):
    dataset = make_dataset([np.eye(2), 2 * np.eye(2)])
    key = cache_key(dataset, {"matrix": "test"})
    calls = []

    def build():
        calls.append(1)
        return PairwiseMatrix(kind=DISTANCE, data=[[0.0, 1.5], [1.5, 0.0]], ids=dataset.ids)

    first = cached_matrix(str(tmp_path), "test", key, dataset.ids, build)
    second = cached_matrix(str(tmp_path), "test", key, dataset.ids, build)

    assert len(calls) == 1
    np.testing.assert_array_equal(first.data, second.data)
    assert len(os.listdir(tmp_path)) == 1


def test_cache_key_tracks_values_and_parameters():
    dataset = make_dataset([np.eye(2), 2 * np.eye(2)])
    other = make_dataset([np.eye(2), 3 * np.eye(2)])
    assert cache_key(dataset, {"band": None}) == cache_key(dataset, {"band": None})
    assert cache_key(dataset, {"band": None}) != cache_key(dataset, {"band": 2})
    assert cache_key(dataset, {"band": None}) != cache_key(other, {"band": None})


def test_cache_detects_a_stale_envelope(tmp_path):
    dataset = make_dataset([np.eye(2), 2 * np.eye(2)])
    key = cache_key(dataset, {})
    build = lambda: PairwiseMatrix(kind=DISTANCE, data=[[0.0, 1.0], [1.0, 0.0]], ids=dataset.ids)
    cached_matrix(str(tmp_path), "m", key, dataset.ids, build)

    path = str(tmp_path / os.listdir(tmp_path)[0])
    payload = read_json(path)
    payload["ids"] = ["other0", "other1"]
    write_json(payload, path)

    with pytest.raises(StaleCacheError):
        cached_matrix(str(tmp_path), "m", key, dataset.ids, build)


def test_cache_rejects_a_matrix_built_from_other_data(tmp_path):
    dataset = make_dataset([np.eye(2), 2 * np.eye(2)])
    changed = make_dataset([np.eye(2), 3 * np.eye(2)])
    build = lambda: PairwiseMatrix(kind=DISTANCE, data=[[0.0, 1.0], [1.0, 0.0]], ids=dataset.ids)
    cached_matrix(str(tmp_path), "m", cache_key(dataset, {}), dataset.ids, build)

    with pytest.raises(StaleCacheError) as excinfo:
        cached_matrix(str(tmp_path), "m", cache_key(changed, {}), changed.ids, build)
    assert excinfo.value.exit_code == 1
    assert os.listdir(tmp_path) == ["m.json"]


def test_no_cache_dir_always_builds():
    matrix = cached_matrix(None, "m", "k" * 64, ("a", "b"), lambda: PairwiseMatrix(kind=DISTANCE, data=np.zeros((2, 2))))
    assert matrix.k == 2
